// Collision predicate service, shape-complementarity scoring and offset
// obstacles.
#pragma once

#include "sphereconv/spectral.hpp"

namespace sphereconv {

enum class Verdict { Miss, Hit, Indeterminate };

std::string verdict_name(Verdict v);

/// Spectra prepared once per solid pair orientation for spectral queries.
struct SpectralQueryContext {
  SpectralQueryContext(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                       const UniformGrid& grid, const MollifierParams& p = {});

  TruncationPlan plan;
  PreparedSpectrum f1, f2;
  Mat3 R;
  /// 1e-6 |F1| |F2|.
  double tau;
};

struct PredicateResult {
  Verdict verdict = Verdict::Miss;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  /// Spectral mode only.
  std::optional<double> g;
  std::optional<double> error_bound;
};

PredicateResult collision_predicate(const KnotSet4& k1, const KnotSet4& k2,
                                    const RigidMotion& m);

/// Hit when g - err > tau, miss when g + err <= tau, otherwise indeterminate.
/// The context rotation must match m.R.
PredicateResult collision_predicate(const SpectralQueryContext& ctx, const RigidMotion& m,
                                    std::optional<std::size_t> m_prime = {});

struct SCParams {
  double lambda = 2.0;
  /// Skin offset; 0 means the grid epsilon.
  double r0 = 0.0;
  MollifierParams mollifier;

  void validate() const;
};

struct SCTerms {
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
};

double sc_combine(const SCTerms& t, double lambda);

struct SCResult {
  SCTerms terms;
  double score = 0.0;
};

struct SCFieldResult {
  ScalarField t1, t2, t3, score;
};

/// Skin offset actually used: params.r0, or epsilon of `grid` when unset.
double resolve_r0(const SCParams& params, const UniformGrid& grid);

/// Terms at a single configuration by direct gap evaluation.
SCResult sc_score(const KnotSet4& k1, const KnotSet4& k2, const RigidMotion& m,
                  const SCParams& params);

/// Full translation grid, three spatial gap evaluations. Throws ClippingError
/// when the grown obstacle reaches the box boundary.
SCFieldResult sc_score_field(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                             const UniformGrid& grid, const SCParams& params);

/// Full translation grid from the nonequiradius Fourier gap, with the three
/// offsets combined in the frequency domain before one inverse transform.
SCFieldResult sc_score_field_spectral(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                                      const UniformGrid& grid, const SCParams& params);

class ClippingError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Obstacle balls of the d-offset solids: every radius grown by d.
KnotSet4 offset_obstacle(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R, double d,
                         std::size_t pair_cap = kDefaultPairCap);

std::string score_csv_header();
std::string score_csv_row(const std::string& motion_literal, const Vec3& t, const SCResult& r);

}  // namespace sphereconv
