// Greedy spherical decomposition of a solid into A1 (inscribed balls),
// A2 (expanded by epsilon) and A3 (engulfed balls removed).
#pragma once

#include "sphereconv/kernels.hpp"

#include <optional>

namespace sphereconv {

enum class Criterion { Distance, SdfProxy };

Criterion parse_criterion(const std::string& name);
std::string criterion_name(Criterion c);

struct DecompositionParams {
  double mu = 0.25;
  Criterion criterion = Criterion::SdfProxy;
  std::optional<std::size_t> max_balls;
  /// Defaults to 20 m^(2/3).
  std::optional<std::size_t> boundary_sample_count;
  std::uint64_t seed = 0;
};

struct DecompositionStats {
  std::size_t m = 0;
  double epsilon = 0.0;
  double mu = 0.0;
  std::size_t n12 = 0;
  std::size_t n3 = 0;
  std::size_t interior_nodes = 0;
  /// Selections made after the candidate queue ran dry with nodes uncovered.
  std::size_t fallback_picks = 0;
  double t0_ms = 0.0, t1_ms = 0.0, t2_ms = 0.0, t3_ms = 0.0;
};

struct DecompositionResult {
  KnotSet4 a1, a2, a3;
  double epsilon = 0.0;
  DecompositionStats stats;
};

/// Raised when max_balls is hit before every interior node is covered.
class IncompleteDecomposition : public ResourceError {
 public:
  IncompleteDecomposition(const std::string& what, KnotSet4 partial)
      : ResourceError(what), partial_(std::move(partial)) {}
  const KnotSet4& partial() const { return partial_; }

 private:
  KnotSet4 partial_;
};

/// r[i] = distance_to_boundary(s, node(X[i])).
std::vector<double> compute_distance_field(const UniformGrid& g, const NodeSet& X,
                                           const Solid& s);

/// score[i] = r[i] * #{ y : |node(X[i]) - y| <= r[i] + delta }.
std::vector<double> compute_sdf_proxy(const UniformGrid& g, const NodeSet& X,
                                      const std::vector<double>& radii,
                                      const std::vector<Vec3>& boundary_samples,
                                      double delta);

/// Step 1 of the pipeline over precomputed fields. `score` orders the
/// candidates; the emitted radius is always radii[i]. Knots get trim height
/// `trim`.
KnotSet4 greedy_decompose(const UniformGrid& g, const NodeSet& X,
                          const std::vector<double>& radii,
                          const std::vector<double>& score, double mu,
                          std::optional<std::size_t> max_balls, double trim,
                          std::size_t* fallback_picks = nullptr);

KnotSet4 expand(const KnotSet4& a1, double epsilon);

/// Keeps a subset of A2 such that every A1 ball is engulfed by some kept
/// expanded ball (greedy cover, most engulfed first, then larger radius, then
/// lower index). Of two identical knots the lower index survives.
KnotSet4 reduce(const KnotSet4& a1, const KnotSet4& a2);

DecompositionResult decompose(const Solid& s, const UniformGrid& g,
                              const DecompositionParams& params = {});

std::string stats_csv_header();
std::string stats_csv_row(const DecompositionStats& st);

}  // namespace sphereconv
