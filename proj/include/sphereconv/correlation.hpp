// Obstacle knot algebra, offset slices, the combinatorial collision oracle and
// the spatial gap field.
#pragma once

#include "sphereconv/motions.hpp"

#include <optional>
#include <utility>

namespace sphereconv {

constexpr std::size_t kDefaultPairCap = 100'000'000;

/// Tags the set as its r-mirror image; applying it twice restores the tag.
KnotSet4 mirror_r(const KnotSet4& k);

/// Configuration obstacle at a fixed rotation: knots (x_i - R x_j, r_i + r_j)
/// with weights c_i c_j, enumerated i outer, j inner. Trim heights add.
struct ObstacleKnots {
  KnotSet4 knots;
  Mat3 R = Mat3::Identity();
};

ObstacleKnots obstacle_knots(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                             std::size_t pair_cap = kDefaultPairCap);
ObstacleKnots obstacle_knots(const KnotSet3& k1, const KnotSet3& k2, const Mat3& R,
                             std::size_t pair_cap = kDefaultPairCap);

/// Balls B(c_k, s_k - level); balls whose radius would be <= 0 are dropped.
KnotSet4 slice_at(const ObstacleKnots& o, double level);

struct CollisionResult {
  bool hit = false;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// Exact test: hit iff some pair has |R x_j + t - x_i| <= r_i + r_j. The
/// witness is the lexicographically first colliding (i, j).
CollisionResult collide(const KnotSet4& k1, const KnotSet4& k2, const RigidMotion& m);
CollisionResult collide(const KnotSet3& k1, const KnotSet3& k2, const RigidMotion& m);

/// Direct 4D predicate for two trimmed half-cones of height `trim`. A cone
/// with apex (x, a) opens toward -r; when `flipped` it is the r-mirror image
/// with apex (x, -a) opening toward +r.
bool trimmed_cones_intersect(const Vec4& apex1, bool flipped1, const Vec4& apex2,
                             bool flipped2, double trim);

enum class GapKernel {
  /// psi(|t - c| / (r_i + r_j)): same support, cheap.
  Substituted,
  /// The true correlation of the two ball bumps.
  Convolved,
};

/// g(t) = sum_ij w_ij K_ij(t - (x_i - R x_j)) on the nodes of `grid`, with
/// every obstacle radius reduced by `level` (level < 0 grows them).
ScalarField gap_field_spatial(const KnotSet4& k1, const KnotSet4& k2, const Mat3& R,
                              const UniformGrid& grid, const MollifierParams& p = {},
                              double level = 0.0, GapKernel kernel = GapKernel::Substituted);
ScalarField gap_field_spatial(const KnotSet3& k1, const KnotSet3& k2, const Mat3& R,
                              const UniformGrid& grid, const MollifierParams& p = {},
                              double level = 0.0, GapKernel kernel = GapKernel::Substituted);

/// Exact gap at one translation (substituted kernel).
double gap_at(const KnotSet4& k1, const KnotSet4& k2, const RigidMotion& m,
              const MollifierParams& p = {}, double level = 0.0);

}  // namespace sphereconv
