// Compactly supported radial kernels, knot densities and their rasterization.
#pragma once

#include "sphereconv/solids.hpp"

#include <limits>
#include <optional>

namespace sphereconv {

/// Smoothness exponent of the cut-off kernel. alpha = +inf is the sharp
/// indicator of the open unit interval.
struct MollifierParams {
  double alpha = 2.0;

  static MollifierParams sharp() { return {std::numeric_limits<double>::infinity()}; }
  bool is_sharp() const { return std::isinf(alpha); }
};

/// psi_alpha(x) = exp(1 / (1 - |x|^-alpha)) on |x| < 1, 1 at x = 0, else 0.
double mollifier(double x, const MollifierParams& p = {});

/// psi(|x - center| / radius); support is the open ball.
double ball_bump(const Vec3& x, const Vec3& center, double radius,
                 const MollifierParams& p = {});

/// Downward trimmed half-cone bump. With (x', r') = a - apex it is
/// psi(|x'| / r') psi(1 + 2 r' / trim) for r' < 0 and 0 otherwise, so the
/// support is the open half-cone of height `trim` below the apex.
double cone_bump(const Vec4& a, const Vec4& apex, double trim,
                 const MollifierParams& p = {});

struct Ball {
  Vec3 center;
  double radius;
};

/// Equiradius knots: ball centers sharing one radius.
class KnotSet3 {
 public:
  KnotSet3() = default;
  KnotSet3(std::vector<Vec3> points, double radius, std::vector<double> weights = {});

  const std::vector<Vec3>& points() const { return points_; }
  double radius() const { return radius_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Vec3> points_;
  double radius_ = 1.0;
  std::vector<double> weights_;
};

/// Nonequiradius knots: lifted (center, radius) apexes with a shared cone
/// trim height. `mirrored` tags the r-mirror image; the geometry of the r = 0
/// slice is the same either way.
class KnotSet4 {
 public:
  KnotSet4() = default;
  KnotSet4(std::vector<Ball> knots, double trim_height, std::vector<double> weights = {});

  /// Lifts equiradius knots; every apex gets the shared radius.
  static KnotSet4 lift(const KnotSet3& k, double trim_height);

  const std::vector<Ball>& knots() const { return knots_; }
  const std::vector<double>& weights() const { return weights_; }
  double trim_height() const { return trim_; }
  bool mirrored() const { return mirrored_; }
  std::size_t size() const { return knots_.size(); }
  bool empty() const { return knots_.empty(); }
  double max_radius() const;
  double min_radius() const;

  /// Exact closed union-of-balls membership.
  bool union_contains(const Vec3& x) const;
  /// Open union-of-balls membership (support of the bump sum).
  bool union_contains_open(const Vec3& x) const;

  KnotSet4 with_mirror_flag(bool flag) const;

 private:
  std::vector<Ball> knots_;
  std::vector<double> weights_;
  double trim_ = 1.0;
  bool mirrored_ = false;
};

/// One flag per grid node.
struct OccupancyBitmap {
  UniformGrid grid;
  std::vector<char> bits;

  std::size_t count() const;
  bool operator==(const OccupancyBitmap& other) const {
    return grid == other.grid && bits == other.bits;
  }
};

/// field[node] = sum_i c_i ball_bump(node, x_i, r, p). Warns when a ball
/// reaches outside the grid.
ScalarField rasterize_bumps3(const KnotSet3& k, const UniformGrid& grid,
                             const MollifierParams& p = {});

/// Nonequiradius 3D field: sum_i c_i ball_bump(node, x_i, r_i, p).
ScalarField rasterize_balls(const KnotSet4& k, const UniformGrid& grid,
                            const MollifierParams& p = {});

/// 4D field sum_i c_i cone_bump(node, (x_i, r_i), trim, p) on a 4D grid.
ScalarField rasterize_bumps4(const KnotSet4& k, const UniformGrid& grid4,
                             const MollifierParams& p = {});

/// Generic splat: field[node] += w_i * profile(i, |node - c_i|) for nodes
/// strictly inside ball i.
ScalarField rasterize_radial(const std::vector<Ball>& balls, const std::vector<double>& w,
                             const UniformGrid& grid,
                             const std::function<double(std::size_t, double)>& profile);

/// (f_B(0,r1) * f_B(0,r2))(d) for ball bumps, by quadrature. Support is
/// d < r1 + r2.
double convolved_ball_bumps(double d, double r1, double r2, const MollifierParams& p = {});

/// convolved_ball_bumps tabulated over [0, r1 + r2] with cubic interpolation.
class ConvolvedKernelTable {
 public:
  ConvolvedKernelTable(double r1, double r2, const MollifierParams& p = {},
                       int samples = 1024);
  double operator()(double d) const;
  double support() const { return support_; }

 private:
  double support_;
  std::vector<double> values_;
};

/// Default numerical threshold for the regularized 0-sublevel.
double default_sublevel_threshold(const ScalarField& f);

/// Bits set where value > tau; tau defaults to 1e-9 max(field).
OccupancyBitmap sublevel_extract(const ScalarField& f, std::optional<double> tau = {});

/// Riemann sum of the field over its grid.
double volume_functional(const ScalarField& f);

/// Riemann-sum L2 inner product; throws UsageError on grid mismatch.
double inner_product(const ScalarField& a, const ScalarField& b);

/// Uniform samples on the boundary of a union of balls (sphere points not
/// strictly inside another ball) with the exact distance-to-union query.
SetSampler ball_union_sampler(const KnotSet4& k);

}  // namespace sphereconv
