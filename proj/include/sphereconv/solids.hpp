// Mesh-backed solids, uniform node lattices and sampled scalar fields.
#pragma once

#include "sphereconv/common.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <vector>

namespace sphereconv {

using Triangle = std::array<int, 3>;

/// Cubic node lattice (2L/n) Z^3 ∩ [-L, L)^3, optionally lifted to 4D with
/// an extra radius axis of `r_count` nodes over the same [-L, L).
/// Node indices run x-fastest: idx = ix + n*(iy + n*(iz + n*ir)).
class UniformGrid {
 public:
  UniformGrid(double half_extent, int per_axis, int r_count = 0);

  /// Builds a 3D grid of m nodes; m must be a perfect cube.
  static UniformGrid from_node_count(double half_extent, std::int64_t m);

  double half_extent() const { return half_extent_; }
  int per_axis() const { return n_; }
  int r_count() const { return nr_; }
  int dimension() const { return nr_ > 0 ? 4 : 3; }
  std::size_t node_count() const;
  std::size_t spatial_node_count() const;
  std::array<int, 4> dims() const { return {n_, n_, n_, nr_ > 0 ? nr_ : 1}; }

  double spacing() const { return 2.0 * half_extent_ / n_; }
  double r_spacing() const;
  /// Half-diagonal of a grid cell, sqrt(3) L / n.
  double epsilon() const;

  double axis_coord(int k) const { return -half_extent_ + k * spacing(); }
  double r_coord(int k) const { return -half_extent_ + k * r_spacing(); }

  std::size_t index(int ix, int iy, int iz, int ir = 0) const;
  std::array<int, 4> coords(std::size_t idx) const;
  Vec3 node(std::size_t idx) const;
  double node_r(std::size_t idx) const;

  /// Index range [lo, hi] of nodes whose coordinate lies in [a, b], clamped
  /// to the lattice. Returns false when the range is empty.
  bool axis_range(double a, double b, int& lo, int& hi) const;
  bool r_range(double a, double b, int& lo, int& hi) const;

  bool operator==(const UniformGrid& other) const = default;

 private:
  double half_extent_;
  int n_;
  int nr_;
};

/// One real sample per grid node.
struct ScalarField {
  ScalarField(UniformGrid g, std::vector<double> v);
  explicit ScalarField(UniformGrid g);

  UniformGrid grid;
  std::vector<double> values;

  double max_value() const;
  /// The 3D restriction at radius-axis node `ir` of a 4D field.
  ScalarField slice_r(int ir) const;
};

/// Strictly increasing list of node indices.
using NodeSet = std::vector<std::size_t>;

/// Thrown by mesh loading and validation; `kind` tells the failure apart.
class MeshError : public Error {
 public:
  enum class Kind { Parse, NotWatertight, InconsistentOrientation, OutOfBounds };
  MeshError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace detail {
class TriangleBvh;
}

/// Closed watertight triangulated solid inside [-L, L)^3 with inclusion and
/// boundary-distance queries. Immutable; queries are thread-safe.
class Solid {
 public:
  /// Validates watertightness and orientation. Inward-facing meshes are
  /// flipped rather than rejected.
  Solid(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
        double half_extent);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  double half_extent() const { return half_extent_; }
  double area() const { return total_area_; }
  double volume() const;
  Vec3 bbox_min() const { return bbox_min_; }
  Vec3 bbox_max() const { return bbox_max_; }

  /// True iff x lies in the closed solid (ray-crossing parity).
  bool contains(const Vec3& x) const;
  /// Exact Euclidean distance from x to the nearest triangle.
  double distance_to_boundary(const Vec3& x) const;
  /// Area-weighted uniform sample on the boundary surface.
  Vec3 sample_boundary(std::mt19937_64& rng) const;

 private:
  int ray_parity(const Vec3& x, const Vec3& dir, bool& degenerate,
                 bool& on_surface) const;

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  double half_extent_;
  Vec3 bbox_min_, bbox_max_;
  std::vector<double> cumulative_area_;
  double total_area_ = 0.0;
  std::shared_ptr<const detail::TriangleBvh> bvh_;
};

/// Recenters the bounding box on the origin and scales uniformly so the
/// largest half-extent is 0.9 L, then validates.
Solid make_normalized_solid(std::vector<Vec3> vertices,
                            std::vector<Triangle> triangles, double half_extent);

/// Reads an ASCII OBJ ("v"/"f") or ASCII STL file and normalizes it.
Solid load_mesh(const std::filesystem::path& path, double half_extent);

/// Writes a solid as ASCII OBJ.
void save_obj(const Solid& solid, const std::filesystem::path& path);

/// Exact closest-point distance from p to triangle (a, b, c).
double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c);

/// Grid nodes for which s.contains() holds.
NodeSet interior_nodes(const UniformGrid& grid, const Solid& s);

/// A set known through boundary-dense samples and a distance-to-set query.
struct SetSampler {
  std::function<Vec3(std::mt19937_64&)> sample;
  std::function<double(const Vec3&)> distance;
};

SetSampler boundary_sampler(const Solid& s);
SetSampler point_cloud_sampler(std::vector<Vec3> points);

/// Symmetric sampled Hausdorff distance: max of both directed estimates,
/// each over `samples` draws. Underestimates d_H, converging from below.
double hausdorff_estimate(const SetSampler& a, const SetSampler& b,
                          std::size_t samples, std::uint64_t seed = 0);

}  // namespace sphereconv
