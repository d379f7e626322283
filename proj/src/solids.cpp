#include "sphereconv/solids.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace sphereconv {

// ---------------------------------------------------------------------------
// UniformGrid

UniformGrid::UniformGrid(double half_extent, int per_axis, int r_count)
    : half_extent_(half_extent), n_(per_axis), nr_(r_count) {
  if (!(half_extent > 0.0) || !std::isfinite(half_extent))
    throw UsageError("grid half-extent must be positive and finite");
  if (per_axis <= 0) throw UsageError("grid needs at least one node per axis");
  if (r_count < 0) throw UsageError("negative radius-axis node count");
}

UniformGrid UniformGrid::from_node_count(double half_extent, std::int64_t m) {
  if (m <= 0) throw UsageError("grid size must be positive");
  auto n = static_cast<std::int64_t>(std::llround(std::cbrt(static_cast<double>(m))));
  for (std::int64_t c = std::max<std::int64_t>(1, n - 1); c <= n + 1; ++c) {
    if (c * c * c == m) return UniformGrid(half_extent, static_cast<int>(c));
  }
  throw UsageError("grid size " + std::to_string(m) + " is not a perfect cube");
}

std::size_t UniformGrid::spatial_node_count() const {
  return static_cast<std::size_t>(n_) * n_ * n_;
}

std::size_t UniformGrid::node_count() const {
  return spatial_node_count() * static_cast<std::size_t>(nr_ > 0 ? nr_ : 1);
}

double UniformGrid::r_spacing() const {
  return nr_ > 0 ? 2.0 * half_extent_ / nr_ : 0.0;
}

double UniformGrid::epsilon() const { return std::sqrt(3.0) * half_extent_ / n_; }

std::size_t UniformGrid::index(int ix, int iy, int iz, int ir) const {
  return static_cast<std::size_t>(ix) +
         static_cast<std::size_t>(n_) *
             (iy + static_cast<std::size_t>(n_) *
                       (iz + static_cast<std::size_t>(n_) * ir));
}

std::array<int, 4> UniformGrid::coords(std::size_t idx) const {
  std::array<int, 4> c{};
  c[0] = static_cast<int>(idx % n_);
  idx /= n_;
  c[1] = static_cast<int>(idx % n_);
  idx /= n_;
  c[2] = static_cast<int>(idx % n_);
  c[3] = static_cast<int>(idx / n_);
  return c;
}

Vec3 UniformGrid::node(std::size_t idx) const {
  const auto c = coords(idx);
  return {axis_coord(c[0]), axis_coord(c[1]), axis_coord(c[2])};
}

double UniformGrid::node_r(std::size_t idx) const {
  return nr_ > 0 ? r_coord(coords(idx)[3]) : 0.0;
}

namespace {

bool clamp_range(double a, double b, double origin, double step, int count,
                 int& lo, int& hi) {
  lo = static_cast<int>(std::ceil((a - origin) / step - 1e-12));
  hi = static_cast<int>(std::floor((b - origin) / step + 1e-12));
  lo = std::max(lo, 0);
  hi = std::min(hi, count - 1);
  return lo <= hi;
}

}  // namespace

bool UniformGrid::axis_range(double a, double b, int& lo, int& hi) const {
  return clamp_range(a, b, -half_extent_, spacing(), n_, lo, hi);
}

bool UniformGrid::r_range(double a, double b, int& lo, int& hi) const {
  if (nr_ == 0) {
    lo = hi = 0;
    return a <= 0.0 && 0.0 <= b;
  }
  return clamp_range(a, b, -half_extent_, r_spacing(), nr_, lo, hi);
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(UniformGrid g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.node_count())
    throw UsageError("field value count does not match grid node count");
}

ScalarField::ScalarField(UniformGrid g)
    : grid(g), values(g.node_count(), 0.0) {}

double ScalarField::max_value() const {
  if (values.empty()) return 0.0;
  return *std::max_element(values.begin(), values.end());
}

ScalarField ScalarField::slice_r(int ir) const {
  if (grid.dimension() != 4) throw UsageError("slice_r needs a 4D field");
  if (ir < 0 || ir >= grid.r_count()) throw UsageError("radius slice out of range");
  UniformGrid g3(grid.half_extent(), grid.per_axis());
  const std::size_t n3 = g3.node_count();
  std::vector<double> v(values.begin() + ir * n3, values.begin() + (ir + 1) * n3);
  return ScalarField(g3, std::move(v));
}

// ---------------------------------------------------------------------------
// Point-triangle distance (closest point by Voronoi region of the triangle).

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b,
                               const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return ap.norm();

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return bp.norm();

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return (p - (a + v * ab)).norm();
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return cp.norm();

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return (p - (a + w * ac)).norm();
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + w * (c - b))).norm();
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return (p - (a + ab * v + ac * w)).norm();
}

// ---------------------------------------------------------------------------
// Bounding-volume hierarchy over triangles.

namespace detail {

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void grow(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void grow(const Aabb& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  double squared_distance(const Vec3& p) const {
    const Vec3 d = (lo - p).cwiseMax(p - hi).cwiseMax(Vec3::Zero());
    return d.squaredNorm();
  }
  bool hit_by_ray(const Vec3& o, const Vec3& inv_dir) const {
    double tmin = 0.0, tmax = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
      double t0 = (lo[k] - o[k]) * inv_dir[k];
      double t1 = (hi[k] - o[k]) * inv_dir[k];
      if (t0 > t1) std::swap(t0, t1);
      tmin = std::max(tmin, t0);
      tmax = std::min(tmax, t1);
    }
    return tmin <= tmax * (1.0 + 1e-12) + 1e-12;
  }
};

class TriangleBvh {
 public:
  TriangleBvh(const std::vector<Vec3>& vertices,
              const std::vector<Triangle>& triangles)
      : vertices_(vertices), triangles_(triangles) {
    order_.resize(triangles.size());
    std::iota(order_.begin(), order_.end(), 0);
    boxes_.resize(triangles.size());
    centroids_.resize(triangles.size());
    for (std::size_t i = 0; i < triangles.size(); ++i) {
      for (int k = 0; k < 3; ++k) boxes_[i].grow(vertices[triangles[i][k]]);
      centroids_[i] = (vertices[triangles[i][0]] + vertices[triangles[i][1]] +
                       vertices[triangles[i][2]]) /
                      3.0;
    }
    if (!triangles.empty()) build(0, static_cast<int>(triangles.size()));
  }

  double nearest_squared(const Vec3& p) const {
    double best = std::numeric_limits<double>::infinity();
    if (nodes_.empty()) return best;
    int stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (node.box.squared_distance(p) >= best) continue;
      if (node.count > 0) {
        for (int i = node.begin; i < node.begin + node.count; ++i) {
          const Triangle& t = triangles_[order_[i]];
          const double d = point_triangle_distance(p, vertices_[t[0]],
                                                   vertices_[t[1]], vertices_[t[2]]);
          best = std::min(best, d * d);
        }
        continue;
      }
      const double dl = nodes_[node.left].box.squared_distance(p);
      const double dr = nodes_[node.right].box.squared_distance(p);
      // Push the farther child first so the nearer one is explored first.
      if (dl < dr) {
        stack[top++] = node.right;
        stack[top++] = node.left;
      } else {
        stack[top++] = node.left;
        stack[top++] = node.right;
      }
    }
    return best;
  }

  template <class Visit>
  void for_each_ray_candidate(const Vec3& origin, const Vec3& dir,
                              Visit&& visit) const {
    if (nodes_.empty()) return;
    Vec3 inv;
    for (int k = 0; k < 3; ++k)
      inv[k] = dir[k] != 0.0 ? 1.0 / dir[k] : std::numeric_limits<double>::infinity();
    int stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const Node& node = nodes_[stack[--top]];
      if (!node.box.hit_by_ray(origin, inv)) continue;
      if (node.count > 0) {
        for (int i = node.begin; i < node.begin + node.count; ++i) visit(order_[i]);
        continue;
      }
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }

 private:
  struct Node {
    Aabb box;
    int left = -1, right = -1;
    int begin = 0, count = 0;
  };

  int build(int begin, int end) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    Aabb box, cbox;
    for (int i = begin; i < end; ++i) {
      box.grow(boxes_[order_[i]]);
      cbox.grow(centroids_[order_[i]]);
    }
    nodes_[id].box = box;
    if (end - begin <= 4) {
      nodes_[id].begin = begin;
      nodes_[id].count = end - begin;
      return id;
    }
    int axis = 0;
    const Vec3 ext = cbox.hi - cbox.lo;
    if (ext[1] > ext[axis]) axis = 1;
    if (ext[2] > ext[axis]) axis = 2;
    const int mid = (begin + end) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid,
                     order_.begin() + end, [&](int a, int b) {
                       return centroids_[a][axis] < centroids_[b][axis];
                     });
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::vector<Vec3> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<int> order_;
  std::vector<Aabb> boxes_;
  std::vector<Vec3> centroids_;
  std::vector<Node> nodes_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Solid

namespace {

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

double signed_volume(const std::vector<Vec3>& v, const std::vector<Triangle>& t) {
  double vol = 0.0;
  for (const auto& tri : t) vol += v[tri[0]].dot(v[tri[1]].cross(v[tri[2]]));
  return vol / 6.0;
}

}  // namespace

Solid::Solid(std::vector<Vec3> vertices, std::vector<Triangle> triangles,
             double half_extent)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      half_extent_(half_extent) {
  if (!(half_extent_ > 0.0)) throw UsageError("solid half-extent must be positive");
  if (triangles_.empty()) throw MeshError(MeshError::Kind::Parse, "mesh has no triangles");
  const int nv = static_cast<int>(vertices_.size());
  for (const auto& t : triangles_) {
    for (int k = 0; k < 3; ++k)
      if (t[k] < 0 || t[k] >= nv)
        throw MeshError(MeshError::Kind::Parse, "triangle references a missing vertex");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw MeshError(MeshError::Kind::Parse, "degenerate triangle with repeated vertex");
  }
  for (const auto& v : vertices_) {
    if (!v.allFinite())
      throw MeshError(MeshError::Kind::Parse, "non-finite vertex coordinate");
    if ((v.array() < -half_extent_).any() || (v.array() >= half_extent_).any())
      throw MeshError(MeshError::Kind::OutOfBounds, "vertex outside [-L, L)^3");
  }

  std::unordered_map<std::uint64_t, int> undirected;
  std::unordered_map<std::uint64_t, int> directed;
  undirected.reserve(triangles_.size() * 3);
  directed.reserve(triangles_.size() * 3);
  for (const auto& t : triangles_) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      ++undirected[edge_key(std::min(a, b), std::max(a, b))];
      ++directed[edge_key(a, b)];
    }
  }
  for (const auto& [key, count] : undirected) {
    if (count != 2)
      throw MeshError(MeshError::Kind::NotWatertight,
                      "edge shared by " + std::to_string(count) +
                          " triangles (expected 2)");
  }
  for (const auto& [key, count] : directed) {
    if (count != 1)
      throw MeshError(MeshError::Kind::InconsistentOrientation,
                      "adjacent triangles traverse a shared edge in the same direction");
  }

  if (signed_volume(vertices_, triangles_) < 0.0)
    for (auto& t : triangles_) std::swap(t[1], t[2]);

  bbox_min_ = Vec3::Constant(std::numeric_limits<double>::infinity());
  bbox_max_ = -bbox_min_;
  for (const auto& v : vertices_) {
    bbox_min_ = bbox_min_.cwiseMin(v);
    bbox_max_ = bbox_max_.cwiseMax(v);
  }
  cumulative_area_.reserve(triangles_.size());
  for (const auto& t : triangles_) {
    const Vec3& a = vertices_[t[0]];
    total_area_ += 0.5 * (vertices_[t[1]] - a).cross(vertices_[t[2]] - a).norm();
    cumulative_area_.push_back(total_area_);
  }
  bvh_ = std::make_shared<detail::TriangleBvh>(vertices_, triangles_);
}

double Solid::volume() const { return signed_volume(vertices_, triangles_); }

double Solid::distance_to_boundary(const Vec3& x) const {
  return std::sqrt(bvh_->nearest_squared(x));
}

int Solid::ray_parity(const Vec3& x, const Vec3& dir, bool& degenerate,
                      bool& on_surface) const {
  constexpr double kBary = 1e-10;
  const double t_tol = 1e-12 * half_extent_;
  int crossings = 0;
  bvh_->for_each_ray_candidate(x, dir, [&](int ti) {
    if (degenerate || on_surface) return;
    const Triangle& t = triangles_[ti];
    const Vec3& a = vertices_[t[0]];
    const Vec3 e1 = vertices_[t[1]] - a;
    const Vec3 e2 = vertices_[t[2]] - a;
    const Vec3 pv = dir.cross(e2);
    const double det = e1.dot(pv);
    const double scale = e1.norm() * e2.norm();
    const Vec3 tv = x - a;
    if (std::abs(det) <= 1e-12 * scale) {
      // Ray parallel to the triangle plane: only matters if it lies in it.
      const Vec3 n = e1.cross(e2);
      if (std::abs(n.normalized().dot(tv)) <= t_tol) degenerate = true;
      return;
    }
    const double inv = 1.0 / det;
    const double u = tv.dot(pv) * inv;
    if (u < -kBary || u > 1.0 + kBary) return;
    const Vec3 qv = tv.cross(e1);
    const double v = dir.dot(qv) * inv;
    if (v < -kBary || u + v > 1.0 + kBary) return;
    const double dist = e2.dot(qv) * inv;
    if (std::abs(dist) <= t_tol) {
      on_surface = true;
      return;
    }
    if (dist < 0.0) return;
    if (u <= kBary || v <= kBary || u + v >= 1.0 - kBary) {
      degenerate = true;
      return;
    }
    ++crossings;
  });
  return crossings & 1;
}

bool Solid::contains(const Vec3& x) const {
  const double tol = 1e-12 * half_extent_;
  if ((x.array() < bbox_min_.array() - tol).any() ||
      (x.array() > bbox_max_.array() + tol).any())
    return false;

  // Irrational-ish first direction; deterministic restarts on grazing hits.
  Vec3 dir = Vec3(0.5773502691896258, 0.3141592653589793, 0.7536243765876519).normalized();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 32; ++attempt) {
    bool degenerate = false, on_surface = false;
    const int parity = ray_parity(x, dir, degenerate, on_surface);
    if (on_surface) return true;
    if (!degenerate) return parity == 1;
    do {
      dir = Vec3(gauss(rng), gauss(rng), gauss(rng));
    } while (dir.norm() < 1e-3);
    dir.normalize();
  }
  // Every direction grazed something: x sits on the surface for practical purposes.
  return distance_to_boundary(x) <= 1e-9 * half_extent_;
}

Vec3 Solid::sample_boundary(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double pick = uni(rng) * total_area_;
  auto it = std::upper_bound(cumulative_area_.begin(), cumulative_area_.end(), pick);
  if (it == cumulative_area_.end()) --it;
  const Triangle& t = triangles_[static_cast<std::size_t>(it - cumulative_area_.begin())];
  const double s = std::sqrt(uni(rng));
  const double r = uni(rng);
  return (1.0 - s) * vertices_[t[0]] + s * (1.0 - r) * vertices_[t[1]] +
         s * r * vertices_[t[2]];
}

Solid make_normalized_solid(std::vector<Vec3> vertices,
                            std::vector<Triangle> triangles, double half_extent) {
  if (vertices.empty()) throw MeshError(MeshError::Kind::Parse, "mesh has no vertices");
  Vec3 lo = vertices.front(), hi = vertices.front();
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Vec3 center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo).maxCoeff();
  if (!(half > 0.0)) throw MeshError(MeshError::Kind::Parse, "mesh has zero extent");
  const double scale = 0.9 * half_extent / half;
  for (auto& v : vertices) v = (v - center) * scale;
  return Solid(std::move(vertices), std::move(triangles), half_extent);
}

// ---------------------------------------------------------------------------
// Mesh files

namespace {

struct VertexMerger {
  std::map<std::array<double, 3>, int> ids;
  std::vector<Vec3> vertices;

  int add(const Vec3& p) {
    const std::array<double, 3> key{p.x(), p.y(), p.z()};
    auto [it, inserted] = ids.emplace(key, static_cast<int>(vertices.size()));
    if (inserted) vertices.push_back(p);
    return it->second;
  }
};

Solid parse_obj(std::istream& in, double half_extent) {
  std::vector<Vec3> raw;
  std::vector<Triangle> tris;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z))
        throw MeshError(MeshError::Kind::Parse, "bad vertex on line " + std::to_string(lineno));
      raw.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (ls >> tok) {
        const auto slash = tok.find('/');
        int idx = 0;
        try {
          idx = std::stoi(tok.substr(0, slash));
        } catch (const std::exception&) {
          throw MeshError(MeshError::Kind::Parse,
                          "bad face index on line " + std::to_string(lineno));
        }
        if (idx < 0) idx = static_cast<int>(raw.size()) + idx + 1;
        poly.push_back(idx - 1);
      }
      if (poly.size() < 3)
        throw MeshError(MeshError::Kind::Parse, "face with fewer than 3 vertices on line " +
                                                    std::to_string(lineno));
      for (std::size_t k = 1; k + 1 < poly.size(); ++k)
        tris.push_back({poly[0], poly[k], poly[k + 1]});
    }
  }
  for (const auto& t : tris)
    for (int k : t)
      if (k < 0 || k >= static_cast<int>(raw.size()))
        throw MeshError(MeshError::Kind::Parse, "face references a missing vertex");
  VertexMerger merger;
  std::vector<int> remap(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) remap[i] = merger.add(raw[i]);
  for (auto& t : tris)
    for (int& k : t) k = remap[k];
  return make_normalized_solid(std::move(merger.vertices), std::move(tris), half_extent);
}

Solid parse_stl(std::istream& in, double half_extent) {
  VertexMerger merger;
  std::vector<Triangle> tris;
  std::string tok;
  if (!(in >> tok) || tok != "solid")
    throw MeshError(MeshError::Kind::Parse, "not an ASCII STL file (binary STL is unsupported)");
  std::string rest;
  std::getline(in, rest);
  while (in >> tok) {
    if (tok == "endsolid") break;
    if (tok != "facet") throw MeshError(MeshError::Kind::Parse, "expected 'facet', got '" + tok + "'");
    std::getline(in, rest);  // normal, ignored
    if (!(in >> tok) || tok != "outer" || !(in >> tok) || tok != "loop")
      throw MeshError(MeshError::Kind::Parse, "expected 'outer loop'");
    Triangle t{};
    for (int k = 0; k < 3; ++k) {
      double x, y, z;
      if (!(in >> tok) || tok != "vertex" || !(in >> x >> y >> z))
        throw MeshError(MeshError::Kind::Parse, "bad STL vertex record");
      t[k] = merger.add(Vec3(x, y, z));
    }
    if (!(in >> tok) || tok != "endloop" || !(in >> tok) || tok != "endfacet")
      throw MeshError(MeshError::Kind::Parse, "expected 'endloop endfacet'");
    tris.push_back(t);
  }
  return make_normalized_solid(std::move(merger.vertices), std::move(tris), half_extent);
}

}  // namespace

Solid load_mesh(const std::filesystem::path& path, double half_extent) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path.string() + "'");
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".stl") return parse_stl(in, half_extent);
  if (ext == ".obj") return parse_obj(in, half_extent);
  throw MeshError(MeshError::Kind::Parse, "unsupported mesh extension '" + ext + "'");
}

void save_obj(const Solid& solid, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.precision(12);
  for (const auto& v : solid.vertices()) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : solid.triangles())
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

// ---------------------------------------------------------------------------
// Node classification and Hausdorff estimation

NodeSet interior_nodes(const UniformGrid& grid, const Solid& s) {
  const std::size_t n = grid.spatial_node_count();
  std::vector<char> inside(n, 0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) inside[i] = s.contains(grid.node(i)) ? 1 : 0;
  });
  NodeSet out;
  for (std::size_t i = 0; i < n; ++i)
    if (inside[i]) out.push_back(i);
  return out;
}

SetSampler boundary_sampler(const Solid& s) {
  return {[&s](std::mt19937_64& rng) { return s.sample_boundary(rng); },
          [&s](const Vec3& x) { return s.contains(x) ? 0.0 : s.distance_to_boundary(x); }};
}

SetSampler point_cloud_sampler(std::vector<Vec3> points) {
  if (points.empty()) throw UsageError("point cloud sampler needs at least one point");
  auto pts = std::make_shared<const std::vector<Vec3>>(std::move(points));
  return {[pts](std::mt19937_64& rng) {
            std::uniform_int_distribution<std::size_t> pick(0, pts->size() - 1);
            return (*pts)[pick(rng)];
          },
          [pts](const Vec3& x) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& p : *pts) best = std::min(best, (p - x).squaredNorm());
            return std::sqrt(best);
          }};
}

double hausdorff_estimate(const SetSampler& a, const SetSampler& b,
                          std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw UsageError("hausdorff_estimate needs at least one sample");
  std::mt19937_64 rng(seed);
  std::vector<Vec3> from_a(samples), from_b(samples);
  for (auto& p : from_a) p = a.sample(rng);
  for (auto& p : from_b) p = b.sample(rng);
  std::vector<double> da(samples), db(samples);
  parallel_for(samples, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      da[i] = b.distance(from_a[i]);
      db[i] = a.distance(from_b[i]);
    }
  });
  return std::max(*std::max_element(da.begin(), da.end()),
                  *std::max_element(db.begin(), db.end()));
}

}  // namespace sphereconv
