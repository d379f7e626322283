#include "sphereconv/shapes.hpp"

#include <cmath>
#include <fstream>
#include <map>

namespace sphereconv::shapes {

Mesh icosphere(int levels, double radius, const Vec3& center) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                         {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                         {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                             {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                             {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                             {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < levels; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Triangle> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int a = mid(tri[0], tri[1]), b = mid(tri[1], tri[2]), c = mid(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  for (auto& p : v) p = center + radius * p;
  return {std::move(v), std::move(f)};
}

Mesh box(const Vec3& lo, const Vec3& hi) {
  std::vector<Vec3> v;
  for (int k = 0; k < 8; ++k)
    v.emplace_back((k & 1) ? hi.x() : lo.x(), (k & 2) ? hi.y() : lo.y(),
                   (k & 4) ? hi.z() : lo.z());
  std::vector<Triangle> f = {{0, 2, 3}, {0, 3, 1}, {4, 5, 7}, {4, 7, 6},
                             {0, 1, 5}, {0, 5, 4}, {2, 6, 7}, {2, 7, 3},
                             {0, 4, 6}, {0, 6, 2}, {1, 3, 7}, {1, 7, 5}};
  return {std::move(v), std::move(f)};
}

Mesh octahedron(double radius) {
  std::vector<Vec3> v = {{radius, 0, 0},  {-radius, 0, 0}, {0, radius, 0},
                         {0, -radius, 0}, {0, 0, radius},  {0, 0, -radius}};
  std::vector<Triangle> f = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                             {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  return {std::move(v), std::move(f)};
}

namespace {

double lobe(const Vec3& u, const Vec3& axis, double width) {
  return std::exp(-(1.0 - u.dot(axis.normalized())) / width);
}

}  // namespace

Mesh lobed_body(int levels) {
  Mesh m = icosphere(levels);
  for (auto& u : m.vertices) {
    // Ellipsoidal trunk stretched along x.
    const double ex = u.x() / 1.3, ey = u.y() / 0.85, ez = u.z() / 0.9;
    double r = 1.0 / std::sqrt(ex * ex + ey * ey + ez * ez);
    r += 0.45 * lobe(u, Vec3(0.8, 0.0, 0.6), 0.05);    // head
    r += 0.95 * lobe(u, Vec3(0.45, 0.25, 1.0), 0.025);   // ears
    r += 0.855 * lobe(u, Vec3(0.35, -0.3, 1.0), 0.025);
    r += 0.25 * lobe(u, Vec3(-1.0, 0.0, 0.2), 0.02);     // tail
    r += 0.3 * lobe(u, Vec3(0.7, 0.35, -0.8), 0.03);     // paws
    r += 0.3 * lobe(u, Vec3(0.7, -0.35, -0.8), 0.03);
    r += 0.25 * lobe(u, Vec3(-0.5, 0.6, -0.6), 0.05);    // haunches
    r += 0.25 * lobe(u, Vec3(-0.5, -0.6, -0.6), 0.05);
    u *= r;
  }
  return m;
}

Mesh pebble(int levels) {
  Mesh m = icosphere(levels);
  for (auto& u : m.vertices) {
    const double ex = u.x() / 1.0, ey = u.y() / 0.75, ez = u.z() / 0.55;
    double r = 1.0 / std::sqrt(ex * ex + ey * ey + ez * ez);
    r += 0.15 * lobe(u, Vec3(1.0, 1.0, 0.0), 0.1);
    u *= r;
  }
  return m;
}

Solid to_solid(const Mesh& mesh, double half_extent, bool normalize) {
  if (normalize) return make_normalized_solid(mesh.vertices, mesh.triangles, half_extent);
  return Solid(mesh.vertices, mesh.triangles, half_extent);
}

Mesh builtin(const std::string& name) {
  if (name == "sphere") return icosphere(3);
  if (name == "cube") return box(Vec3(-1, -1, -1), Vec3(1, 1, 1));
  if (name == "octahedron") return octahedron();
  if (name == "lobed") return lobed_body();
  if (name == "pebble") return pebble();
  throw UsageError("unknown builtin shape '" + name + "'");
}

std::vector<std::string> builtin_names() { return {"sphere", "cube", "octahedron", "lobed", "pebble"}; }

void save_obj(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.precision(12);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

void save_stl(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.precision(12);
  out << "solid mesh\n";
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    Vec3 nrm = (b - a).cross(c - a);
    if (nrm.norm() > 0) nrm.normalize();
    out << "  facet normal " << nrm.x() << ' ' << nrm.y() << ' ' << nrm.z() << "\n    outer loop\n";
    for (const Vec3* v : {&a, &b, &c}) out << "      vertex " << v->x() << ' ' << v->y() << ' ' << v->z() << '\n';
    out << "    endloop\n  endfacet\n";
  }
  out << "endsolid mesh\n";
  if (!out) throw IoError("write failed: " + path.string());
}

Solid load_solid(const std::string& spec, double half_extent) {
  const std::string prefix = "builtin:";
  if (spec.rfind(prefix, 0) == 0) return to_solid(builtin(spec.substr(prefix.size())), half_extent);
  return load_mesh(spec, half_extent);
}

}  // namespace sphereconv::shapes
