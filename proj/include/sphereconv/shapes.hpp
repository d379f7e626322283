// Procedural watertight meshes used by the benchmark harness and the tests.
#pragma once

#include "sphereconv/solids.hpp"

namespace sphereconv::shapes {

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;
};

/// Subdivided icosahedron projected onto a sphere; 20 * 4^levels triangles.
Mesh icosphere(int levels, double radius = 1.0, const Vec3& center = Vec3::Zero());

/// Axis-aligned box [lo, hi] as 12 outward-oriented triangles.
Mesh box(const Vec3& lo, const Vec3& hi);

/// Regular octahedron with vertices at distance `radius` on the axes.
Mesh octahedron(double radius = 1.0);

/// Star-shaped genus-0 body with an elongated trunk, a head lobe, two ears,
/// paws, haunches and a tail, built by radially displacing an icosphere. levels = 4 gives 5120
/// triangles. Stands in for scanned "bunny-class" models.
Mesh lobed_body(int levels = 4);

/// Smaller compact star-shaped body (rounded, slightly squashed), used as
/// the second operand in pairwise benchmarks.
Mesh pebble(int levels = 3);

Solid to_solid(const Mesh& mesh, double half_extent, bool normalize = true);

/// "sphere", "cube", "octahedron", "lobed" or "pebble"; UsageError otherwise.
Mesh builtin(const std::string& name);
std::vector<std::string> builtin_names();

void save_obj(const Mesh& mesh, const std::filesystem::path& path);
/// ASCII STL with facet normals from the vertex winding.
void save_stl(const Mesh& mesh, const std::filesystem::path& path);

/// Either "builtin:NAME" or a mesh file path; normalized into [-L, L)^3.
Solid load_solid(const std::string& spec, double half_extent);

}  // namespace sphereconv::shapes
