// Writes the sample meshes under the given directory (default: data).
#include "sphereconv/shapes.hpp"

#include <cstdio>

using namespace sphereconv;

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
  try {
    std::filesystem::create_directories(dir);
    shapes::save_obj(shapes::octahedron(), dir / "octahedron.obj");
    shapes::save_stl(shapes::box(Vec3(-1, -1, -1), Vec3(1, 1, 1)), dir / "cube.stl");
    shapes::save_obj(shapes::icosphere(3), dir / "sphere.obj");
    shapes::save_obj(shapes::lobed_body(), dir / "lobed.obj");
    shapes::save_obj(shapes::pebble(), dir / "pebble.obj");
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }
  return 0;
}
