// Regenerates the bundled meshes under data/meshes (see README).
#include "regrasp/mesh.hpp"
#include "regrasp/mesh_io.hpp"

#include <filesystem>
#include <iostream>

int main(int argc, char** argv) {
    using namespace regrasp;
    std::string dir = argc > 1 ? argv[1] : "data/meshes";
    std::filesystem::create_directories(dir);

    save_obj(make_box(Vec3(0.025, 0.025, 0.025)), dir + "/cube.obj");
    save_obj(make_box(Vec3(0.5, 0.5, 0.5)), dir + "/unitcube.obj");
    save_obj(make_box(Vec3(0.05, 0.05, 0.5)), dir + "/tallbox.obj");
    save_obj(make_box(Vec3(0.015, 0.015, 0.1)), dir + "/prism.obj");
    save_obj(make_cylinder(0.03, 0.12, 32), dir + "/cylinder32.obj");
    save_obj(make_lbracket(0.08, 0.03, 0.04), dir + "/lbracket.obj");

    std::cout << "wrote meshes to " << dir << "\n";
    return 0;
}
