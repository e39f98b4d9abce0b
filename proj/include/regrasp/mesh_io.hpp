#pragma once

#include "regrasp/mesh.hpp"

#include <string>
#include <vector>

namespace regrasp {

enum class MeshFormat { Auto, StlAscii, StlBinary, Obj };

// Reads and cleans a mesh. Auto resolves from the extension (.obj/.stl) and,
// for .stl, sniffs ASCII vs binary. Parse failures throw ParseError with a
// line (text) or byte (binary) offset.
TriangleMesh load_mesh(const std::string& path, MeshFormat format = MeshFormat::Auto);

void save_obj(const TriangleMesh& mesh, const std::string& path);

// PLY with a per-face "facet_id" scalar; faces belonging to several facets
// are written once per membership (visualization dump, not a mesh).
struct Facet;  // segmentation.hpp
void save_facets_ply(const TriangleMesh& mesh, const std::vector<Facet>& facets,
                     const std::string& path);

// Multi-object OBJ scene writer used for grasp glyphs and posed placements.
class ObjSceneWriter {
public:
    explicit ObjSceneWriter(const std::string& path);
    ~ObjSceneWriter();
    void add_mesh(const std::string& name, const TriangleMesh& mesh);
    void close();

private:
    struct Impl;
    Impl* impl_;
};

}  // namespace regrasp
