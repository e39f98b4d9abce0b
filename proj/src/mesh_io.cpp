#include "regrasp/mesh_io.hpp"

#include "regrasp/errors.hpp"
#include "regrasp/segmentation.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace regrasp {

namespace {

bool iequals(const std::string& a, const char* b) {
    if (a.size() != std::strlen(b)) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != b[i]) return false;
    return true;
}

TriangleMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open mesh file: " + path);
    TriangleMesh mesh;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z)) throw ParseError(path, lineno, "bad vertex line");
            mesh.vertices.push_back(Vec3(x, y, z));
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                // "v", "v/vt", "v//vn", "v/vt/vn" -- only the vertex index matters
                size_t slash = tok.find('/');
                std::string head = slash == std::string::npos ? tok : tok.substr(0, slash);
                int v = 0;
                try {
                    v = std::stoi(head);
                } catch (...) {
                    throw ParseError(path, lineno, "bad face index '" + tok + "'");
                }
                if (v < 0) v = static_cast<int>(mesh.vertices.size()) + v + 1;
                if (v < 1 || v > static_cast<int>(mesh.vertices.size()))
                    throw ParseError(path, lineno, "face index out of range");
                idx.push_back(v - 1);
            }
            if (idx.size() < 3) throw ParseError(path, lineno, "face with fewer than 3 vertices");
            for (size_t k = 2; k < idx.size(); ++k)
                mesh.triangles.push_back({idx[0], idx[static_cast<int>(k) - 1], idx[k]});
        }
        // other tags (vn, vt, o, g, s, mtllib, usemtl) are ignored
    }
    if (mesh.vertices.empty() || mesh.triangles.empty())
        throw InvalidInputError("empty mesh: " + path);
    mesh.clean_and_finalize();
    return mesh;
}

TriangleMesh load_stl_ascii(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open mesh file: " + path);
    TriangleMesh mesh;
    std::string tok;
    long lineno = 1;
    std::string line;
    std::vector<Vec3> tri;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        if (!(ls >> tok)) {
            ++lineno;
            continue;
        }
        if (iequals(tok, "vertex")) {
            double x, y, z;
            if (!(ls >> x >> y >> z)) throw ParseError(path, lineno, "bad vertex line");
            tri.push_back(Vec3(x, y, z));
            if (tri.size() == 3) {
                int base = static_cast<int>(mesh.vertices.size());
                mesh.vertices.insert(mesh.vertices.end(), tri.begin(), tri.end());
                mesh.triangles.push_back({base, base + 1, base + 2});
                tri.clear();
            }
        } else if (iequals(tok, "endfacet") && !tri.empty()) {
            throw ParseError(path, lineno, "facet with fewer than 3 vertices");
        }
        ++lineno;
    }
    if (mesh.triangles.empty()) throw InvalidInputError("empty mesh: " + path);
    mesh.clean_and_finalize();
    return mesh;
}

TriangleMesh load_stl_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInputError("cannot open mesh file: " + path);
    char header[80];
    if (!in.read(header, 80)) throw ParseError(path, 0, "truncated STL header");
    uint32_t count = 0;
    if (!in.read(reinterpret_cast<char*>(&count), 4)) throw ParseError(path, 80, "missing triangle count");
    TriangleMesh mesh;
    mesh.vertices.reserve(count * 3);
    mesh.triangles.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        // 50-byte little-endian record: normal, 3 vertices (floats), attribute
        float rec[12];
        uint16_t attr;
        long offset = 84 + static_cast<long>(i) * 50;
        if (!in.read(reinterpret_cast<char*>(rec), 48) ||
            !in.read(reinterpret_cast<char*>(&attr), 2))
            throw ParseError(path, offset, "truncated STL record");
        int base = static_cast<int>(mesh.vertices.size());
        for (int v = 0; v < 3; ++v)
            mesh.vertices.push_back(Vec3(rec[3 + 3 * v], rec[4 + 3 * v], rec[5 + 3 * v]));
        mesh.triangles.push_back({base, base + 1, base + 2});
    }
    if (mesh.triangles.empty()) throw InvalidInputError("empty mesh: " + path);
    mesh.clean_and_finalize();
    return mesh;
}

bool stl_is_ascii(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char buf[512] = {0};
    in.read(buf, sizeof(buf) - 1);
    std::streamsize got = in.gcount();
    std::string head(buf, static_cast<size_t>(got));
    // "solid" prefix is necessary but not sufficient; require a "facet" token
    // in the first chunk too since binary headers may also start with solid.
    size_t start = head.find_first_not_of(" \t\r\n");
    if (start == std::string::npos || head.compare(start, 5, "solid") != 0) return false;
    return head.find("facet") != std::string::npos;
}

}  // namespace

TriangleMesh load_mesh(const std::string& path, MeshFormat format) {
    if (format == MeshFormat::Auto) {
        size_t dot = path.find_last_of('.');
        std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
        std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
        if (ext == "obj")
            format = MeshFormat::Obj;
        else if (ext == "stl")
            format = stl_is_ascii(path) ? MeshFormat::StlAscii : MeshFormat::StlBinary;
        else
            throw InvalidInputError("cannot infer mesh format from path: " + path);
    }
    switch (format) {
        case MeshFormat::Obj: return load_obj(path);
        case MeshFormat::StlAscii: return load_stl_ascii(path);
        case MeshFormat::StlBinary: return load_stl_binary(path);
        default: throw InvalidInputError("unknown mesh format");
    }
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot write: " + path);
    for (const auto& v : mesh.vertices)
        out << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' '
            << format_double(v.z()) << '\n';
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void save_facets_ply(const TriangleMesh& mesh, const std::vector<Facet>& facets,
                     const std::string& path) {
    size_t face_rows = 0;
    for (const auto& f : facets) face_rows += f.triangle_ids.size();
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot write: " + path);
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << mesh.vertex_count() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << face_rows << "\n";
    out << "property list uchar int vertex_indices\n";
    out << "property int facet_id\n";
    out << "end_header\n";
    for (const auto& v : mesh.vertices)
        out << format_double(v.x()) << ' ' << format_double(v.y()) << ' '
            << format_double(v.z()) << '\n';
    for (size_t fi = 0; fi < facets.size(); ++fi)
        for (int tri : facets[fi].triangle_ids) {
            const auto& t = mesh.triangles[tri];
            out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << fi << '\n';
        }
}

struct ObjSceneWriter::Impl {
    std::ofstream out;
    int vertex_base = 0;
};

ObjSceneWriter::ObjSceneWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) {
        delete impl_;
        throw InvalidInputError("cannot write: " + path);
    }
}

ObjSceneWriter::~ObjSceneWriter() {
    close();
}

void ObjSceneWriter::add_mesh(const std::string& name, const TriangleMesh& mesh) {
    auto& out = impl_->out;
    out << "o " << name << '\n';
    for (const auto& v : mesh.vertices)
        out << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' '
            << format_double(v.z()) << '\n';
    for (const auto& t : mesh.triangles)
        out << "f " << impl_->vertex_base + t[0] + 1 << ' ' << impl_->vertex_base + t[1] + 1
            << ' ' << impl_->vertex_base + t[2] + 1 << '\n';
    impl_->vertex_base += mesh.vertex_count();
}

void ObjSceneWriter::close() {
    if (impl_) {
        impl_->out.close();
        delete impl_;
        impl_ = nullptr;
    }
}

}  // namespace regrasp
