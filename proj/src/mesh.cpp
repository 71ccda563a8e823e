// SPDX-License-Identifier: Apache-2.0

#include "oat/mesh.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "oat/error.hpp"

namespace oat {

Aabb TriangleMesh::bounds() const {
    Aabb box;
    for (const Vec3& v : vertices) box.expand(v);
    return box;
}

Vec3 TriangleMesh::face_normal(size_t f) const {
    const auto& t = faces[f];
    Vec3 n = cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
    double len = norm(n);
    if (len <= 0.0) return {0, 0, 0};
    return n / len;
}

double TriangleMesh::face_area(size_t f) const {
    const auto& t = faces[f];
    return 0.5 * norm(cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]));
}

double TriangleMesh::total_area() const {
    double a = 0.0;
    for (size_t f = 0; f < faces.size(); ++f) a += face_area(f);
    return a;
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, size_t line, const std::string& what) {
    throw InputError(path + ":" + std::to_string(line) + ": " + what);
}

LoadedMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open mesh file: " + path);
    TriangleMesh mesh;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z)) parse_fail(path, lineno, "bad vertex line");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<uint32_t> idx;
            std::string tok;
            while (ls >> tok) {
                // accept v, v/vt, v//vn, v/vt/vn
                size_t slash = tok.find('/');
                std::string head = slash == std::string::npos ? tok : tok.substr(0, slash);
                long v = 0;
                try {
                    v = std::stol(head);
                } catch (...) {
                    parse_fail(path, lineno, "bad face index '" + tok + "'");
                }
                if (v < 0) v = long(mesh.vertices.size()) + v + 1;  // relative index
                if (v < 1 || size_t(v) > mesh.vertices.size())
                    parse_fail(path, lineno, "face index out of range");
                idx.push_back(uint32_t(v - 1));
            }
            if (idx.size() < 3) parse_fail(path, lineno, "face with fewer than 3 vertices");
            for (size_t i = 2; i < idx.size(); ++i)
                mesh.faces.push_back({idx[0], idx[i - 1], idx[i]});
        }
        // other tags (vn, vt, usemtl, ...) are ignored
    }
    if (mesh.faces.empty()) throw InputError(path + ": mesh has no faces");
    return {std::move(mesh), 0};
}

struct PlyProperty {
    std::string type;
    std::string name;
    bool is_list = false;
    std::string count_type;
};

struct PlyElement {
    std::string name;
    size_t count = 0;
    std::vector<PlyProperty> props;
};

size_t scalar_size(const std::string& t) {
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
    if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" ||
        t == "float32")
        return 4;
    if (t == "double" || t == "float64") return 8;
    throw InputError("ply: unknown property type '" + t + "'");
}

double read_binary_scalar(const char* p, const std::string& t) {
    auto as = [&]<typename T>() {
        T v;
        std::memcpy(&v, p, sizeof(T));
        return double(v);
    };
    if (t == "char" || t == "int8") return as.operator()<int8_t>();
    if (t == "uchar" || t == "uint8") return as.operator()<uint8_t>();
    if (t == "short" || t == "int16") return as.operator()<int16_t>();
    if (t == "ushort" || t == "uint16") return as.operator()<uint16_t>();
    if (t == "int" || t == "int32") return as.operator()<int32_t>();
    if (t == "uint" || t == "uint32") return as.operator()<uint32_t>();
    if (t == "float" || t == "float32") return as.operator()<float>();
    return as.operator()<double>();
}

LoadedMesh load_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open mesh file: " + path);
    std::string line;
    size_t lineno = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) parse_fail(path, lineno, "unexpected end of header");
        ++lineno;
        if (line.size() && line.back() == '\r') line.pop_back();
    };
    next_line();
    if (line != "ply") parse_fail(path, lineno, "not a PLY file");
    bool binary = false;
    std::vector<PlyElement> elements;
    for (;;) {
        next_line();
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "comment" || tag == "obj_info") continue;
        if (tag == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "ascii")
                binary = false;
            else if (fmt == "binary_little_endian")
                binary = true;
            else
                parse_fail(path, lineno, "unsupported PLY format '" + fmt + "'");
        } else if (tag == "element") {
            PlyElement e;
            if (!(ls >> e.name >> e.count)) parse_fail(path, lineno, "bad element line");
            elements.push_back(e);
        } else if (tag == "property") {
            if (elements.empty()) parse_fail(path, lineno, "property before element");
            PlyProperty p;
            std::string t;
            ls >> t;
            if (t == "list") {
                p.is_list = true;
                if (!(ls >> p.count_type >> p.type >> p.name))
                    parse_fail(path, lineno, "bad list property");
            } else {
                p.type = t;
                if (!(ls >> p.name)) parse_fail(path, lineno, "bad property");
            }
            elements.back().props.push_back(p);
        } else if (tag == "end_header") {
            break;
        } else {
            parse_fail(path, lineno, "unexpected header line '" + line + "'");
        }
    }

    TriangleMesh mesh;
    size_t offset = size_t(in.tellg());

    auto binary_fail = [&](const std::string& what) {
        throw InputError(path + ": " + what + " at byte offset " + std::to_string(offset));
    };

    for (const PlyElement& e : elements) {
        bool is_vertex = e.name == "vertex";
        bool is_face = e.name == "face";
        for (size_t i = 0; i < e.count; ++i) {
            Vec3 v;
            std::vector<uint32_t> idx;
            if (binary) {
                for (const PlyProperty& p : e.props) {
                    if (p.is_list) {
                        size_t csz = scalar_size(p.count_type);
                        std::string buf(csz, '\0');
                        if (!in.read(buf.data(), std::streamsize(csz)))
                            binary_fail("truncated list count");
                        offset += csz;
                        size_t cnt = size_t(read_binary_scalar(buf.data(), p.count_type));
                        size_t vsz = scalar_size(p.type);
                        std::string vals(vsz * cnt, '\0');
                        if (!in.read(vals.data(), std::streamsize(vsz * cnt)))
                            binary_fail("truncated list data");
                        offset += vsz * cnt;
                        if (is_face && p.name == "vertex_indices") {
                            for (size_t j = 0; j < cnt; ++j)
                                idx.push_back(uint32_t(
                                    read_binary_scalar(vals.data() + j * vsz, p.type)));
                        }
                    } else {
                        size_t vsz = scalar_size(p.type);
                        std::string buf(vsz, '\0');
                        if (!in.read(buf.data(), std::streamsize(vsz)))
                            binary_fail("truncated element data");
                        offset += vsz;
                        double val = read_binary_scalar(buf.data(), p.type);
                        if (is_vertex) {
                            if (p.name == "x") v.x = val;
                            if (p.name == "y") v.y = val;
                            if (p.name == "z") v.z = val;
                        }
                    }
                }
            } else {
                next_line();
                std::istringstream ls(line);
                for (const PlyProperty& p : e.props) {
                    if (p.is_list) {
                        size_t cnt = 0;
                        if (!(ls >> cnt)) parse_fail(path, lineno, "bad list count");
                        for (size_t j = 0; j < cnt; ++j) {
                            double val;
                            if (!(ls >> val)) parse_fail(path, lineno, "bad list value");
                            if (is_face && p.name == "vertex_indices")
                                idx.push_back(uint32_t(val));
                        }
                    } else {
                        double val;
                        if (!(ls >> val)) parse_fail(path, lineno, "bad property value");
                        if (is_vertex) {
                            if (p.name == "x") v.x = val;
                            if (p.name == "y") v.y = val;
                            if (p.name == "z") v.z = val;
                        }
                    }
                }
            }
            if (is_vertex) mesh.vertices.push_back(v);
            if (is_face) {
                if (idx.size() < 3)
                    throw InputError(path + ": face with fewer than 3 vertices");
                for (uint32_t k : idx)
                    if (k >= mesh.vertices.size())
                        throw InputError(path + ": face index out of range");
                for (size_t j = 2; j < idx.size(); ++j)
                    mesh.faces.push_back({idx[0], idx[j - 1], idx[j]});
            }
        }
    }
    if (mesh.faces.empty()) throw InputError(path + ": mesh has no faces");
    return {std::move(mesh), 0};
}

bool has_suffix(const std::string& s, const std::string& suf) {
    if (s.size() < suf.size()) return false;
    for (size_t i = 0; i < suf.size(); ++i)
        if (std::tolower(s[s.size() - suf.size() + i]) != suf[i]) return false;
    return true;
}

}  // namespace

LoadedMesh load_mesh(const std::string& path) {
    LoadedMesh loaded;
    if (has_suffix(path, ".obj")) {
        loaded = load_obj(path);
    } else if (has_suffix(path, ".ply")) {
        loaded = load_ply(path);
    } else {
        // sniff: PLY files start with "ply"
        std::ifstream probe(path, std::ios::binary);
        if (!probe) throw InputError("cannot open mesh file: " + path);
        char head[3] = {0, 0, 0};
        probe.read(head, 3);
        probe.close();
        loaded = (std::strncmp(head, "ply", 3) == 0) ? load_ply(path) : load_obj(path);
    }
    for (size_t f = 0; f < loaded.mesh.faces.size(); ++f)
        if (loaded.mesh.face_area(f) <= 0.0) ++loaded.degenerate_faces;
    return loaded;
}

TriangleMesh normalize_mesh(const TriangleMesh& mesh) {
    if (mesh.vertices.empty() || mesh.faces.empty())
        throw InputError("normalize_mesh: empty mesh");
    Aabb box = mesh.bounds();
    double ext = box.max_extent();
    if (ext <= 0.0) throw InputError("normalize_mesh: degenerate geometry (zero extent)");
    double scale = 1.0 / ext;
    Vec3 center = box.center();
    TriangleMesh out = mesh;
    for (Vec3& v : out.vertices) v = (v - center) * scale + Vec3{0.5, 0.5, 0.5};
    return out;
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw InputError("cannot open for writing: " + path);
    for (const Vec3& v : mesh.vertices)
        std::fprintf(f, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
    for (const auto& t : mesh.faces)
        std::fprintf(f, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
    std::fclose(f);
}

}  // namespace oat
