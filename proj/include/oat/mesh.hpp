// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "oat/math.hpp"

namespace oat {

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<uint32_t, 3>> faces;

    bool empty() const { return faces.empty(); }
    Aabb bounds() const;
    Vec3 face_normal(size_t f) const;  // unit normal from winding; zero for degenerate
    double face_area(size_t f) const;
    double total_area() const;
};

struct LoadedMesh {
    TriangleMesh mesh;
    size_t degenerate_faces = 0;  // zero-area faces retained in the mesh
};

// Reads an OBJ (ASCII) or PLY (ASCII or binary little-endian) file, picking
// the format from the extension (falls back to content sniffing). Polygons
// with more than three vertices are fan-triangulated. Throws InputError on
// parse failure (with line number for text, byte offset for binary) and on
// meshes with no faces.
LoadedMesh load_mesh(const std::string& path);

// Uniformly scales and translates so the tight vertex bounding box is
// centered at (0.5, 0.5, 0.5) with longest axis extent exactly 1.
TriangleMesh normalize_mesh(const TriangleMesh& mesh);

void save_obj(const TriangleMesh& mesh, const std::string& path);

}  // namespace oat
