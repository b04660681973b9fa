#pragma once

// JSON interchange for meshes, so externally built meshes can be audited
// and generated ones exported. Schema:
//   {version, dim, vertices: [[coord...]], periodic_classes: [[vertex ids]],
//    period: [per-axis extent], elements: [{shape, vertices, degree,
//    material: {model, params}}], faces: [{kind, sides: [{element,
//    local_face, offset}]}]}

#include "sipdg/mesh.hpp"

#include <iosfwd>
#include <string>

namespace sipdg {

std::string mesh_to_json(const Mesh& mesh);
Mesh mesh_from_json(const std::string& text);

void write_mesh_json(const Mesh& mesh, const std::string& path);
Mesh read_mesh_json(const std::string& path);

}  // namespace sipdg
