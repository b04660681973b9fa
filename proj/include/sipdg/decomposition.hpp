#pragma once

// Weighted mesh decompositions: families of element/face weights that sum
// to one across the family, used to localize the global spectral-radius
// bound to overlapping submeshes.

#include "sipdg/mesh.hpp"

#include <map>
#include <string>
#include <vector>

namespace sipdg {

struct WeightedSubmesh {
  std::map<int, Real> element_weights;  // element id -> weight in (0,1]
  std::map<int, Real> face_weights;     // face id -> weight in (0,1]
};

struct MeshDecomposition {
  std::vector<WeightedSubmesh> submeshes;
};

// One submesh per periodic vertex class. An element or face is weighted by
// the fraction of its vertices lying in the class, which reduces to
// 1/(vertex count) on meshes where each class meets it at most once and
// keeps the partition of unity exact on self-coupled periodic meshes.
MeshDecomposition vertex_decomposition(const Mesh& mesh);

// Single submesh with unit weights; the localized bound is then exact.
MeshDecomposition trivial_decomposition(const Mesh& mesh);

// Checks partition of unity (within 1e-12), weight ranges, index ranges and
// admissibility (positively weighted faces have positively weighted
// neighbors); returns human-readable violations.
std::vector<std::string> check_decomposition(const Mesh& mesh, const MeshDecomposition& decomposition);

}  // namespace sipdg
