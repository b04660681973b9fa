#include "sipdg/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sipdg {

MeshDecomposition vertex_decomposition(const Mesh& mesh) {
  std::vector<int> cls = mesh.vertex_class_ids();
  std::map<int, int> submesh_of_class;
  for (int c : cls)
    if (!submesh_of_class.count(c)) submesh_of_class.emplace(c, 0);
  int next = 0;
  for (auto& [c, idx] : submesh_of_class) idx = next++;  // deterministic: ordered by class id

  MeshDecomposition dec;
  dec.submeshes.resize(submesh_of_class.size());
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const Element& el = mesh.elements[e];
    Real share = 1.0 / static_cast<Real>(el.vertices.size());
    for (int v : el.vertices)
      dec.submeshes[submesh_of_class.at(cls[v])].element_weights[static_cast<int>(e)] += share;
  }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    std::vector<int> verts = mesh.face_vertices(mesh.faces[f]);
    Real share = 1.0 / static_cast<Real>(verts.size());
    for (int v : verts) dec.submeshes[submesh_of_class.at(cls[v])].face_weights[static_cast<int>(f)] += share;
  }
  return dec;
}

MeshDecomposition trivial_decomposition(const Mesh& mesh) {
  MeshDecomposition dec;
  WeightedSubmesh all;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) all.element_weights[static_cast<int>(e)] = 1.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) all.face_weights[static_cast<int>(f)] = 1.0;
  dec.submeshes.push_back(std::move(all));
  return dec;
}

std::vector<std::string> check_decomposition(const Mesh& mesh, const MeshDecomposition& decomposition) {
  std::vector<std::string> issues;
  auto complain = [&](const std::string& msg) { issues.push_back(msg); };

  std::vector<Real> elem_sum(mesh.elements.size(), 0.0);
  std::vector<Real> face_sum(mesh.faces.size(), 0.0);
  for (std::size_t s = 0; s < decomposition.submeshes.size(); ++s) {
    const WeightedSubmesh& sub = decomposition.submeshes[s];
    std::ostringstream tag;
    tag << "submesh " << s << ": ";
    for (const auto& [e, w] : sub.element_weights) {
      if (e < 0 || e >= static_cast<int>(mesh.elements.size())) {
        complain(tag.str() + "element weight index out of range");
        continue;
      }
      if (!(w > 0.0 && w <= 1.0 + 1e-12)) complain(tag.str() + "element weight outside (0,1]");
      elem_sum[e] += w;
    }
    for (const auto& [f, w] : sub.face_weights) {
      if (f < 0 || f >= static_cast<int>(mesh.faces.size())) {
        complain(tag.str() + "face weight index out of range");
        continue;
      }
      if (!(w > 0.0 && w <= 1.0 + 1e-12)) complain(tag.str() + "face weight outside (0,1]");
      face_sum[f] += w;
      for (const FaceSide& side : mesh.faces[f].sides) {
        auto it = sub.element_weights.find(side.element);
        if (it == sub.element_weights.end() || !(it->second > 0.0)) {
          std::ostringstream os;
          os << tag.str() << "face " << f << " is weighted but adjacent element " << side.element << " is not";
          complain(os.str());
        }
      }
    }
  }
  for (std::size_t e = 0; e < mesh.elements.size(); ++e)
    if (std::abs(elem_sum[e] - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "element " << e << " weights sum to " << elem_sum[e] << " (expected 1)";
      complain(os.str());
    }
  for (std::size_t f = 0; f < mesh.faces.size(); ++f)
    if (std::abs(face_sum[f] - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "face " << f << " weights sum to " << face_sum[f] << " (expected 1)";
      complain(os.str());
    }
  return issues;
}

}  // namespace sipdg
