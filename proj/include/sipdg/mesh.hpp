#pragma once

// Mesh data model and the periodic unit-cell generators. Meshes tile the
// domain (0,N)^d with N copies per axis of a fixed unit-cell subdivision.
// Faces list their adjacent element sides; a side's integer offset gives the
// lattice translation (in domain periods) of the *other* side's element copy
// relative to this side, so the two offsets of a boundary-crossing face are
// negatives of each other and interior faces carry zeros.

#include "sipdg/common.hpp"
#include "sipdg/mapping.hpp"
#include "sipdg/materials.hpp"
#include "sipdg/shapes.hpp"

#include <array>
#include <string>
#include <vector>

namespace sipdg {

enum class FaceKind { interior, dirichlet, neumann };
enum class BoundaryKind { periodic, dirichlet, neumann };

struct FaceSide {
  int element = -1;
  int local_face = -1;
  Offset offset = Offset::Zero();
};

struct Face {
  FaceKind kind = FaceKind::interior;
  std::vector<FaceSide> sides;
};

struct Element {
  Shape shape = Shape::interval;
  std::vector<int> vertices;
  int degree = 1;
  CoefficientField material;
};

struct Mesh {
  int dim = 0;
  Matrix vertices;  // dim x n_vertices
  std::vector<Element> elements;
  std::vector<Face> faces;
  // Groups of periodically identified vertices (singleton groups omitted).
  std::vector<std::vector<int>> periodic_classes;
  Vector period;  // per-axis domain extent; zero entry = axis not periodic

  Index n_vertices() const { return vertices.cols(); }
  ElementMapping mapping(int e) const;
  // Canonical vertex class ids (class = lowest member vertex id).
  std::vector<int> vertex_class_ids() const;
  // Global vertex ids of a face, from side 0's local facet.
  std::vector<int> face_vertices(const Face& face) const;
  // Variable count m shared by all element materials.
  int var_count() const;
};

struct GeneratorSpec {
  std::string family;
  std::vector<Real> params;
  int degree = 1;
  int cells = 1;  // N, copies per axis
  std::array<BoundaryKind, 3> boundary = {BoundaryKind::periodic, BoundaryKind::periodic, BoundaryKind::periodic};
};

// Parses "tetrahedral[0.6]" style family strings into name + params.
void parse_family(const std::string& text, std::string& family, std::vector<Real>& params);

// All generator family names.
const std::vector<std::string>& generator_families();

Mesh generate_mesh(const GeneratorSpec& spec);

// Structural and geometric audit; returns human-readable violations.
std::vector<std::string> validate(const Mesh& mesh);

}  // namespace sipdg
