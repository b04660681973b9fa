#include "sipdg/mesh.hpp"

#include "sipdg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

namespace sipdg {

ElementMapping Mesh::mapping(int e) const {
  const Element& el = elements.at(e);
  Matrix nodes(dim, static_cast<Index>(el.vertices.size()));
  for (std::size_t i = 0; i < el.vertices.size(); ++i) nodes.col(static_cast<Index>(i)) = vertices.col(el.vertices[i]);
  return ElementMapping(el.shape, nodes);
}

std::vector<int> Mesh::vertex_class_ids() const {
  std::vector<int> cls(static_cast<std::size_t>(n_vertices()));
  for (Index v = 0; v < n_vertices(); ++v) cls[v] = static_cast<int>(v);
  for (const auto& group : periodic_classes) {
    int rep = *std::min_element(group.begin(), group.end());
    for (int v : group) cls[v] = rep;
  }
  return cls;
}

std::vector<int> Mesh::face_vertices(const Face& face) const {
  const FaceSide& side = face.sides.at(0);
  const Element& el = elements.at(side.element);
  const FaceDef& fd = shape_info(el.shape).faces.at(side.local_face);
  std::vector<int> out;
  out.reserve(fd.vertices.size());
  for (int lv : fd.vertices) out.push_back(el.vertices.at(lv));
  return out;
}

int Mesh::var_count() const {
  if (elements.empty()) throw InvalidInputError("mesh has no elements");
  int m = elements.front().material.var_count();
  for (const Element& el : elements)
    if (el.material.var_count() != m) throw InvalidInputError("mesh mixes materials with different variable counts");
  return m;
}

// ---- generators ----

namespace {

struct CellTemplate {
  int dim = 0;
  Matrix vertices;  // dim x n, coordinates inside [0,1]^dim
  struct TElem {
    Shape shape;
    std::vector<int> verts;
  };
  std::vector<TElem> elems;
  // Per-element material factory given the template element id and the
  // per-vertex interpolation support (local vertex coordinates).
  std::function<CoefficientField(int, const Matrix&)> material;
};

Matrix cols2(std::initializer_list<std::array<Real, 2>> pts) {
  Matrix m(2, static_cast<Index>(pts.size()));
  Index j = 0;
  for (const auto& p : pts) {
    m(0, j) = p[0];
    m(1, j) = p[1];
    ++j;
  }
  return m;
}

Matrix cols3(std::initializer_list<std::array<Real, 3>> pts) {
  Matrix m(3, static_cast<Index>(pts.size()));
  Index j = 0;
  for (const auto& p : pts) {
    m(0, j) = p[0];
    m(1, j) = p[1];
    m(2, j) = p[2];
    ++j;
  }
  return m;
}

CoefficientField unit_acoustic(int d) {
  return CoefficientField::acoustic(d, Vector::Constant(1, 1.0), Vector::Constant(1, 1.0));
}

// Acoustic material with per-vertex values from a scalar field on the cell.
CoefficientField pl_acoustic(int d, const Matrix& verts, const std::function<Real(const Vector&)>& c_of,
                             const std::function<Real(const Vector&)>& rho_of) {
  Vector c(verts.cols()), rho(verts.cols());
  for (Index i = 0; i < verts.cols(); ++i) {
    c[i] = c_of(verts.col(i));
    rho[i] = rho_of(verts.col(i));
  }
  return CoefficientField::acoustic(d, c, rho);
}

void fix_tet_orientation(const Matrix& verts, std::vector<int>& tet) {
  Matrix edges(3, 3);
  for (int k = 0; k < 3; ++k) edges.col(k) = verts.col(tet[k + 1]) - verts.col(tet[0]);
  if (edges.determinant() < 0.0) std::swap(tet[1], tet[2]);
}

// 24 tetrahedra: six pyramids from the cube faces to the apex, each split
// through the face center.
void build_tet24(CellTemplate& t, Real apex_coord) {
  t.dim = 3;
  t.vertices = cols3({{0, 0, 0},
                      {1, 0, 0},
                      {1, 1, 0},
                      {0, 1, 0},
                      {0, 0, 1},
                      {1, 0, 1},
                      {1, 1, 1},
                      {0, 1, 1},
                      {0.5, 0.5, 0},
                      {0.5, 0.5, 1},
                      {0.5, 0, 0.5},
                      {1, 0.5, 0.5},
                      {0.5, 1, 0.5},
                      {0, 0.5, 0.5},
                      {apex_coord, apex_coord, apex_coord}});
  const int apex = 14;
  const std::array<std::array<int, 5>, 6> faces = {{{0, 1, 2, 3, 8},
                                                    {4, 5, 6, 7, 9},
                                                    {0, 1, 5, 4, 10},
                                                    {1, 2, 6, 5, 11},
                                                    {2, 3, 7, 6, 12},
                                                    {3, 0, 4, 7, 13}}};
  for (const auto& f : faces) {
    for (int k = 0; k < 4; ++k) {
      std::vector<int> tet = {f[k], f[(k + 1) % 4], f[4], apex};
      fix_tet_orientation(t.vertices, tet);
      t.elems.push_back({Shape::tet, tet});
    }
  }
}

CellTemplate cell_template(const std::string& family, const std::vector<Real>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n) {
      std::ostringstream os;
      os << "family " << family << " expects " << n << " parameter(s), got " << params.size();
      throw InvalidInputError(os.str());
    }
  };
  auto in_range = [&](Real x, Real lo, Real hi) {
    if (!(x > lo && x < hi)) {
      std::ostringstream os;
      os << "family " << family << ": parameter " << x << " outside (" << lo << ", " << hi << ")";
      throw InvalidInputError(os.str());
    }
  };

  CellTemplate t;
  if (family == "1D") {
    need(0);
    t.dim = 1;
    t.vertices = Matrix(1, 2);
    t.vertices << 0.0, 1.0;
    t.elems.push_back({Shape::interval, {0, 1}});
    t.material = [](int, const Matrix&) { return unit_acoustic(1); };
    return t;
  }
  if (family == "square") {
    need(0);
    t.dim = 2;
    t.vertices = cols2({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    t.elems.push_back({Shape::quad, {0, 1, 2, 3}});
    t.material = [](int, const Matrix&) { return unit_acoustic(2); };
    return t;
  }
  if (family == "triangular") {
    need(0);
    t.dim = 2;
    t.vertices = cols2({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    t.elems.push_back({Shape::triangle, {0, 1, 2}});
    t.elems.push_back({Shape::triangle, {0, 2, 3}});
    t.material = [](int, const Matrix&) { return unit_acoustic(2); };
    return t;
  }
  if (family == "cubic") {
    need(0);
    t.dim = 3;
    t.vertices = cols3({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}});
    t.elems.push_back({Shape::hex, {0, 1, 2, 3, 4, 5, 6, 7}});
    t.material = [](int, const Matrix&) { return unit_acoustic(3); };
    return t;
  }
  if (family == "tetrahedral") {
    need(0);
    build_tet24(t, 0.5);
    t.material = [](int, const Matrix&) { return unit_acoustic(3); };
    return t;
  }
  if (family == "rectangular" || family == "quadrilateral") {
    need(1);
    Real x = params[0];
    if (family == "rectangular")
      in_range(x, 0.0, 1.0);
    else
      in_range(x, 0.25, 0.75);
    t.dim = 2;
    if (family == "rectangular") {
      // grid lines at {0, x, 1} per axis
      t.vertices = cols2({{0, 0}, {x, 0}, {1, 0}, {0, x}, {x, x}, {1, x}, {0, 1}, {x, 1}, {1, 1}});
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
          int b = j * 3 + i;
          t.elems.push_back({Shape::quad, {b, b + 1, b + 4, b + 3}});
        }
    } else {
      // uniform 2x2 squares with the central node pulled to (x, x)
      t.vertices = cols2({{0, 0}, {0.5, 0}, {1, 0}, {0, 0.5}, {x, x}, {1, 0.5}, {0, 1}, {0.5, 1}, {1, 1}});
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
          int b = j * 3 + i;
          t.elems.push_back({Shape::quad, {b, b + 1, b + 4, b + 3}});
        }
    }
    t.material = [](int, const Matrix&) { return unit_acoustic(2); };
    return t;
  }
  if (family == "triangular-center") {
    need(1);
    Real x = params[0];
    in_range(x, 0.0, 1.0);
    t.dim = 2;
    t.vertices = cols2({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {x, x}});
    t.elems.push_back({Shape::triangle, {0, 1, 4}});
    t.elems.push_back({Shape::triangle, {1, 2, 4}});
    t.elems.push_back({Shape::triangle, {2, 3, 4}});
    t.elems.push_back({Shape::triangle, {3, 0, 4}});
    t.material = [](int, const Matrix&) { return unit_acoustic(2); };
    return t;
  }
  if (family == "cuboid" || family == "hexahedral") {
    need(1);
    Real x = params[0];
    if (family == "cuboid")
      in_range(x, 0.0, 1.0);
    else
      in_range(x, 1.0 / 3.0, 2.0 / 3.0);
    t.dim = 3;
    Real mid = family == "cuboid" ? x : 0.5;
    std::vector<Real> g = {0.0, mid, 1.0};
    t.vertices.resize(3, 27);
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
          Index idx = k * 9 + j * 3 + i;
          t.vertices.col(idx) << g[i], g[j], g[k];
        }
    if (family == "hexahedral") t.vertices.col(13) << x, x, x;  // the central node
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) {
          int b = k * 9 + j * 3 + i;
          t.elems.push_back({Shape::hex, {b, b + 1, b + 4, b + 3, b + 9, b + 10, b + 13, b + 12}});
        }
    t.material = [](int, const Matrix&) { return unit_acoustic(3); };
    return t;
  }
  if (family == "tetrahedral-center") {
    need(1);
    Real x = params[0];
    in_range(x, 0.0, 1.0);
    build_tet24(t, x);
    t.material = [](int, const Matrix&) { return unit_acoustic(3); };
    return t;
  }
  if (family == "squarePL" || family == "cubicPL") {
    need(2);
    Real rho0 = params[0], c0 = params[1];
    int axis = family == "squarePL" ? 1 : 2;
    CellTemplate base = cell_template(family == "squarePL" ? "rectangular" : "cuboid", {0.5});
    t = base;
    auto tent = [axis](Real v0) {
      return [axis, v0](const Vector& xv) { return 1.0 + (v0 - 1.0) * (1.0 - 2.0 * std::abs(xv[axis] - 0.5)); };
    };
    int d = t.dim;
    t.material = [d, tent, rho0, c0](int, const Matrix& verts) {
      return pl_acoustic(d, verts, tent(c0), tent(rho0));
    };
    return t;
  }
  if (family == "triPL" || family == "tetrahedralPL") {
    need(2);
    Real rho0 = params[0], c0 = params[1];
    CellTemplate base = cell_template(family == "triPL" ? "triangular-center" : "tetrahedral-center", {0.5});
    t = base;
    int d = t.dim;
    // 1 on the cell boundary, the parameter value at the cell center
    auto bump = [d](Real v0) {
      return [d, v0](const Vector& xv) {
        bool center = true;
        for (int axis = 0; axis < d; ++axis) center = center && std::abs(xv[axis] - 0.5) < 1e-12;
        return center ? v0 : 1.0;
      };
    };
    t.material = [d, bump, rho0, c0](int, const Matrix& verts) {
      return pl_acoustic(d, verts, bump(c0), bump(rho0));
    };
    return t;
  }
  if (family == "tetraEM" || family == "cubicEM") {
    need(2);
    Real mu1 = params[0], mu2 = params[1];
    bool tets = family == "tetraEM";
    t = cell_template(tets ? "tetrahedral-center" : "cuboid", {0.5});
    t.material = [mu1, mu2, tets](int, const Matrix& verts) {
      Vector centroid = verts.rowwise().mean();
      // tetraEM: mu1 below the surface x = z; cubicEM: mu1 in the bottom half
      bool lower = tets ? centroid[2] < centroid[0] : centroid[2] < 0.5;
      Real mu = lower ? mu1 : mu2;
      return CoefficientField::maxwell(Vector::Constant(1, mu), Vector::Constant(1, 1.0));
    };
    return t;
  }
  if (family == "tetraISO" || family == "cubicISO") {
    need(2);
    Real lambda = params[0], mu = params[1];
    if (family == "tetraISO") {
      build_tet24(t, 0.5);
    } else {
      t = cell_template("cubic", {});
    }
    t.material = [lambda, mu](int, const Matrix&) {
      return CoefficientField::elastic_iso(3, Vector::Constant(1, lambda), Vector::Constant(1, mu),
                                           Vector::Constant(1, 1.0));
    };
    return t;
  }
  throw InvalidInputError("unknown mesh family: " + family);
}

// The public family names; "triangular[x]" and "tetrahedral[x]" reuse the
// plain names with a parameter, mapped here onto the centered templates.
std::string resolve_family(const std::string& family, const std::vector<Real>& params) {
  if (family == "triangular" && params.size() == 1) return "triangular-center";
  if (family == "tetrahedral" && params.size() == 1) return "tetrahedral-center";
  return family;
}

struct VertexKey {
  std::array<long long, 3> q{0, 0, 0};
  bool operator<(const VertexKey& other) const { return q < other.q; }
};

VertexKey quantize(const Vector& x) {
  VertexKey key;
  for (Index i = 0; i < x.size(); ++i) key.q[i] = std::llround(x[i] * 1e9);
  return key;
}

}  // namespace

void parse_family(const std::string& text, std::string& family, std::vector<Real>& params) {
  params.clear();
  auto lb = text.find('[');
  if (lb == std::string::npos) {
    family = text;
    return;
  }
  if (text.back() != ']') throw InvalidInputError("malformed family string: " + text);
  family = text.substr(0, lb);
  std::string body = text.substr(lb + 1, text.size() - lb - 2);
  std::istringstream is(body);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    try {
      params.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw InvalidInputError("malformed family parameter: " + tok);
    }
  }
}

const std::vector<std::string>& generator_families() {
  static const std::vector<std::string> names = {
      "1D",          "square",   "triangular", "cubic",   "tetrahedral", "rectangular", "quadrilateral",
      "cuboid",      "hexahedral", "squarePL", "triPL",   "cubicPL",     "tetrahedralPL", "tetraEM",
      "cubicEM",     "tetraISO", "cubicISO"};
  return names;
}

Mesh generate_mesh(const GeneratorSpec& spec) {
  if (spec.cells < 1) throw InvalidInputError("generate_mesh: cells per axis must be >= 1");
  if (spec.degree < 0) throw InvalidInputError("generate_mesh: degree must be >= 0");
  CellTemplate tmpl = cell_template(resolve_family(spec.family, spec.params), spec.params);
  const int d = tmpl.dim;
  const int N = spec.cells;

  Mesh mesh;
  mesh.dim = d;
  mesh.period = Vector::Zero(d);
  for (int axis = 0; axis < d; ++axis)
    if (spec.boundary[axis] == BoundaryKind::periodic) mesh.period[axis] = static_cast<Real>(N);

  // ---- instantiate vertices cell by cell, dedup on quantized coordinates ----
  std::map<VertexKey, int> vertex_ids;
  std::vector<Vector> coords;
  auto vertex_at = [&](const Vector& x) {
    VertexKey key = quantize(x);
    auto it = vertex_ids.find(key);
    if (it != vertex_ids.end()) return it->second;
    int id = static_cast<int>(coords.size());
    vertex_ids.emplace(key, id);
    coords.push_back(x);
    return id;
  };

  int cells_total = 1;
  for (int axis = 0; axis < d; ++axis) cells_total *= N;

  for (int cell = 0; cell < cells_total; ++cell) {
    Vector origin(d);
    int rem = cell;
    for (int axis = 0; axis < d; ++axis) {
      origin[axis] = static_cast<Real>(rem % N);
      rem /= N;
    }
    std::vector<int> local_ids(tmpl.vertices.cols());
    for (Index tv = 0; tv < tmpl.vertices.cols(); ++tv)
      local_ids[tv] = vertex_at(tmpl.vertices.col(tv) + origin);
    for (std::size_t te = 0; te < tmpl.elems.size(); ++te) {
      const auto& telem = tmpl.elems[te];
      Element el;
      el.shape = telem.shape;
      el.degree = spec.degree;
      el.vertices.reserve(telem.verts.size());
      Matrix local_verts(d, static_cast<Index>(telem.verts.size()));
      for (std::size_t i = 0; i < telem.verts.size(); ++i) {
        el.vertices.push_back(local_ids[telem.verts[i]]);
        local_verts.col(static_cast<Index>(i)) = tmpl.vertices.col(telem.verts[i]);
      }
      el.material = tmpl.material(static_cast<int>(te), local_verts);
      mesh.elements.push_back(std::move(el));
    }
  }

  mesh.vertices.resize(d, static_cast<Index>(coords.size()));
  for (std::size_t v = 0; v < coords.size(); ++v) mesh.vertices.col(static_cast<Index>(v)) = coords[v];

  // ---- periodic vertex classes: identify x with x mod N on periodic axes ----
  auto canonical_coord = [&](Vector x) {
    for (int axis = 0; axis < d; ++axis) {
      if (mesh.period[axis] > 0.0) {
        while (x[axis] >= mesh.period[axis] - 1e-9) x[axis] -= mesh.period[axis];
        while (x[axis] < -1e-9) x[axis] += mesh.period[axis];
      }
    }
    return x;
  };
  std::map<int, std::vector<int>> class_groups;
  for (std::size_t v = 0; v < coords.size(); ++v) {
    auto it = vertex_ids.find(quantize(canonical_coord(coords[v])));
    if (it == vertex_ids.end()) throw NumericalError("generate_mesh: canonical vertex lookup failed");
    if (it->second != static_cast<int>(v)) class_groups[it->second].push_back(static_cast<int>(v));
  }
  for (auto& [rep, members] : class_groups) {
    std::vector<int> group = {rep};
    group.insert(group.end(), members.begin(), members.end());
    std::sort(group.begin(), group.end());
    mesh.periodic_classes.push_back(std::move(group));
  }

  // ---- facet matching ----
  struct Facet {
    int element;
    int local_face;
    Offset shift;  // canonicalizing translation in period units
  };
  std::map<std::vector<int>, std::vector<Facet>> buckets;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const Element& el = mesh.elements[e];
    const ShapeInfo& info = shape_info(el.shape);
    for (std::size_t lf = 0; lf < info.faces.size(); ++lf) {
      const FaceDef& fd = info.faces[lf];
      // centroid decides the canonical copy
      Vector centroid = Vector::Zero(d);
      for (int lv : fd.vertices) centroid += mesh.vertices.col(el.vertices[lv]);
      centroid /= static_cast<Real>(fd.vertices.size());
      Offset shift = Offset::Zero();
      for (int axis = 0; axis < d; ++axis) {
        if (mesh.period[axis] > 0.0)
          shift[axis] = -static_cast<int>(std::floor(centroid[axis] / mesh.period[axis] + 1e-9));
      }
      std::vector<int> key;
      key.reserve(fd.vertices.size());
      for (int lv : fd.vertices) {
        Vector pos = mesh.vertices.col(el.vertices[lv]);
        for (int axis = 0; axis < d; ++axis) pos[axis] += shift[axis] * (mesh.period[axis] > 0 ? mesh.period[axis] : 0.0);
        auto it = vertex_ids.find(quantize(pos));
        if (it == vertex_ids.end()) throw NumericalError("generate_mesh: facet canonicalization failed");
        key.push_back(it->second);
      }
      std::sort(key.begin(), key.end());
      buckets[key].push_back({static_cast<int>(e), static_cast<int>(lf), shift});
    }
  }

  for (auto& [key, facets] : buckets) {
    if (facets.size() == 2) {
      const Facet& a = facets[0];
      const Facet& b = facets[1];
      Face face;
      face.kind = FaceKind::interior;
      Offset la = b.shift - a.shift;  // offset of b's adjacent copy relative to a
      face.sides.push_back({a.element, a.local_face, la});
      face.sides.push_back({b.element, b.local_face, Offset(-la)});
      mesh.faces.push_back(std::move(face));
    } else if (facets.size() == 1) {
      const Facet& a = facets[0];
      // boundary facet: find its axis from the untranslated centroid
      const Element& el = mesh.elements[a.element];
      const FaceDef& fd = shape_info(el.shape).faces[a.local_face];
      Vector centroid = Vector::Zero(d);
      for (int lv : fd.vertices) centroid += mesh.vertices.col(el.vertices[lv]);
      centroid /= static_cast<Real>(fd.vertices.size());
      int axis = -1;
      for (int ax = 0; ax < d; ++ax) {
        if (std::abs(centroid[ax]) < 1e-9 || std::abs(centroid[ax] - N) < 1e-9) axis = ax;
      }
      if (axis < 0) throw MappingError("generate_mesh: unmatched interior facet");
      if (spec.boundary[axis] == BoundaryKind::periodic)
        throw MappingError("generate_mesh: periodic facet failed to pair");
      Face face;
      face.kind = spec.boundary[axis] == BoundaryKind::dirichlet ? FaceKind::dirichlet : FaceKind::neumann;
      face.sides.push_back({a.element, a.local_face, Offset::Zero()});
      mesh.faces.push_back(std::move(face));
    } else {
      throw MappingError("generate_mesh: facet bucket with unexpected multiplicity");
    }
  }
  return mesh;
}

// ---- validation ----

namespace {

bool faces_match_geometrically(const Mesh& mesh, const Face& face, Real tol, std::string* why) {
  if (face.sides.size() != 2) return true;
  const FaceSide& s0 = face.sides[0];
  const FaceSide& s1 = face.sides[1];
  const Element& e0 = mesh.elements[s0.element];
  const Element& e1 = mesh.elements[s1.element];
  const FaceDef& f0 = shape_info(e0.shape).faces[s0.local_face];
  const FaceDef& f1 = shape_info(e1.shape).faces[s1.local_face];
  if (f0.vertices.size() != f1.vertices.size()) {
    if (why) *why = "face sides have different vertex counts";
    return false;
  }
  // side-1 copy adjacent to side 0 is translated by s0.offset * period
  Vector shift = Vector::Zero(mesh.dim);
  for (int axis = 0; axis < mesh.dim; ++axis)
    shift[axis] = mesh.period.size() > axis && mesh.period[axis] > 0 ? s0.offset[axis] * mesh.period[axis] : 0.0;
  std::vector<bool> used(f1.vertices.size(), false);
  for (int lv0 : f0.vertices) {
    Vector p0 = mesh.vertices.col(e0.vertices[lv0]);
    bool found = false;
    for (std::size_t i = 0; i < f1.vertices.size(); ++i) {
      if (used[i]) continue;
      Vector p1 = mesh.vertices.col(e1.vertices[f1.vertices[i]]) + shift;
      if ((p0 - p1).norm() <= tol) {
        used[i] = true;
        found = true;
        break;
      }
    }
    if (!found) {
      if (why) *why = "face corner positions do not match across sides";
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<std::string> validate(const Mesh& mesh) {
  std::vector<std::string> issues;
  auto complain = [&](const std::string& msg) { issues.push_back(msg); };

  if (mesh.dim < 1 || mesh.dim > 3) complain("mesh dimension must be 1, 2 or 3");
  if (mesh.elements.empty()) complain("mesh has no elements");

  int m = -1;
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const Element& el = mesh.elements[e];
    const ShapeInfo& info = shape_info(el.shape);
    std::ostringstream tag;
    tag << "element " << e << ": ";
    if (info.dim != mesh.dim) complain(tag.str() + "shape dimension differs from mesh dimension");
    if (static_cast<int>(el.vertices.size()) != info.n_vertices) complain(tag.str() + "wrong vertex count");
    for (int v : el.vertices)
      if (v < 0 || v >= mesh.n_vertices()) complain(tag.str() + "vertex index out of range");
    if (el.material.dim() != mesh.dim) complain(tag.str() + "material dimension mismatch");
    if (m < 0) m = el.material.var_count();
    if (el.material.var_count() != m) complain(tag.str() + "variable count differs across elements");
    if (el.degree < 0) complain(tag.str() + "negative polynomial degree");
    try {
      ElementMapping map = mesh.mapping(static_cast<int>(e));
      QuadratureRule rule = quadrature(el.shape, 2);
      for (Index q = 0; q < rule.weights.size(); ++q) map.jacobian_det(rule.points.col(q));
    } catch (const MappingError& err) {
      complain(tag.str() + err.what());
    }
  }

  // facet coverage: every (element, local_face) appears in exactly one face
  std::map<std::pair<int, int>, int> seen;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    std::ostringstream tag;
    tag << "face " << f << ": ";
    if (face.kind == FaceKind::interior && face.sides.size() != 2)
      complain(tag.str() + "interior face must have two sides");
    if (face.kind != FaceKind::interior && face.sides.size() != 1)
      complain(tag.str() + "boundary face must have one side");
    for (const FaceSide& side : face.sides) {
      if (side.element < 0 || side.element >= static_cast<int>(mesh.elements.size())) {
        complain(tag.str() + "side element out of range");
        continue;
      }
      const ShapeInfo& info = shape_info(mesh.elements[side.element].shape);
      if (side.local_face < 0 || side.local_face >= static_cast<int>(info.faces.size())) {
        complain(tag.str() + "side local face out of range");
        continue;
      }
      seen[{side.element, side.local_face}]++;
      for (int axis = 0; axis < 3; ++axis) {
        if (std::abs(side.offset[axis]) > 1) complain(tag.str() + "offset exceeds one period");
        bool periodic_axis = axis < mesh.dim && mesh.period.size() > axis && mesh.period[axis] > 0.0;
        if (side.offset[axis] != 0 && !periodic_axis) complain(tag.str() + "offset on a non-periodic axis");
      }
    }
    if (face.sides.size() == 2) {
      Offset sum = face.sides[0].offset + face.sides[1].offset;
      if (sum[0] != 0 || sum[1] != 0 || sum[2] != 0)
        complain(tag.str() + "side offsets are not negatives of each other");
      std::string why;
      if (!faces_match_geometrically(mesh, face, 1e-9, &why)) complain(tag.str() + why);
    }
  }
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    const ShapeInfo& info = shape_info(mesh.elements[e].shape);
    for (std::size_t lf = 0; lf < info.faces.size(); ++lf) {
      int count = seen.count({static_cast<int>(e), static_cast<int>(lf)})
                      ? seen[{static_cast<int>(e), static_cast<int>(lf)}]
                      : 0;
      if (count != 1) {
        std::ostringstream os;
        os << "element " << e << " local face " << lf << " referenced by " << count << " faces (expected 1)";
        complain(os.str());
      }
    }
  }

  // periodic classes: members must differ by period multiples
  for (const auto& group : mesh.periodic_classes) {
    for (int v : group) {
      if (v < 0 || v >= mesh.n_vertices()) {
        complain("periodic class references vertex out of range");
        continue;
      }
    }
    if (group.size() < 2) complain("periodic class with fewer than two members");
    for (std::size_t i = 1; i < group.size(); ++i) {
      Vector diff = mesh.vertices.col(group[i]) - mesh.vertices.col(group[0]);
      for (int axis = 0; axis < mesh.dim; ++axis) {
        Real p = mesh.period.size() > axis ? mesh.period[axis] : 0.0;
        Real r = diff[axis];
        if (p > 0.0) r = r - p * std::round(r / p);
        if (std::abs(r) > 1e-9) complain("periodic class members not related by a period translation");
      }
    }
  }
  return issues;
}

}  // namespace sipdg
