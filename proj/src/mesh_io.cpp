#include "sipdg/mesh_io.hpp"

#include <json.hpp>

#include <fstream>

namespace sipdg {

namespace {

using nlohmann::json;

std::string long_shape_name(Shape shape) {
  switch (shape) {
    case Shape::quad: return "quadrilateral";
    case Shape::tet: return "tetrahedron";
    case Shape::hex: return "hexahedron";
    default: return shape_name(shape);
  }
}

json material_to_json(const CoefficientField& field) {
  json out;
  out["model"] = material_model_name(field.model());
  if (field.model() == MaterialModel::generic) {
    Tensor4d C = field.tensor(Vector());
    out["vars"] = C.m();
    out["rho"] = field.density(Vector());
    std::vector<std::vector<Real>> flat(C.flat().rows());
    for (Index i = 0; i < C.flat().rows(); ++i)
      flat[i] = std::vector<Real>(C.flat().row(i).begin(), C.flat().row(i).end());
    out["flat"] = flat;
    return out;
  }
  json params = json::object();
  for (const auto& [name, values] : field.parameters())
    params[name] = std::vector<Real>(values.begin(), values.end());
  out["params"] = params;
  return out;
}

CoefficientField material_from_json(const json& in, int d) {
  std::string model_name = in.at("model").get<std::string>();
  MaterialModel model = material_model_from_name(model_name);
  if (model == MaterialModel::generic) {
    int m = in.at("vars").get<int>();
    auto rows = in.at("flat").get<std::vector<std::vector<Real>>>();
    Matrix flat(static_cast<Index>(rows.size()), static_cast<Index>(rows.size()));
    if (static_cast<int>(rows.size()) != d * m) throw InvalidInputError("mesh json: generic tensor has wrong size");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw InvalidInputError("mesh json: generic tensor is not square");
      for (std::size_t j = 0; j < rows[i].size(); ++j) flat(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
    return CoefficientField::generic(Tensor4d(d, m, flat), in.at("rho").get<Real>());
  }
  std::map<std::string, Vector> params;
  for (const auto& [name, values] : in.at("params").items()) {
    auto vals = values.get<std::vector<Real>>();
    params[name] = Eigen::Map<const Vector>(vals.data(), static_cast<Index>(vals.size()));
  }
  auto param = [&](const char* name) -> const Vector& {
    auto it = params.find(name);
    if (it == params.end()) throw InvalidInputError(std::string("mesh json: material misses parameter ") + name);
    return it->second;
  };
  switch (model) {
    case MaterialModel::acoustic: return CoefficientField::acoustic(d, param("c"), param("rho"));
    case MaterialModel::maxwell: return CoefficientField::maxwell(param("mu"), param("eps"));
    case MaterialModel::elastic_iso: return CoefficientField::elastic_iso(d, param("lambda"), param("mu"), param("rho"));
    default: throw InvalidInputError("mesh json: unsupported material model " + model_name);
  }
}

std::string face_kind_name(FaceKind kind) {
  switch (kind) {
    case FaceKind::interior: return "interior";
    case FaceKind::dirichlet: return "dirichlet";
    case FaceKind::neumann: return "neumann";
  }
  throw InvalidInputError("unknown face kind");
}

FaceKind face_kind_from_name(const std::string& name) {
  if (name == "interior") return FaceKind::interior;
  if (name == "dirichlet") return FaceKind::dirichlet;
  if (name == "neumann") return FaceKind::neumann;
  throw InvalidInputError("mesh json: unknown face kind " + name);
}

}  // namespace

std::string mesh_to_json(const Mesh& mesh) {
  json out;
  out["version"] = 1;
  out["dim"] = mesh.dim;

  std::vector<std::vector<Real>> verts(static_cast<std::size_t>(mesh.n_vertices()));
  for (Index v = 0; v < mesh.n_vertices(); ++v)
    verts[v] = std::vector<Real>(mesh.vertices.col(v).begin(), mesh.vertices.col(v).end());
  out["vertices"] = verts;
  out["periodic_classes"] = mesh.periodic_classes;
  out["period"] = std::vector<Real>(mesh.period.begin(), mesh.period.end());

  json elements = json::array();
  for (const Element& el : mesh.elements) {
    json je;
    je["shape"] = long_shape_name(el.shape);
    je["vertices"] = el.vertices;
    je["degree"] = el.degree;
    je["material"] = material_to_json(el.material);
    elements.push_back(std::move(je));
  }
  out["elements"] = std::move(elements);

  json faces = json::array();
  for (const Face& face : mesh.faces) {
    json jf;
    jf["kind"] = face_kind_name(face.kind);
    json sides = json::array();
    for (const FaceSide& side : face.sides) {
      json js;
      js["element"] = side.element;
      js["local_face"] = side.local_face;
      js["offset"] = {side.offset[0], side.offset[1], side.offset[2]};
      sides.push_back(std::move(js));
    }
    jf["sides"] = std::move(sides);
    faces.push_back(std::move(jf));
  }
  out["faces"] = std::move(faces);
  return out.dump(2);
}

Mesh mesh_from_json(const std::string& text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& err) {
    throw InvalidInputError(std::string("mesh json: parse failure: ") + err.what());
  }
  try {
    int version = in.at("version").get<int>();
    if (version != 1) throw InvalidInputError("mesh json: unsupported version");
    Mesh mesh;
    mesh.dim = in.at("dim").get<int>();
    if (mesh.dim < 1 || mesh.dim > 3) throw InvalidInputError("mesh json: dim must be 1, 2 or 3");

    auto verts = in.at("vertices").get<std::vector<std::vector<Real>>>();
    mesh.vertices.resize(mesh.dim, static_cast<Index>(verts.size()));
    for (std::size_t v = 0; v < verts.size(); ++v) {
      if (static_cast<int>(verts[v].size()) != mesh.dim)
        throw InvalidInputError("mesh json: vertex coordinate count differs from dim");
      for (int k = 0; k < mesh.dim; ++k) mesh.vertices(k, static_cast<Index>(v)) = verts[v][k];
    }
    mesh.periodic_classes = in.at("periodic_classes").get<std::vector<std::vector<int>>>();
    auto period = in.value("period", std::vector<Real>(mesh.dim, 0.0));
    if (static_cast<int>(period.size()) != mesh.dim) throw InvalidInputError("mesh json: period has wrong length");
    mesh.period = Eigen::Map<const Vector>(period.data(), static_cast<Index>(period.size()));

    for (const json& je : in.at("elements")) {
      Element el;
      el.shape = shape_from_name(je.at("shape").get<std::string>());
      el.vertices = je.at("vertices").get<std::vector<int>>();
      el.degree = je.at("degree").get<int>();
      el.material = material_from_json(je.at("material"), mesh.dim);
      mesh.elements.push_back(std::move(el));
    }
    for (const json& jf : in.at("faces")) {
      Face face;
      face.kind = face_kind_from_name(jf.at("kind").get<std::string>());
      for (const json& js : jf.at("sides")) {
        FaceSide side;
        side.element = js.at("element").get<int>();
        side.local_face = js.at("local_face").get<int>();
        auto off = js.at("offset").get<std::vector<int>>();
        if (off.size() != 3) throw InvalidInputError("mesh json: offset must have three entries");
        side.offset << off[0], off[1], off[2];
        face.sides.push_back(side);
      }
      mesh.faces.push_back(std::move(face));
    }
    return mesh;
  } catch (const json::exception& err) {
    throw InvalidInputError(std::string("mesh json: schema violation: ") + err.what());
  }
}

void write_mesh_json(const Mesh& mesh, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw InvalidInputError("cannot open for writing: " + path);
  os << mesh_to_json(mesh) << "\n";
}

Mesh read_mesh_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInputError("cannot open for reading: " + path);
  std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return mesh_from_json(text);
}

}  // namespace sipdg
