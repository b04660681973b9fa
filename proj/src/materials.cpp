#include "sipdg/materials.hpp"

namespace sipdg {

namespace {

void check_positive(const std::string& name, const Vector& values, bool allow_zero) {
  if (values.size() < 1) throw InvalidInputError("material parameter " + name + " is empty");
  for (Index i = 0; i < values.size(); ++i) {
    if (allow_zero ? values[i] < 0.0 : values[i] <= 0.0)
      throw InvalidInputError("material parameter " + name + " must be " +
                              (allow_zero ? "nonnegative" : "positive"));
  }
}

}  // namespace

std::string material_model_name(MaterialModel model) {
  switch (model) {
    case MaterialModel::acoustic: return "acoustic";
    case MaterialModel::maxwell: return "maxwell";
    case MaterialModel::elastic_iso: return "elastic_iso";
    case MaterialModel::generic: return "generic";
  }
  throw InvalidInputError("unknown material model");
}

MaterialModel material_model_from_name(const std::string& name) {
  if (name == "acoustic") return MaterialModel::acoustic;
  if (name == "maxwell") return MaterialModel::maxwell;
  if (name == "elastic_iso") return MaterialModel::elastic_iso;
  if (name == "generic") return MaterialModel::generic;
  throw InvalidInputError("unknown material model: " + name);
}

CoefficientField CoefficientField::acoustic(int d, Vector c, Vector rho) {
  check_positive("c", c, false);
  check_positive("rho", rho, false);
  CoefficientField f;
  f.model_ = MaterialModel::acoustic;
  f.d_ = d;
  f.m_ = 1;
  f.params_["c"] = std::move(c);
  f.params_["rho"] = std::move(rho);
  return f;
}

CoefficientField CoefficientField::maxwell(Vector mu, Vector eps) {
  check_positive("mu", mu, false);
  check_positive("eps", eps, false);
  CoefficientField f;
  f.model_ = MaterialModel::maxwell;
  f.d_ = 3;
  f.m_ = 3;
  f.params_["mu"] = std::move(mu);
  f.params_["eps"] = std::move(eps);
  return f;
}

CoefficientField CoefficientField::elastic_iso(int d, Vector lambda, Vector mu, Vector rho) {
  check_positive("lambda", lambda, true);
  check_positive("mu", mu, true);
  check_positive("rho", rho, false);
  CoefficientField f;
  f.model_ = MaterialModel::elastic_iso;
  f.d_ = d;
  f.m_ = d;
  f.params_["lambda"] = std::move(lambda);
  f.params_["mu"] = std::move(mu);
  f.params_["rho"] = std::move(rho);
  return f;
}

CoefficientField CoefficientField::generic(Tensor4d C, Real rho) {
  if (!(rho > 0.0)) throw InvalidInputError("generic material: rho must be positive");
  if (!C.is_symmetric(1e-12)) throw InvalidInputError("generic material: tensor lacks the major symmetry");
  CoefficientField f;
  f.model_ = MaterialModel::generic;
  f.d_ = C.d();
  f.m_ = C.m();
  f.generic_tensor_ = std::move(C);
  f.generic_rho_ = rho;
  return f;
}

bool CoefficientField::constant() const {
  for (const auto& [name, values] : params_)
    if (values.size() > 1) return false;
  return true;
}

Real CoefficientField::interpolate(const std::string& name, const Vector& weights) const {
  const Vector& values = params_.at(name);
  if (values.size() == 1) return values[0];
  if (weights.size() != values.size())
    throw InvalidInputError("material parameter " + name + ": interpolation weights have wrong size");
  return weights.dot(values);
}

Real CoefficientField::density(const Vector& weights) const {
  switch (model_) {
    case MaterialModel::acoustic:
    case MaterialModel::elastic_iso: return interpolate("rho", weights);
    case MaterialModel::maxwell: return interpolate("eps", weights);
    case MaterialModel::generic: return generic_rho_;
  }
  throw InvalidInputError("unknown material model");
}

Tensor4d CoefficientField::tensor(const Vector& weights) const {
  switch (model_) {
    case MaterialModel::acoustic: return make_acoustic_tensor(d_, interpolate("c", weights));
    case MaterialModel::maxwell: return make_maxwell_tensor(interpolate("mu", weights));
    case MaterialModel::elastic_iso:
      return make_elastic_iso_tensor(d_, interpolate("lambda", weights), interpolate("mu", weights));
    case MaterialModel::generic: return generic_tensor_;
  }
  throw InvalidInputError("unknown material model");
}

}  // namespace sipdg
