#pragma once

// Per-element coefficient fields: a material model plus scalar parameters
// that are either constant or piecewise linear (one value per element
// vertex). Parameters are interpolated with the element's vertex weights
// first and the model formula is applied to the interpolated values.

#include "sipdg/common.hpp"
#include "sipdg/tensor4.hpp"

#include <map>
#include <string>

namespace sipdg {

enum class MaterialModel { acoustic, maxwell, elastic_iso, generic };

std::string material_model_name(MaterialModel model);
MaterialModel material_model_from_name(const std::string& name);

class CoefficientField {
 public:
  CoefficientField() = default;

  // rho and c, both > 0; vectors have one entry (constant) or one per vertex.
  static CoefficientField acoustic(int d, Vector c, Vector rho);
  // rho = eps; d = m = 3.
  static CoefficientField maxwell(Vector mu, Vector eps);
  // m = d.
  static CoefficientField elastic_iso(int d, Vector lambda, Vector mu, Vector rho);
  // Arbitrary constant symmetric PSD tensor, for tests and audits.
  static CoefficientField generic(Tensor4d C, Real rho);

  MaterialModel model() const { return model_; }
  int dim() const { return d_; }
  int var_count() const { return m_; }
  bool constant() const;

  // Interpolation weights come from vertex_weights() of the owning element;
  // constant fields accept an empty weight vector.
  Real density(const Vector& weights) const;
  Tensor4d tensor(const Vector& weights) const;

  const std::map<std::string, Vector>& parameters() const { return params_; }

 private:
  Real interpolate(const std::string& name, const Vector& weights) const;

  MaterialModel model_ = MaterialModel::acoustic;
  int d_ = 0;
  int m_ = 0;
  std::map<std::string, Vector> params_;
  Tensor4d generic_tensor_;
  Real generic_rho_ = 1.0;
};

}  // namespace sipdg
