#pragma once

// Order-4 coefficient tensors C in R^{d x m x m x d} with the major symmetry
// C = C^t (transpose reverses all indices), stored as the flattened symmetric
// (d*m) x (d*m) matrix acting on vectorized d x m gradients. The double dot
// contraction of two order-4 tensors is then a plain matrix product, and
// quadratic forms sigma^t : C : tau become vec(sigma)^t * flat * vec(tau).

#include "sipdg/common.hpp"

#include <cmath>

namespace sipdg {

template <typename Scalar>
class Tensor4 {
 public:
  using Flat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Tensor4() : d_(0), m_(0) {}
  Tensor4(int d, int m) : d_(d), m_(m), flat_(Flat::Zero(d * m, d * m)) {}
  Tensor4(int d, int m, Flat flat) : d_(d), m_(m), flat_(std::move(flat)) {
    if (flat_.rows() != d * m || flat_.cols() != d * m)
      throw InvalidInputError("Tensor4: flat storage has wrong size");
  }

  int d() const { return d_; }
  int m() const { return m_; }

  // Entry C_{iD, iM, jM, jD}.
  Scalar& operator()(int iD, int iM, int jM, int jD) { return flat_(iD * m_ + iM, jD * m_ + jM); }
  Scalar operator()(int iD, int iM, int jM, int jD) const { return flat_(iD * m_ + iM, jD * m_ + jM); }

  const Flat& flat() const { return flat_; }
  Flat& flat() { return flat_; }

  Tensor4 transpose() const { return Tensor4(d_, m_, flat_.transpose()); }

  bool is_symmetric(Scalar tol) const {
    return (flat_ - flat_.transpose()).cwiseAbs().maxCoeff() <= tol * (Scalar(1) + flat_.cwiseAbs().maxCoeff());
  }

  Tensor4 operator+(const Tensor4& other) const { return Tensor4(d_, m_, flat_ + other.flat_); }
  Tensor4 operator*(Scalar s) const { return Tensor4(d_, m_, flat_ * s); }

  // Double dot composition [this : other], again an order-4 tensor.
  Tensor4 ddot(const Tensor4& other) const {
    if (other.d_ != d_ || other.m_ != m_) throw InvalidInputError("Tensor4::ddot: shape mismatch");
    return Tensor4(d_, m_, flat_ * other.flat_);
  }

 private:
  int d_, m_;
  Flat flat_;
};

using Tensor4d = Tensor4<Real>;

// vec(sigma) for sigma in R^{d x m}, matching the flattened tensor layout.
template <typename Derived>
Eigen::Vector<typename Derived::Scalar, Eigen::Dynamic> vectorize_gradient(const Eigen::MatrixBase<Derived>& sigma) {
  Eigen::Vector<typename Derived::Scalar, Eigen::Dynamic> v(sigma.rows() * sigma.cols());
  for (Index iD = 0; iD < sigma.rows(); ++iD)
    for (Index iM = 0; iM < sigma.cols(); ++iM) v[iD * sigma.cols() + iM] = sigma(iD, iM);
  return v;
}

// sigma^t : C : tau for sigma, tau in R^{d x m}.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar ddot_form(const Tensor4<Scalar>& C, const Eigen::MatrixBase<DerivedA>& sigma,
                 const Eigen::MatrixBase<DerivedB>& tau) {
  if (sigma.rows() != C.d() || sigma.cols() != C.m() || tau.rows() != C.d() || tau.cols() != C.m())
    throw InvalidInputError("ddot_form: gradient shape mismatch");
  return vectorize_gradient(sigma).dot(C.flat() * vectorize_gradient(tau));
}

// C : sigma, a d x m matrix.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> apply(const Tensor4<Scalar>& C,
                                                            const Eigen::MatrixBase<Derived>& sigma) {
  Eigen::Vector<Scalar, Eigen::Dynamic> v = C.flat() * vectorize_gradient(sigma);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(C.d(), C.m());
  for (int iD = 0; iD < C.d(); ++iD)
    for (int iM = 0; iM < C.m(); ++iM) out(iD, iM) = v[iD * C.m() + iM];
  return out;
}

// n . C : sigma, an m-vector (the flux density through a plane with normal n).
template <typename Scalar, typename DerivedN, typename DerivedS>
Eigen::Vector<Scalar, Eigen::Dynamic> normal_flux(const Tensor4<Scalar>& C, const Eigen::MatrixBase<DerivedN>& n,
                                                  const Eigen::MatrixBase<DerivedS>& sigma) {
  return apply(C, sigma).transpose() * n;
}

// c_n = n . C . n, the symmetric m x m normal tensor.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> normal_tensor(const Tensor4<Scalar>& C,
                                                                    const Eigen::MatrixBase<Derived>& n) {
  const int d = C.d(), m = C.m();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cn =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, m);
  for (int iM = 0; iM < m; ++iM)
    for (int jM = 0; jM < m; ++jM)
      for (int iD = 0; iD < d; ++iD)
        for (int jD = 0; jD < d; ++jD) cn(iM, jM) += n[iD] * C(iD, iM, jM, jD) * n[jD];
  return cn;
}

// Moore-Penrose pseudoinverse of a symmetric PSD matrix. Eigenvalues in
// [-tol_rank*lmax, tol_rank*lmax] are treated as zero; anything more negative
// is rejected.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> sym_pinv(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A, Scalar tol_rank) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Mat> es(A);
  if (es.info() != Eigen::Success) throw NumericalError("sym_pinv: eigensolve failed");
  const auto& lam = es.eigenvalues();
  Scalar lmax = lam.cwiseAbs().maxCoeff();
  if (lmax == Scalar(0)) return Mat::Zero(A.rows(), A.cols());
  Eigen::Vector<Scalar, Eigen::Dynamic> inv(lam.size());
  for (Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < -tol_rank * lmax) throw NumericalError("sym_pinv: matrix is not positive semidefinite");
    inv[i] = lam[i] > tol_rank * lmax ? Scalar(1) / lam[i] : Scalar(0);
  }
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// Pseudoinverse of the normal tensor n . C . n.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> cn_pinv(const Tensor4<Scalar>& C,
                                                              const Eigen::MatrixBase<Derived>& n,
                                                              Scalar tol_rank) {
  return sym_pinv<Scalar>(normal_tensor(C, n), tol_rank);
}

// Symmetric PSD square root of C: eigendecompose the flattened matrix, clamp
// eigenvalues in [-tol*lmax, 0) to zero, reject anything more negative.
template <typename Scalar>
Tensor4<Scalar> tensor_sqrt(const Tensor4<Scalar>& C, Scalar tol_rank) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Mat> es(C.flat());
  if (es.info() != Eigen::Success) throw NumericalError("tensor_sqrt: eigensolve failed");
  const auto& lam = es.eigenvalues();
  Scalar lmax = lam.cwiseAbs().maxCoeff();
  Eigen::Vector<Scalar, Eigen::Dynamic> root(lam.size());
  for (Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < -tol_rank * lmax) throw NumericalError("tensor_sqrt: tensor is not positive semidefinite");
    root[i] = lam[i] > Scalar(0) ? std::sqrt(lam[i]) : Scalar(0);
  }
  Mat flat = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  return Tensor4<Scalar>(C.d(), C.m(), std::move(flat));
}

// ---- model constructors ----

// Acoustics: m = 1, C_{i,1,1,j} = delta_ij * c^2.
template <typename Scalar>
Tensor4<Scalar> make_acoustic_tensor(int d, Scalar c) {
  if (d < 1 || d > 3) throw InvalidInputError("make_acoustic_tensor: d must be 1, 2 or 3");
  if (!(c > Scalar(0))) throw InvalidInputError("make_acoustic_tensor: wave speed must be positive");
  Tensor4<Scalar> C(d, 1);
  for (int i = 0; i < d; ++i) C(i, 0, 0, i) = c * c;
  return C;
}

// Maxwell: d = m = 3, C_{iD,iM,jM,jD} = mu^{-1} (delta_{iD,jD} delta_{iM,jM}
// - delta_{iD,jM} delta_{iM,jD}).
template <typename Scalar>
Tensor4<Scalar> make_maxwell_tensor(Scalar mu) {
  if (!(mu > Scalar(0))) throw InvalidInputError("make_maxwell_tensor: mu must be positive");
  Tensor4<Scalar> C(3, 3);
  const Scalar inv_mu = Scalar(1) / mu;
  for (int iD = 0; iD < 3; ++iD)
    for (int iM = 0; iM < 3; ++iM)
      for (int jM = 0; jM < 3; ++jM)
        for (int jD = 0; jD < 3; ++jD)
          C(iD, iM, jM, jD) = inv_mu * (Scalar(iD == jD && iM == jM) - Scalar(iD == jM && iM == jD));
  return C;
}

// Isotropic elasticity: m = d, C = lambda delta_{iD,iM} delta_{jD,jM}
// + mu (delta_{iD,jD} delta_{iM,jM} + delta_{iD,jM} delta_{iM,jD}).
template <typename Scalar>
Tensor4<Scalar> make_elastic_iso_tensor(int d, Scalar lambda, Scalar mu) {
  if (d < 1 || d > 3) throw InvalidInputError("make_elastic_iso_tensor: d must be 1, 2 or 3");
  if (lambda < Scalar(0) || mu < Scalar(0) || lambda + mu <= Scalar(0))
    throw InvalidInputError("make_elastic_iso_tensor: need lambda, mu >= 0 and not both zero");
  Tensor4<Scalar> C(d, d);
  for (int iD = 0; iD < d; ++iD)
    for (int iM = 0; iM < d; ++iM)
      for (int jM = 0; jM < d; ++jM)
        for (int jD = 0; jD < d; ++jD)
          C(iD, iM, jM, jD) = lambda * Scalar(iD == iM) * Scalar(jD == jM) +
                              mu * (Scalar(iD == jD) * Scalar(iM == jM) + Scalar(iD == jM) * Scalar(iM == jD));
  return C;
}

}  // namespace sipdg
