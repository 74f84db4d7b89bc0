#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ricperp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kValidationTol = 1e-9;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

/// Hermitian n×n form; entry (i, j) is the coefficient of dz_i ∧ dz̄_j,
/// i.e. g_{i j̄}. Houses metrics, Ricci forms and line-bundle curvatures.
class HermitianForm {
 public:
  HermitianForm() = default;

  /// Throws NonFinite or InvalidArgument (not Hermitian within tol).
  static HermitianForm from_matrix(CMatrix m, double tol = kHermitianTol);
  static HermitianForm identity(int n);
  static HermitianForm zero(int n);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  /// Σ F_{ij} x_i conj(x_j); real for Hermitian F.
  double quadratic(const CVector& x) const;

  bool is_identity(double tol = 0.0) const;

 private:
  explicit HermitianForm(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Raw n⁴ array with R[i][j][k][l] = R_{i j̄ k l̄}. No symmetry guarantees;
/// use `KahlerTensor::validated` or a model constructor to obtain one.
class TensorBuffer {
 public:
  explicit TensorBuffer(int n);

  int dim() const { return n_; }
  Complex& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  Complex operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }
  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

 private:
  std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_;
  std::vector<Complex> data_;
};

struct SymmetryResidual {
  double value = 0.0;
  std::array<int, 4> where{0, 0, 0, 0};
};

/// Largest absolute violation of conjugate symmetry and the two Kähler swaps.
SymmetryResidual symmetry_residual(const TensorBuffer& raw);

/// Immutable algebraic Kähler curvature tensor at a point.
class KahlerTensor {
 public:
  /// Accepts the buffer iff every symmetry residual is ≤ tol.
  /// Throws NonFinite or SymmetryViolation.
  static KahlerTensor validated(TensorBuffer raw, double tol = kValidationTol);
  static KahlerTensor validated(int n, std::span<const Complex> raw,
                                double tol = kValidationTol);
  static KahlerTensor zero(int n);

  int dim() const { return buf_.dim(); }
  Complex operator()(int i, int j, int k, int l) const { return buf_(i, j, k, l); }
  std::span<const Complex> data() const { return buf_.data(); }
  const TensorBuffer& buffer() const { return buf_; }

  /// R(x, ȳ, z, w̄) = Σ R_{i j̄ k l̄} x_i conj(y_j) z_k conj(w_l).
  Complex eval(const CVector& x, const CVector& y, const CVector& z,
               const CVector& w) const;
  /// R(x, x̄, x, x̄), real by symmetry.
  double quartic(const CVector& x) const;
  /// v_j = Σ R_{i j̄ k l̄} x_i x_k conj(x_l); the Wirtinger gradient of the
  /// quartic with respect to conj(x_j) is 2·v_j.
  CVector quartic_partial(const CVector& x) const;

  /// Components in a new frame: R'_{abcd} = Σ R_{ijkl} P_ia P̄_jb P_kc P̄_ld.
  KahlerTensor change_frame(const CMatrix& p) const;

 private:
  explicit KahlerTensor(TensorBuffer b) : buf_(std::move(b)) {}
  TensorBuffer buf_;

  friend KahlerTensor trusted_tensor(TensorBuffer b);
};

/// Wraps a buffer that is symmetric by construction (model constructors,
/// frame changes, linear combinations). Not validated.
KahlerTensor trusted_tensor(TensorBuffer b);

/// Unitary frame change plus real weights for the quadratic bisectional form.
struct FrameAndWeights {
  CMatrix frame;  // columns e_1..e_n
  RVector weights;

  /// Throws NonUnitaryFrame or DimensionMismatch.
  void check(double tol = kUnitaryTol) const;
};

/// Pointwise curvature data: a tensor together with the metric it lives on.
struct CurvaturePoint {
  KahlerTensor R;
  HermitianForm g;
};

}  // namespace ricperp
