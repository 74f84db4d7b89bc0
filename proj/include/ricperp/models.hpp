#pragma once

#include <vector>

#include "ricperp/tensor.hpp"

namespace ricperp {

// Model curvature tensors at a point, normalized so that Fubini–Study has
// holomorphic sectional curvature 2 and Ric = (n+1)·g. All metrics are the
// identity in the returned coordinates.

CurvaturePoint fubini_study(int n);

/// Compact dual of the type I domain of p×q matrices (Grassmannian
/// Gr(p, p+q)); coordinates flattened as (i, α) ↦ i·q + α.
CurvaturePoint type_I_dual(int p, int q);

/// Compact dual of the type III domain (Sp(r)/U(r)), the restriction of
/// type_I_dual(r, r) to symmetric matrices in the orthonormal basis
/// E_ii, (E_ij + E_ji)/√2 (i < j), ordered row by row.
CurvaturePoint type_III_dual(int r);

/// Product of two complex curves with constant curvatures k1, k2.
CurvaturePoint curve_product(double k1, double k2);

/// Curvature R^h_{α β̄ i j̄} of a Hermitian bundle of rank r over an
/// n-dimensional base, at a point.
class BundleCurvature {
 public:
  BundleCurvature(int rank, int base_dim);

  /// Throws SymmetryViolation when Rh_{αβ̄ij̄} ≠ conj(Rh_{βᾱjī}) beyond tol.
  void check(double tol = kValidationTol) const;

  int rank() const { return r_; }
  int base_dim() const { return n_; }
  Complex& operator()(int a, int b, int i, int j) { return data_[index(a, b, i, j)]; }
  Complex operator()(int a, int b, int i, int j) const { return data_[index(a, b, i, j)]; }

  /// R^h(v, v̄, ·, ·) as a Hermitian form on the base.
  HermitianForm fiber_slice(const CVector& v) const;
  /// R^h(·, ·, X, X̄) as a Hermitian form on the fiber (rank r).
  HermitianForm base_slice(const CVector& x) const;
  /// Curvature of det E: Σ_α R^h_{α ᾱ · ·}.
  HermitianForm determinant() const;

  /// Unitary change of bundle frame (columns of `u` are the new e_α) and
  /// of base frame (columns of `w`).
  BundleCurvature change_frame(const CMatrix& u, const CMatrix& w) const;

 private:
  std::size_t index(int a, int b, int i, int j) const {
    return ((static_cast<std::size_t>(a) * r_ + b) * n_ + i) * n_ + j;
  }
  int r_;
  int n_;
  std::vector<Complex> data_;
};

struct SplitBundleModel {
  int base_dim;              // P^n
  std::vector<int> degrees;  // a_1 ≥ … ≥ a_r

  /// Throws InvalidArgument unless r ≥ 1, n ≥ 1 and degrees are non-increasing.
  void check() const;
  int rank() const { return static_cast<int>(degrees.size()); }
};

/// Rh = a_α δ_αβ δ_ij (O(1) carries the Fubini–Study form).
BundleCurvature split_bundle_curvature(const SplitBundleModel& model);

/// Tangent bundle of P^n with the Fubini–Study metric.
BundleCurvature pn_tangent_bundle_curvature(int n);
BundleCurvature pn_cotangent_bundle_curvature(int n);

}  // namespace ricperp
