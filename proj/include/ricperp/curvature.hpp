#pragma once

#include <utility>

#include "ricperp/tensor.hpp"

namespace ricperp {

/// Frame data for a positive definite metric g: `to_unit` maps coordinate
/// components x to g-orthonormal components x' (|x|_g = |x'|), and
/// `from_unit` is its inverse, whose columns form a g-unitary frame.
struct OrthonormalFrame {
  CMatrix to_unit;
  CMatrix from_unit;
};

/// Throws SingularMetric if g is not positive definite.
OrthonormalFrame orthonormal_frame(const HermitianForm& g);

/// R expressed in a g-orthonormal frame (identity metric afterwards).
KahlerTensor to_orthonormal(const KahlerTensor& R, const HermitianForm& g);

double norm_squared(const HermitianForm& g, const CVector& x);

/// Ric_{i j̄} = Σ_{k,l} g^{l k̄} R_{i j̄ k l̄}.
HermitianForm ricci(const KahlerTensor& R, const HermitianForm& g);

/// R(X, X̄, X, X̄) / |X|⁴. Throws ZeroVector.
double holo_sect(const KahlerTensor& R, const HermitianForm& g, const CVector& x);

/// Ric(X, X̄)/|X|² − R(X, X̄, X, X̄)/|X|⁴. Degree zero in X. Throws ZeroVector.
double ric_perp(const KahlerTensor& R, const HermitianForm& g, const CVector& x);

/// Σ_{m,p} R(e_m, ē_m, e_p, ē_p)(a_m − a_p)² in the frame of `fw`; R must be
/// given in orthonormal coordinates. Throws NonUnitaryFrame.
double qb_form(const KahlerTensor& R, const FrameAndWeights& fw);

/// Matrix of Itoh's operator Q on S²T in the orthonormal basis
/// {e_i·e_i} ∪ {√2 e_i·e_j : i < j}, ordered (0,0),(0,1),…,(0,n−1),(1,1),…
CMatrix q_operator(const KahlerTensor& R, const HermitianForm& g);

struct NuResult {
  double value;
  CVector eigenvector;  // in the S²T basis above
};

NuResult nu_max_with_vector(const KahlerTensor& R, const HermitianForm& g);
double nu_max(const KahlerTensor& R, const HermitianForm& g);

/// Algebraic curvature tensor built from a Ricci-type form:
/// ¼(A_{ij̄}g_{kl̄} + A_{kl̄}g_{ij̄} + A_{il̄}g_{kj̄} + A_{kj̄}g_{il̄}).
/// Its holomorphic sectional curvature at X is A(X, X̄)/|X|², so
/// holo_sect(R_Ric − R) equals ric_perp(R).
KahlerTensor ric_operator_tensor(const HermitianForm& ric, const HermitianForm& g);

/// Block direct sum (R1 ⊕ R2, g1 ⊕ g2).
std::pair<KahlerTensor, HermitianForm> product_tensor(const KahlerTensor& r1,
                                                      const HermitianForm& g1,
                                                      const KahlerTensor& r2,
                                                      const HermitianForm& g2);

double scalar_curvature(const KahlerTensor& R, const HermitianForm& g);
KahlerTensor scale_tensor(const KahlerTensor& R, double c);

/// Entrywise a·A + b·B.
KahlerTensor combine(double a, const KahlerTensor& A, double b, const KahlerTensor& B);

double max_abs(const KahlerTensor& R);

}  // namespace ricperp
