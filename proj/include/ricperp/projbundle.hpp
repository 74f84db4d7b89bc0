#pragma once

#include <optional>
#include <vector>

#include "ricperp/certifier.hpp"
#include "ricperp/models.hpp"

namespace ricperp::projbundle {

/// Local data of the metric G = λ·g + h on P(E*) at the point (0, [v]).
/// Coordinates are adapted: the fiber point is e_1 of the bundle frame and
/// the slice Rh(e_1, ē_1, ·, ·) is diagonal with entries ξ_i.
/// Horizontal indices 0..n−1, vertical index α ∈ 1..r−1 maps to n+α−1.
struct ProjBundleInput {
  int n = 0;
  int r = 0;
  double lambda = 0.0;
  KahlerTensor base;  // Rg in g-orthonormal coordinates
  BundleCurvature bundle;
  std::vector<Complex> d3;        // h_{uū, i j̄ k}, index (i, j, k), symmetric in i, k
  std::vector<Complex> d3_mixed;  // h_{uβ̄, i j̄ k}, index (β−1, i, j, k), symmetric in i, k
  KahlerTensor d4;                // h_{uū, i j̄ k l̄}

  ProjBundleInput(double lambda, KahlerTensor base, BundleCurvature bundle);

  int total_dim() const { return n + r - 1; }
  double xi(int i) const { return bundle(0, 0, i, i).real(); }
  Complex d3_at(int i, int j, int k) const { return d3[(static_cast<std::size_t>(i) * n + j) * n + k]; }
  Complex d3_mixed_at(int beta, int i, int j, int k) const {
    return d3_mixed[((static_cast<std::size_t>(beta - 1) * n + i) * n + j) * n + k];
  }

  /// Throws DimensionMismatch, InvalidArgument (not adapted, asymmetric
  /// derivative arrays), SymmetryViolation or LambdaTooSmall (λ ≤ max ξ).
  void check() const;
};

/// Rotates the bundle frame so that `fiber_point` becomes e_1 and the base
/// frame so that the slice at the fiber point is diagonal. Derivative arrays
/// are zero. Throws ZeroVector, DimensionMismatch or LambdaTooSmall.
ProjBundleInput adapt(const KahlerTensor& base, const BundleCurvature& bundle, double lambda,
                      const CVector& fiber_point);

/// Diagonal of G at the point: λ − ξ_i horizontally, 1 vertically.
RVector g_metric_diagonal(const ProjBundleInput& in);

/// R^G_{a b̄ c d̄} in the adapted coordinate frame.
KahlerTensor g_curvature_coordinates(const ProjBundleInput& in);

/// R^G in a G-orthonormal frame (identity metric).
CurvaturePoint g_curvature_at_origin(const ProjBundleInput& in);

/// Ricci blocks of G from the closed-form block expressions.
/// yy(i, k): coefficient of y_i ȳ_k; ys(i, β−1): of y_i σ̄_β; ss(α−1, β−1): of σ_α σ̄_β.
struct RicciSplit {
  CMatrix yy;
  CMatrix ys;
  CMatrix ss;
};

RicciSplit ricci_split(const ProjBundleInput& in);

/// Ricci blocks read off a direct contraction of the full curvature tensor.
RicciSplit ricci_split_direct(const ProjBundleInput& in);

/// Decomposition of Φ(X) = ‖X‖²·Ric(X, X̄) − R(X, X̄, X, X̄) for X = (y, σ).
struct PhiBreakdown {
  double phi0 = 0.0;
  Complex phi1;
  double phi2 = 0.0;
  Complex phi3;
  double phi4 = 0.0;
  double total = 0.0;   // Φ0 + 2ReΦ1 + Φ2 + 2ReΦ3 + Φ4
  double direct = 0.0;  // from the assembled tensor
  double norm_squared = 0.0;
  double ric_perp() const { return total / (norm_squared * norm_squared); }
};

PhiBreakdown phi(const ProjBundleInput& in, const CVector& y, const CVector& sigma);

struct MarginReport {
  double value = 0.0;
  CVector fiber;      // unit v in C^r
  CVector direction;  // unit X in C^n
  bool converged = false;
  int restarts = 0;
};

/// Sampled minimum over unit (v, X) of
///   Ric^⊥_g(X) + Rdet(X, X̄) − r·Rh(v, v̄, X, X̄)
/// by alternating an exact fiber step with projected gradient in X.
/// The base is given in orthonormal coordinates.
MarginReport condition_margin(const KahlerTensor& base, const BundleCurvature& bundle,
                              const CertifyOptions& opts);

/// Exact value for split bundles over Fubini–Study P^n: n − 1 + Σa − r·a_1.
double split_condition_margin(const SplitBundleModel& model);

struct LambdaPoint {
  double lambda = 0.0;
  double min_ric_perp = 0.0;
  int fiber_index = 0;  // fiber point attaining the minimum
  CVector witness;      // G-orthonormal coordinates at that fiber point
  std::optional<double> vertical_margin;
  Verdict verdict = Verdict::Fails;
  bool converged = false;
};

struct LambdaSearchReport {
  std::vector<LambdaPoint> points;  // ascending λ
  std::optional<double> first_positive;
  bool stays_positive = true;  // no failure after the first positive λ
};

/// Certifies min Ric^⊥ of G over each λ in `grid` and each fiber point.
/// Throws EmptyGrid or LambdaTooSmall.
LambdaSearchReport lambda_search(const KahlerTensor& base, const BundleCurvature& bundle,
                                 const std::vector<CVector>& fiber_points,
                                 std::vector<double> grid, const CertifyOptions& opts);

/// Split bundle over Fubini–Study P^n, fiber points e_1..e_r.
LambdaSearchReport lambda_search(const SplitBundleModel& model, std::vector<double> grid,
                                 const CertifyOptions& opts);

/// Degree of the normal bundle of the i-th section curve inside its ruled
/// surface: r·a_i − Σa. i is 1-based. Throws IndexOutOfRange or
/// DimensionMismatch (degrees.size() ≠ r).
int section_normal_c1(int r, const std::vector<int>& degrees, int i);
/// The same curve inside the full projective bundle: one more.
int section_normal_c1_total(int r, const std::vector<int>& degrees, int i);

/// −K·C ≥ 3 − 2·genus. Throws InvalidArgument for negative genus.
bool rational_curve_bound(int minus_k_dot_c, int genus);

}  // namespace ricperp::projbundle
