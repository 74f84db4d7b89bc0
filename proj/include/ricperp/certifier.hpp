#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ricperp/curvature.hpp"

namespace ricperp {

inline constexpr double kVerdictTol = 1e-6;
inline constexpr double kGridAgreementTol = 1e-4;

struct CertifyOptions {
  int restarts = 64;
  int max_iters = 500;
  double step_tol = 1e-10;
  std::uint64_t seed = 0;
  bool grid_oracle = false;  // dense-grid cross-check, n ≤ 3 only
  int threads = 0;           // 0: RICPERP_THREADS, else hardware concurrency

  /// Throws InvalidArgument.
  void check() const;
};

enum class Quantity { RicPerpMin, HMax, QbMin, Nu };
enum class Verdict { Positive, NonnegativeBoundary, Fails };

std::string_view to_string(Quantity q);
std::string_view to_string(Verdict v);

/// positive if value > tol, nonnegative_boundary if |value| ≤ tol, else fails.
Verdict verdict_for(double value, double tol = kVerdictTol);

struct MethodInfo {
  std::string algorithm;
  std::uint64_t seed = 0;
  int restarts = 0;
  int converged_restarts = 0;
  bool converged = false;  // the restart that produced the witness
  bool heuristic = false;
  std::optional<double> grid_value;
  std::optional<bool> grid_agrees;
  std::optional<double> nu_bound;  // reported with H_max
};

using Witness = std::variant<CVector, FrameAndWeights>;

struct PositivityReport {
  Quantity quantity;
  double value = 0.0;
  Witness witness;
  Verdict verdict = Verdict::Fails;
  double margin = 0.0;  // signed distance of value from zero
  MethodInfo method;
};

/// Minimize q(x) + quartic_coeff·R(x, x̄, x, x̄) over unit x, where
/// q(x) = Σ quad_{ij} x_i conj(x_j). All data in orthonormal coordinates.
struct SphereProblem {
  const KahlerTensor* R = nullptr;
  CMatrix quad;
  double quartic_coeff = 0.0;

  int dim() const { return static_cast<int>(quad.rows()); }
  double value(const CVector& x) const;
  /// Real gradient in C^n ≅ R^{2n}: 2·∂f/∂x̄.
  CVector gradient(const CVector& x) const;
};

struct SphereResult {
  CVector x;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Projected gradient descent with Armijo backtracking on the unit sphere.
SphereResult descend_on_sphere(const SphereProblem& p, CVector start, int max_iters, double step_tol);

struct RestartSummary {
  SphereResult best;
  int best_index = 0;
  int converged = 0;
};

/// Independent seeded restarts; the smallest value wins, ties go to the
/// lowest restart index. Bitwise reproducible for any thread count.
RestartSummary minimize_with_restarts(const SphereProblem& p, const CertifyOptions& opts);

/// Derivative-free cross-check: dense grid over the phase-reduced sphere
/// parameters followed by grid zooming. Supports n ≤ 3.
double grid_minimum(const SphereProblem& p);

/// Run `count` independent tasks over the configured worker count.
void parallel_for(int count, int threads, const std::function<void(int)>& task);
int resolve_threads(int requested);

/// Deterministic per-task seed derived from a base seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

PositivityReport min_ric_perp(const KahlerTensor& R, const HermitianForm& g, const CertifyOptions& opts);
PositivityReport max_holo_sect(const KahlerTensor& R, const HermitianForm& g, const CertifyOptions& opts);
/// R in orthonormal coordinates; heuristic alternating minimization over
/// unitary frames (Cayley steps) and weights with Σa = 0, |a| = 1.
PositivityReport min_qb(const KahlerTensor& R, const CertifyOptions& opts);
PositivityReport nu_report(const KahlerTensor& R, const HermitianForm& g);

enum class FlatVerdict { Flat, N2ConformallySplit, NotRicPerpFlat, Inconsistent };
std::string_view to_string(FlatVerdict v);

struct FlatReport {
  FlatVerdict verdict;
  double max_abs_ric_perp = 0.0;  // over sampled unit directions
  double scalar_curvature = 0.0;
  double identity_residual = 0.0;  // max |R − R_Ric|
  double max_abs_curvature = 0.0;
  int samples = 0;
  double tol = 0.0;
};

/// Classifies tensors with vanishing orthogonal Ricci curvature. Requires n ≥ 2.
FlatReport flat_ric_perp_classify(const KahlerTensor& R, const HermitianForm& g, double tol,
                                  std::uint64_t seed = 0);

struct EinsteinResult {
  bool einstein = false;
  double mu = 0.0;  // mean diagonal of Ric in an orthonormal frame
  double residual = 0.0;
};

EinsteinResult einstein_check(const KahlerTensor& R, const HermitianForm& g, double tol);

}  // namespace ricperp
