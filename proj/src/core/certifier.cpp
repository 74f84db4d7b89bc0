#include "ricperp/certifier.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "ricperp/error.hpp"

namespace ricperp {

void CertifyOptions::check() const {
  if (restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be at least 1");
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be at least 1");
  if (!(step_tol > 0.0) || !std::isfinite(step_tol)) {
    throw Error(ErrorCode::InvalidArgument, "step_tol must be positive");
  }
  if (threads < 0) throw Error(ErrorCode::InvalidArgument, "threads must be nonnegative");
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::RicPerpMin: return "ric_perp_min";
    case Quantity::HMax: return "h_max";
    case Quantity::QbMin: return "qb_min";
    case Quantity::Nu: return "nu";
  }
  return "?";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Positive: return "positive";
    case Verdict::NonnegativeBoundary: return "nonnegative_boundary";
    case Verdict::Fails: return "fails";
  }
  return "?";
}

std::string_view to_string(FlatVerdict v) {
  switch (v) {
    case FlatVerdict::Flat: return "flat";
    case FlatVerdict::N2ConformallySplit: return "n2_conformally_split";
    case FlatVerdict::NotRicPerpFlat: return "not_ric_perp_flat";
    case FlatVerdict::Inconsistent: return "inconsistent";
  }
  return "?";
}

Verdict verdict_for(double value, double tol) {
  if (value > tol) return Verdict::Positive;
  if (value >= -tol) return Verdict::NonnegativeBoundary;
  return Verdict::Fails;
}

double SphereProblem::value(const CVector& x) const {
  double q = 0.0;
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) q += (quad(i, j) * x(i) * std::conj(x(j))).real();
  if (quartic_coeff != 0.0) q += quartic_coeff * R->quartic(x);
  return q;
}

CVector SphereProblem::gradient(const CVector& x) const {
  CVector g = 2.0 * (quad.transpose() * x);
  if (quartic_coeff != 0.0) g += (4.0 * quartic_coeff) * R->quartic_partial(x);
  return g;
}

namespace {

CVector tangent_part(const CVector& x, const CVector& g) {
  const double radial = (x.adjoint() * g)(0, 0).real();
  return g - radial * x;
}

CVector random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector x(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    x(i) = Complex(re, im);
  }
  const double nrm = x.norm();
  if (!(nrm > 0.0)) {
    x.setZero();
    x(0) = 1.0;
    return x;
  }
  return x / nrm;
}

double problem_scale(const SphereProblem& p) {
  double s = p.quad.cwiseAbs().maxCoeff();
  if (p.quartic_coeff != 0.0) {
    s += 4.0 * std::abs(p.quartic_coeff) * max_abs(*p.R) * p.dim() * p.dim();
  }
  return std::max(s, 1e-3);
}

}  // namespace

SphereResult descend_on_sphere(const SphereProblem& p, CVector start, int max_iters, double step_tol) {
  SphereResult res;
  CVector x = start / start.norm();
  double fx = p.value(x);
  double t = 1.0 / problem_scale(p);
  const double grad_tol = 1e-9;
  int it = 0;
  double gnorm = 0.0;
  for (; it < max_iters; ++it) {
    const CVector rg = tangent_part(x, p.gradient(x));
    gnorm = rg.norm();
    if (gnorm < grad_tol) break;
    bool accepted = false;
    t *= 2.0;
    CVector xn;
    double fn = 0.0;
    while (t * gnorm > 1e-16) {
      xn = x - t * rg;
      xn /= xn.norm();
      fn = p.value(xn);
      if (fn <= fx - 1e-4 * t * gnorm * gnorm) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    const double step = (xn - x).norm();
    x = xn;
    fx = fn;
    if (step < step_tol) {
      ++it;
      gnorm = tangent_part(x, p.gradient(x)).norm();
      break;
    }
  }
  res.x = x;
  res.value = fx;
  res.iterations = it;
  res.converged = gnorm < 1e-6;
  return res;
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RICPERP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int count, int threads, const std::function<void(int)>& task) {
  const int workers = std::min(resolve_threads(threads), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < count; i = next++) task(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

RestartSummary minimize_with_restarts(const SphereProblem& p, const CertifyOptions& opts) {
  opts.check();
  const int n = p.dim();
  std::vector<SphereResult> runs(opts.restarts);
  parallel_for(opts.restarts, opts.threads, [&](int i) {
    std::mt19937_64 rng(split_seed(opts.seed, static_cast<std::uint64_t>(i)));
    CVector start = random_unit(rng, n);
    runs[i] = descend_on_sphere(p, std::move(start), opts.max_iters, opts.step_tol);
  });
  RestartSummary out;
  out.best_index = 0;
  for (int i = 0; i < opts.restarts; ++i) {
    if (runs[i].converged) ++out.converged;
    if (runs[i].value < runs[out.best_index].value) out.best_index = i;
  }
  out.best = runs[out.best_index];
  return out;
}

namespace {

// Unit vector from angles: first entry real and nonnegative.
CVector point_from_angles(int n, const double* a) {
  CVector x(n);
  if (n == 1) {
    x(0) = 1.0;
  } else if (n == 2) {
    x(0) = std::cos(a[0]);
    x(1) = std::sin(a[0]) * std::polar(1.0, a[1]);
  } else {
    const double s1 = std::sin(a[0]);
    x(0) = std::cos(a[0]);
    x(1) = s1 * std::cos(a[1]) * std::polar(1.0, a[2]);
    x(2) = s1 * std::sin(a[1]) * std::polar(1.0, a[3]);
  }
  return x;
}

struct GridPoint {
  double value;
  std::array<double, 4> angles;
};

// Evaluates a box grid centred at `c` with `per_dim` points of spacing `h`
// along each of `dims` parameters, keeping the `keep` lowest points.
std::vector<GridPoint> scan_box(const SphereProblem& p, int dims, const std::array<double, 4>& lo,
                                const std::array<double, 4>& h, const std::array<int, 4>& counts,
                                std::size_t keep) {
  std::vector<GridPoint> best;
  std::array<int, 4> idx{0, 0, 0, 0};
  const int n = p.dim();
  for (;;) {
    std::array<double, 4> a{};
    for (int d = 0; d < dims; ++d) a[d] = lo[d] + h[d] * idx[d];
    const double v = p.value(point_from_angles(n, a.data()));
    if (best.size() < keep || v < best.back().value) {
      GridPoint gp{v, a};
      auto pos = std::upper_bound(best.begin(), best.end(), gp,
                                  [](const GridPoint& l, const GridPoint& r) { return l.value < r.value; });
      best.insert(pos, gp);
      if (best.size() > keep) best.pop_back();
    }
    int d = 0;
    for (; d < dims; ++d) {
      if (++idx[d] < counts[d]) break;
      idx[d] = 0;
    }
    if (d == dims) break;
  }
  return best;
}

}  // namespace

double grid_minimum(const SphereProblem& p) {
  const int n = p.dim();
  if (n < 1 || n > 3) throw Error(ErrorCode::InvalidArgument, "grid oracle supports n <= 3");
  if (n == 1) {
    CVector x(1);
    x(0) = 1.0;
    return p.value(x);
  }
  const int dims = n == 2 ? 2 : 4;
  const double coarse = n == 2 ? 0.02 : 0.1;
  const double half_pi = std::numbers::pi / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  std::array<double, 4> lo{0, 0, 0, 0};
  std::array<double, 4> h{};
  std::array<int, 4> counts{1, 1, 1, 1};
  for (int d = 0; d < dims; ++d) {
    const bool polar = (n == 2) ? d == 0 : d < 2;
    const double span = polar ? half_pi : two_pi;
    counts[d] = static_cast<int>(std::ceil(span / coarse)) + (polar ? 1 : 0);
    h[d] = polar ? span / (counts[d] - 1) : span / counts[d];
  }
  std::vector<GridPoint> seeds = scan_box(p, dims, lo, h, counts, 8);
  double best = seeds.front().value;
  for (const GridPoint& s : seeds) {
    GridPoint cur = s;
    std::array<double, 4> step = h;
    const int per_dim = 11;
    while (*std::max_element(step.begin(), step.begin() + dims) > 1e-9) {
      std::array<double, 4> zlo{};
      std::array<double, 4> zh{};
      std::array<int, 4> zc{1, 1, 1, 1};
      for (int d = 0; d < dims; ++d) {
        zh[d] = step[d] * 2.0 / (per_dim - 1);
        zlo[d] = cur.angles[d] - step[d];
        zc[d] = per_dim;
      }
      const GridPoint next = scan_box(p, dims, zlo, zh, zc, 1).front();
      if (next.value <= cur.value) cur = next;
      for (int d = 0; d < dims; ++d) step[d] = zh[d];
    }
    best = std::min(best, cur.value);
  }
  return best;
}

namespace {

void attach_grid(MethodInfo& m, const SphereProblem& p, double optimizer_min, const CertifyOptions& opts) {
  if (!opts.grid_oracle || p.dim() > 3) return;
  const double gv = grid_minimum(p);
  m.grid_value = gv;
  m.grid_agrees = std::abs(gv - optimizer_min) <= kGridAgreementTol;
}

void require_same_dim(const KahlerTensor& R, const HermitianForm& g) {
  if (R.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "tensor and metric dimensions differ");
}

}  // namespace

PositivityReport min_ric_perp(const KahlerTensor& R, const HermitianForm& g, const CertifyOptions& opts) {
  opts.check();
  require_same_dim(R, g);
  const OrthonormalFrame frame = orthonormal_frame(g);
  const KahlerTensor r_on = g.is_identity() ? R : R.change_frame(frame.from_unit);
  const int n = R.dim();
  SphereProblem p{&r_on, ricci(r_on, HermitianForm::identity(n)).matrix(), -1.0};
  const RestartSummary s = minimize_with_restarts(p, opts);

  CVector w = g.is_identity() ? s.best.x : CVector(frame.from_unit * s.best.x);
  w /= std::sqrt(norm_squared(g, w));

  PositivityReport rep{Quantity::RicPerpMin, 0.0, w, Verdict::Fails, 0.0, {}};
  rep.value = ric_perp(R, g, w);
  rep.verdict = verdict_for(rep.value);
  rep.margin = rep.value;
  rep.method.algorithm = "riemannian_gradient_armijo";
  rep.method.seed = opts.seed;
  rep.method.restarts = opts.restarts;
  rep.method.converged_restarts = s.converged;
  rep.method.converged = s.best.converged;
  attach_grid(rep.method, p, s.best.value, opts);
  return rep;
}

PositivityReport max_holo_sect(const KahlerTensor& R, const HermitianForm& g, const CertifyOptions& opts) {
  opts.check();
  require_same_dim(R, g);
  const OrthonormalFrame frame = orthonormal_frame(g);
  const KahlerTensor r_on = g.is_identity() ? R : R.change_frame(frame.from_unit);
  const int n = R.dim();
  SphereProblem p{&r_on, CMatrix::Zero(n, n), -1.0};
  const RestartSummary s = minimize_with_restarts(p, opts);

  CVector w = g.is_identity() ? s.best.x : CVector(frame.from_unit * s.best.x);
  w /= std::sqrt(norm_squared(g, w));

  PositivityReport rep{Quantity::HMax, 0.0, w, Verdict::Fails, 0.0, {}};
  rep.value = holo_sect(R, g, w);
  rep.verdict = verdict_for(rep.value);
  rep.margin = rep.value;
  rep.method.algorithm = "riemannian_gradient_armijo";
  rep.method.seed = opts.seed;
  rep.method.restarts = opts.restarts;
  rep.method.converged_restarts = s.converged;
  rep.method.converged = s.best.converged;
  rep.method.nu_bound = nu_max(R, g);
  if (opts.grid_oracle && n <= 3) {
    const double gv = -grid_minimum(p);
    rep.method.grid_value = gv;
    rep.method.grid_agrees = std::abs(gv - rep.value) <= kGridAgreementTol;
  }
  return rep;
}

namespace {

// B_{mp} = R(u_m, ū_m, u_p, ū_p) for the columns of u.
Eigen::MatrixXd bisectional_matrix(const KahlerTensor& R, const CMatrix& u) {
  const int n = R.dim();
  Eigen::MatrixXd b(n, n);
  for (int m = 0; m < n; ++m)
    for (int p = m; p < n; ++p) {
      const double v = R.eval(u.col(m), u.col(m), u.col(p), u.col(p)).real();
      b(m, p) = v;
      b(p, m) = v;
    }
  return b;
}

// Orthonormal basis of the sum-zero hyperplane in R^n.
Eigen::MatrixXd sum_zero_basis(int n) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n - 1);
  for (int k = 1; k < n; ++k) {
    const double c = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) w(i, k - 1) = c;
    w(k, k - 1) = -k * c;
  }
  return w;
}

struct WeightStep {
  RVector a;
  double value;
};

WeightStep best_weights(const Eigen::MatrixXd& b, const Eigen::MatrixXd& basis) {
  const int n = static_cast<int>(b.rows());
  Eigen::MatrixXd lap = -b;
  for (int m = 0; m < n; ++m) lap(m, m) = b.row(m).sum() - b(m, m);
  const Eigen::MatrixXd reduced = basis.transpose() * lap * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (reduced + reduced.transpose()));
  return {basis * es.eigenvectors().col(0), 2.0 * es.eigenvalues()(0)};
}

double qb_value(const KahlerTensor& R, const CMatrix& u, const RVector& a) {
  const Eigen::MatrixXd b = bisectional_matrix(R, u);
  double s = 0.0;
  const int n = R.dim();
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p) s += b(m, p) * (a(m) - a(p)) * (a(m) - a(p));
  return s;
}

// Euclidean gradient 2·∂f/∂Ū of the weighted bisectional sum.
CMatrix qb_gradient(const KahlerTensor& R, const CMatrix& u, const RVector& a) {
  const int n = R.dim();
  CMatrix grad = CMatrix::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    for (int p = 0; p < n; ++p) {
      const double c = (a(m) - a(p)) * (a(m) - a(p));
      if (c == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        Complex acc = 0.0;
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) acc += R(i, j, k, l) * u(i, m) * u(k, p) * std::conj(u(l, p));
        grad(j, m) += 4.0 * c * acc;
      }
    }
  }
  return grad;
}

CMatrix random_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  return q;
}

struct QbRun {
  CMatrix u;
  RVector a;
  double value;
  bool converged;
};

QbRun qb_descent(const KahlerTensor& R, CMatrix u, const Eigen::MatrixXd& basis, const CertifyOptions& opts) {
  const int n = R.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  WeightStep ws = best_weights(bisectional_matrix(R, u), basis);
  RVector a = ws.a;
  double f = ws.value;
  double t = 1.0 / std::max(1.0, 8.0 * max_abs(R));
  bool converged = false;
  for (int it = 0; it < opts.max_iters; ++it) {
    const CMatrix g = qb_gradient(R, u, a);
    const CMatrix w = g * u.adjoint() - u * g.adjoint();
    const double wn2 = w.squaredNorm();
    if (wn2 < 1e-20) {
      converged = true;
      break;
    }
    t *= 2.0;
    bool accepted = false;
    CMatrix un;
    double fn = 0.0;
    while (t * std::sqrt(wn2) > 1e-16) {
      const CMatrix lhs = id + (0.5 * t) * w;
      const CMatrix rhs = id - (0.5 * t) * w;
      un = lhs.partialPivLu().solve(rhs * u);
      fn = qb_value(R, un, a);
      if (fn <= f - 1e-4 * t * 0.5 * wn2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      converged = true;
      break;
    }
    // Re-orthonormalize against drift.
    Eigen::HouseholderQR<CMatrix> qr(un);
    CMatrix q = qr.householderQ() * id;
    const CMatrix rdiag = q.adjoint() * un;
    for (int c = 0; c < n; ++c) {
      const Complex d = rdiag(c, c);
      if (std::abs(d) > 0.0) q.col(c) *= d / std::abs(d);
    }
    u = q;
    ws = best_weights(bisectional_matrix(R, u), basis);
    const double fprev = f;
    if (ws.value <= fn) {
      a = ws.a;
      f = ws.value;
    } else {
      f = fn;
    }
    if (fprev - f < 1e-14 && (u - un).norm() < opts.step_tol) {
      converged = true;
      break;
    }
  }
  return {u, a, f, converged};
}

}  // namespace

PositivityReport min_qb(const KahlerTensor& R, const CertifyOptions& opts) {
  opts.check();
  const int n = R.dim();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "quadratic bisectional form needs n >= 2");
  const Eigen::MatrixXd basis = sum_zero_basis(n);
  std::vector<QbRun> runs(opts.restarts);
  parallel_for(opts.restarts, opts.threads, [&](int i) {
    std::mt19937_64 rng(split_seed(opts.seed, static_cast<std::uint64_t>(i)));
    runs[i] = qb_descent(R, random_unitary(rng, n), basis, opts);
  });
  int best = 0;
  int conv = 0;
  for (int i = 0; i < opts.restarts; ++i) {
    if (runs[i].converged) ++conv;
    if (runs[i].value < runs[best].value) best = i;
  }
  FrameAndWeights fw{runs[best].u, runs[best].a};
  PositivityReport rep{Quantity::QbMin, 0.0, fw, Verdict::Fails, 0.0, {}};
  rep.value = qb_form(R, fw);
  rep.verdict = verdict_for(rep.value);
  rep.margin = rep.value;
  rep.method.algorithm = "alternating_cayley_eigen";
  rep.method.seed = opts.seed;
  rep.method.restarts = opts.restarts;
  rep.method.converged_restarts = conv;
  rep.method.converged = runs[best].converged;
  rep.method.heuristic = true;
  return rep;
}

PositivityReport nu_report(const KahlerTensor& R, const HermitianForm& g) {
  const NuResult nu = nu_max_with_vector(R, g);
  PositivityReport rep{Quantity::Nu, nu.value, nu.eigenvector, verdict_for(nu.value), nu.value, {}};
  rep.method.algorithm = "hermitian_eigensolver";
  rep.method.converged = true;
  return rep;
}

FlatReport flat_ric_perp_classify(const KahlerTensor& R, const HermitianForm& g, double tol,
                                  std::uint64_t seed) {
  require_same_dim(R, g);
  const int n = R.dim();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "classification needs n >= 2");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  FlatReport rep{};
  rep.tol = tol;
  std::vector<CVector> dirs;
  for (int i = 0; i < n; ++i) {
    dirs.push_back(CVector::Unit(n, i));
    for (int j = i + 1; j < n; ++j) {
      dirs.push_back(CVector::Unit(n, i) + CVector::Unit(n, j));
      dirs.push_back(CVector::Unit(n, i) + Complex(0, 1) * CVector::Unit(n, j));
    }
  }
  std::mt19937_64 rng(split_seed(seed, 0));
  for (int s = 0; s < 2000; ++s) dirs.push_back(random_unit(rng, n));
  for (const CVector& x : dirs) rep.max_abs_ric_perp = std::max(rep.max_abs_ric_perp, std::abs(ric_perp(R, g, x)));
  rep.samples = static_cast<int>(dirs.size());

  const HermitianForm ric = ricci(R, g);
  rep.scalar_curvature = scalar_curvature(R, g);
  rep.identity_residual = max_abs(combine(1.0, R, -1.0, ric_operator_tensor(ric, g)));
  rep.max_abs_curvature = max_abs(R);

  const double loose = 16.0 * n * tol;
  if (rep.max_abs_ric_perp > tol) {
    rep.verdict = FlatVerdict::NotRicPerpFlat;
  } else if (rep.identity_residual > loose || std::abs(rep.scalar_curvature) > loose) {
    rep.verdict = FlatVerdict::Inconsistent;
  } else if (rep.max_abs_curvature <= loose) {
    rep.verdict = FlatVerdict::Flat;
  } else if (n == 2) {
    rep.verdict = FlatVerdict::N2ConformallySplit;
  } else {
    rep.verdict = FlatVerdict::Inconsistent;
  }
  return rep;
}

EinsteinResult einstein_check(const KahlerTensor& R, const HermitianForm& g, double tol) {
  require_same_dim(R, g);
  const int n = R.dim();
  const KahlerTensor r_on = to_orthonormal(R, g);
  const CMatrix ric = ricci(r_on, HermitianForm::identity(n)).matrix();
  EinsteinResult res;
  res.mu = ric.trace().real() / n;
  res.residual = (ric - res.mu * CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  res.einstein = res.residual <= tol;
  return res;
}

}  // namespace ricperp
