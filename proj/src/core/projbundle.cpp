#include "ricperp/projbundle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ricperp/error.hpp"

namespace ricperp::projbundle {

ProjBundleInput::ProjBundleInput(double lambda_, KahlerTensor base_, BundleCurvature bundle_)
    : n(base_.dim()),
      r(bundle_.rank()),
      lambda(lambda_),
      base(std::move(base_)),
      bundle(std::move(bundle_)),
      d3(static_cast<std::size_t>(n) * n * n, Complex(0.0)),
      d3_mixed(static_cast<std::size_t>(r - 1) * n * n * n, Complex(0.0)),
      d4(KahlerTensor::zero(n)) {}

namespace {

void check_finite_array(const std::vector<Complex>& v, const char* what) {
  for (const Complex& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorCode::NonFinite, std::string("non-finite entry in ") + what);
    }
  }
}

}  // namespace

void ProjBundleInput::check() const {
  if (bundle.base_dim() != n || base.dim() != n || d4.dim() != n) {
    throw Error(ErrorCode::DimensionMismatch, "base and bundle dimensions differ");
  }
  if (bundle.rank() != r) throw Error(ErrorCode::DimensionMismatch, "bundle rank differs");
  const std::size_t n3 = static_cast<std::size_t>(n) * n * n;
  if (d3.size() != n3) throw Error(ErrorCode::DimensionMismatch, "d3 must have n^3 entries");
  if (d3_mixed.size() != static_cast<std::size_t>(r - 1) * n3) {
    throw Error(ErrorCode::DimensionMismatch, "d3_mixed must have (r-1) n^3 entries");
  }
  if (!std::isfinite(lambda)) throw Error(ErrorCode::NonFinite, "lambda must be finite");
  check_finite_array(d3, "d3");
  check_finite_array(d3_mixed, "d3_mixed");
  bundle.check();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (std::abs(d3_at(i, j, k) - d3_at(k, j, i)) > kValidationTol) {
          throw Error(ErrorCode::InvalidArgument, "d3 must be symmetric in its unbarred indices");
        }
        for (int b = 1; b < r; ++b) {
          if (std::abs(d3_mixed_at(b, i, j, k) - d3_mixed_at(b, k, j, i)) > kValidationTol) {
            throw Error(ErrorCode::InvalidArgument, "d3_mixed must be symmetric in its unbarred indices");
          }
        }
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && std::abs(bundle(0, 0, i, j)) > kValidationTol) {
        throw Error(ErrorCode::InvalidArgument, "fiber-point slice is not diagonal");
      }
    }
  for (int i = 0; i < n; ++i) {
    if (!(lambda > xi(i))) {
      throw Error(ErrorCode::LambdaTooSmall, "lambda must exceed every slice eigenvalue");
    }
  }
}

namespace {

// Unitary matrix whose first column is the unit vector v.
CMatrix complete_to_unitary(const CVector& v) {
  const int r = static_cast<int>(v.size());
  int hot = -1;
  int nonzero = 0;
  for (int a = 0; a < r; ++a) {
    if (v(a) != 0.0) {
      ++nonzero;
      hot = a;
    }
  }
  CMatrix u = CMatrix::Zero(r, r);
  if (nonzero == 1) {
    // Coordinate vector: keep the remaining basis order.
    u(hot, 0) = v(hot);
    int col = 1;
    for (int a = 0; a < r; ++a)
      if (a != hot) u(a, col++) = 1.0;
    return u;
  }
  const CMatrix vm = v;
  Eigen::HouseholderQR<CMatrix> qr(vm);
  u = qr.householderQ() * CMatrix::Identity(r, r);
  u.col(0) = v;
  return u;
}

}  // namespace

ProjBundleInput adapt(const KahlerTensor& base, const BundleCurvature& bundle, double lambda,
                      const CVector& fiber_point) {
  const int n = base.dim();
  const int r = bundle.rank();
  if (bundle.base_dim() != n) throw Error(ErrorCode::DimensionMismatch, "base and bundle dimensions differ");
  if (fiber_point.size() != r) throw Error(ErrorCode::DimensionMismatch, "fiber point has wrong length");
  const double vn = fiber_point.norm();
  if (!(vn > 0.0)) throw Error(ErrorCode::ZeroVector, "fiber point must be nonzero");
  bundle.check();

  const CMatrix u = complete_to_unitary(fiber_point / vn);
  const CMatrix id_n = CMatrix::Identity(n, n);
  BundleCurvature rotated = bundle.change_frame(u, id_n);

  CMatrix slice(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) slice(i, j) = rotated(0, 0, i, j);
  bool diagonal = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(slice(i, j)) > 1e-14) diagonal = false;

  KahlerTensor b = base;
  if (!diagonal) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (slice + slice.adjoint()));
    const CMatrix w = es.eigenvectors().conjugate();
    rotated = rotated.change_frame(CMatrix::Identity(r, r), w);
    b = base.change_frame(w);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) rotated(0, 0, i, j) = 0.0;
  }
  for (int i = 0; i < n; ++i) rotated(0, 0, i, i) = rotated(0, 0, i, i).real();

  ProjBundleInput in(lambda, std::move(b), std::move(rotated));
  in.check();
  return in;
}

RVector g_metric_diagonal(const ProjBundleInput& in) {
  in.check();
  RVector d = RVector::Ones(in.total_dim());
  for (int i = 0; i < in.n; ++i) d(i) = in.lambda - in.xi(i);
  return d;
}

namespace {

// Tables of G-derivatives at the point, adapted coordinates.
struct Tables {
  const ProjBundleInput& in;
  int n;

  bool vert(int a) const { return a >= n; }
  int bidx(int a) const { return a - n + 1; }

  // G_{a j̄, c} for horizontal j.
  Complex first(int a, int j, int c) const {
    const bool va = vert(a);
    const bool vc = vert(c);
    if (!va && !vc) return in.d3_at(a, j, c);
    if (!va && vc) return -in.bundle(bidx(c), 0, a, j);
    if (va && !vc) return -in.bundle(bidx(a), 0, c, j);
    return 0.0;
  }

  // G_{a b̄, c d̄}.
  Complex second(int a, int b, int c, int d) const {
    const int uv = int(vert(a)) + int(vert(c));
    const int bv = int(vert(b)) + int(vert(d));
    if (uv == 0 && bv == 0) {
      const double xa = in.xi(a);
      const double xc = in.xi(c);
      double prod = 0.0;
      if (a == b && c == d) prod += xa * xc;
      if (a == d && c == b) prod += xa * xc;
      return -in.lambda * in.base(a, b, c, d) + in.d4(a, b, c, d) - prod;
    }
    if (uv == 2 && bv == 2) {
      const int al = bidx(a), be = bidx(b), ga = bidx(c), de = bidx(d);
      double v = 0.0;
      if (al == be && ga == de) v += 1.0;
      if (al == de && ga == be) v += 1.0;
      return -v;
    }
    if (uv == 1 && bv == 1) {
      const int i = vert(a) ? c : a;
      const int al = bidx(vert(a) ? a : c);
      const int j = vert(b) ? d : b;
      const int be = bidx(vert(b) ? b : d);
      Complex v = -in.bundle(al, be, i, j);
      if (al == be && i == j) v += in.xi(i);
      return v;
    }
    if (uv == 0 && bv == 1) {
      const int j = vert(b) ? d : b;
      const int be = bidx(vert(b) ? b : d);
      return in.d3_mixed_at(be, a, j, c);
    }
    if (uv == 1 && bv == 0) return std::conj(second(b, a, d, c));
    return 0.0;
  }
};

TensorBuffer coordinate_buffer(const ProjBundleInput& in) {
  const int n = in.n;
  const int N = in.total_dim();
  Tables t{in, n};
  std::vector<double> eps(n);
  for (int j = 0; j < n; ++j) eps[j] = 1.0 / (in.lambda - in.xi(j));
  TensorBuffer buf(N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d) {
          Complex v = -t.second(a, b, c, d);
          for (int j = 0; j < n; ++j) {
            const Complex f1 = t.first(a, j, c);
            if (f1 == 0.0) continue;
            v += eps[j] * f1 * std::conj(t.first(b, j, d));
          }
          buf(a, b, c, d) = v;
        }
  return buf;
}

}  // namespace

KahlerTensor g_curvature_coordinates(const ProjBundleInput& in) {
  in.check();
  return KahlerTensor::validated(coordinate_buffer(in));
}

CurvaturePoint g_curvature_at_origin(const ProjBundleInput& in) {
  const RVector diag = g_metric_diagonal(in);
  const int N = in.total_dim();
  TensorBuffer buf = coordinate_buffer(in);
  RVector s(N);
  for (int a = 0; a < N; ++a) s(a) = 1.0 / std::sqrt(diag(a));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c)
        for (int d = 0; d < N; ++d) buf(a, b, c, d) *= s(a) * s(b) * s(c) * s(d);
  return {KahlerTensor::validated(std::move(buf)), HermitianForm::identity(N)};
}

RicciSplit ricci_split(const ProjBundleInput& in) {
  in.check();
  const int n = in.n;
  const int r = in.r;
  const auto& h = in.bundle;
  std::vector<double> eps(n);
  double eps_xi = 0.0;
  for (int j = 0; j < n; ++j) {
    eps[j] = 1.0 / (in.lambda - in.xi(j));
    eps_xi += eps[j] * in.xi(j);
  }

  RicciSplit out;
  out.yy = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Complex v = 0.0;
      for (int j = 0; j < n; ++j) {
        v += eps[j] * (in.lambda * in.base(j, j, i, k) - in.d4(i, k, j, j));
        for (int l = 0; l < n; ++l) v += eps[j] * eps[l] * in.d3_at(i, l, j) * std::conj(in.d3_at(k, l, j));
      }
      if (i == k) v += eps_xi * in.xi(i) + eps[i] * in.xi(i) * in.xi(i);
      for (int a = 1; a < r; ++a) {
        v += h(a, a, i, k);
        for (int j = 0; j < n; ++j) v += eps[j] * h(a, 0, i, j) * std::conj(h(a, 0, k, j));
      }
      v -= static_cast<double>(r - 1) * h(0, 0, i, k);
      out.yy(i, k) = v;
    }

  out.ys = CMatrix::Zero(n, r - 1);
  for (int i = 0; i < n; ++i)
    for (int b = 1; b < r; ++b) {
      Complex v = 0.0;
      for (int j = 0; j < n; ++j) {
        v -= eps[j] * in.d3_mixed_at(b, j, j, i);
        for (int l = 0; l < n; ++l) v -= eps[j] * eps[l] * in.d3_at(j, l, i) * h(0, b, l, j);
      }
      out.ys(i, b - 1) = v;
    }

  out.ss = CMatrix::Zero(r - 1, r - 1);
  for (int a = 1; a < r; ++a)
    for (int b = 1; b < r; ++b) {
      Complex v = 0.0;
      for (int j = 0; j < n; ++j) {
        v += eps[j] * h(a, b, j, j);
        for (int l = 0; l < n; ++l) v += eps[j] * eps[l] * h(a, 0, j, l) * std::conj(h(b, 0, j, l));
      }
      if (a == b) v += static_cast<double>(r) - eps_xi;
      out.ss(a - 1, b - 1) = v;
    }
  return out;
}

RicciSplit ricci_split_direct(const ProjBundleInput& in) {
  const KahlerTensor R = g_curvature_coordinates(in);
  const RVector diag = g_metric_diagonal(in);
  const int n = in.n;
  const int N = in.total_dim();
  CMatrix ric = CMatrix::Zero(N, N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) ric(a, b) += R(a, b, c, c) / diag(c);
  return {ric.topLeftCorner(n, n), ric.topRightCorner(n, in.r - 1), ric.bottomRightCorner(in.r - 1, in.r - 1)};
}

PhiBreakdown phi(const ProjBundleInput& in, const CVector& y, const CVector& sigma) {
  const int n = in.n;
  const int r = in.r;
  if (y.size() != n || sigma.size() != r - 1) {
    throw Error(ErrorCode::DimensionMismatch, "tangent split has wrong lengths");
  }
  const RicciSplit rs = ricci_split(in);
  const auto& h = in.bundle;

  double ny2 = 0.0;
  double xi_y = 0.0;
  for (int j = 0; j < n; ++j) {
    ny2 += (in.lambda - in.xi(j)) * std::norm(y(j));
    xi_y += in.xi(j) * std::norm(y(j));
  }
  const double s2 = sigma.squaredNorm();
  if (!(ny2 + s2 > 0.0)) throw Error(ErrorCode::ZeroVector, "direction must be nonzero");

  std::vector<double> eps(n);
  for (int j = 0; j < n; ++j) eps[j] = 1.0 / (in.lambda - in.xi(j));

  const double ric_yy = (y.transpose() * rs.yy * y.conjugate())(0, 0).real();
  const Complex ric_ys = (y.transpose() * rs.ys * sigma.conjugate())(0, 0);
  const double ric_ss = (sigma.transpose() * rs.ss * sigma.conjugate())(0, 0).real();

  // h_{uū, y j̄ y} and R^h_{v σ̄ j ȳ} for each horizontal j.
  std::vector<Complex> hy(n, 0.0), rv(n, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) hy[j] += y(i) * y(k) * in.d3_at(i, j, k);
    for (int b = 1; b < r; ++b)
      for (int l = 0; l < n; ++l) rv[j] += std::conj(sigma(b - 1)) * h(0, b, j, l) * std::conj(y(l));
  }

  double r_yyyy = 2.0 * xi_y * xi_y;
  r_yyyy += in.lambda * in.base.quartic(y) - in.d4.quartic(y);
  for (int j = 0; j < n; ++j) r_yyyy += eps[j] * std::norm(hy[j]);

  Complex r_yyys = 0.0;
  for (int b = 1; b < r; ++b)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          r_yyys -= std::conj(sigma(b - 1)) * y(i) * std::conj(y(j)) * y(k) * in.d3_mixed_at(b, i, j, k);
  for (int j = 0; j < n; ++j) r_yyys -= eps[j] * hy[j] * rv[j];

  double r_yyss = -s2 * xi_y;
  {
    Complex hs = 0.0;
    for (int a = 1; a < r; ++a)
      for (int b = 1; b < r; ++b)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            hs += sigma(a - 1) * std::conj(sigma(b - 1)) * y(i) * std::conj(y(j)) * h(a, b, i, j);
    r_yyss += hs.real();
  }
  for (int j = 0; j < n; ++j) r_yyss += eps[j] * std::norm(rv[j]);

  const double r_ssss = 2.0 * s2 * s2;

  PhiBreakdown out;
  out.phi0 = ny2 * ric_yy - r_yyyy;
  out.phi1 = ny2 * ric_ys - 2.0 * r_yyys;
  out.phi2 = ny2 * ric_ss + s2 * ric_yy - 4.0 * r_yyss;
  out.phi3 = s2 * ric_ys;
  out.phi4 = s2 * ric_ss - r_ssss;
  out.total = out.phi0 + 2.0 * out.phi1.real() + out.phi2 + 2.0 * out.phi3.real() + out.phi4;
  out.norm_squared = ny2 + s2;

  const KahlerTensor R = g_curvature_coordinates(in);
  const RVector diag = g_metric_diagonal(in);
  const int N = in.total_dim();
  CVector x(N);
  x.head(n) = y;
  x.tail(r - 1) = sigma;
  CMatrix ginv = CMatrix::Zero(N, N);
  for (int a = 0; a < N; ++a) ginv(a, a) = 1.0 / diag(a);
  CMatrix gm = CMatrix::Zero(N, N);
  for (int a = 0; a < N; ++a) gm(a, a) = diag(a);
  const HermitianForm g = HermitianForm::from_matrix(gm);
  const double ric_x = ricci(R, g).quadratic(x);
  out.direct = out.norm_squared * ric_x - R.quartic(x);
  return out;
}

namespace {

CVector top_fiber_vector(const BundleCurvature& bundle, const CVector& x) {
  // base_slice(x) has entries m_{αβ} against v_α v̄_β, so maximize over conj(m).
  const CMatrix m = bundle.base_slice(x).matrix().conjugate();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  return es.eigenvectors().col(m.rows() - 1);
}

struct MarginRun {
  double value;
  CVector v;
  CVector x;
  bool converged;
};

double margin_value(const KahlerTensor& base, const HermitianForm& ric, const HermitianForm& det,
                    const BundleCurvature& bundle, const CVector& v, const CVector& x) {
  const double r = bundle.rank();
  return ric.quadratic(x) - base.quartic(x) + det.quadratic(x) - r * bundle.fiber_slice(v).quadratic(x);
}

}  // namespace

MarginReport condition_margin(const KahlerTensor& base, const BundleCurvature& bundle,
                              const CertifyOptions& opts) {
  opts.check();
  const int n = base.dim();
  if (bundle.base_dim() != n) throw Error(ErrorCode::DimensionMismatch, "base and bundle dimensions differ");
  bundle.check();
  const HermitianForm id = HermitianForm::identity(n);
  const HermitianForm ric = ricci(base, id);
  const HermitianForm det = bundle.determinant();
  const double r = bundle.rank();

  std::vector<MarginRun> runs(opts.restarts);
  parallel_for(opts.restarts, opts.threads, [&](int idx) {
    std::mt19937_64 rng(split_seed(opts.seed, static_cast<std::uint64_t>(idx)));
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector x(n);
    for (int i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      x(i) = Complex(re, im);
    }
    x /= x.norm();
    CVector v = top_fiber_vector(bundle, x);
    double f = margin_value(base, ric, det, bundle, v, x);
    bool converged = false;
    for (int outer = 0; outer < 100; ++outer) {
      const CMatrix quad = ric.matrix() + det.matrix() - r * bundle.fiber_slice(v).matrix();
      SphereProblem p{&base, quad, -1.0};
      const SphereResult sr = descend_on_sphere(p, x, opts.max_iters, opts.step_tol);
      const CVector vn = top_fiber_vector(bundle, sr.x);
      const double fn = margin_value(base, ric, det, bundle, vn, sr.x);
      const bool small = f - fn < 1e-13;
      if (fn <= f) {
        x = sr.x;
        v = vn;
        f = fn;
      }
      if (small) {
        converged = sr.converged;
        break;
      }
    }
    runs[idx] = {f, v, x, converged};
  });
  int best = 0;
  for (int i = 1; i < opts.restarts; ++i)
    if (runs[i].value < runs[best].value) best = i;
  MarginReport rep;
  rep.value = runs[best].value;
  rep.fiber = runs[best].v;
  rep.direction = runs[best].x;
  rep.converged = runs[best].converged;
  rep.restarts = opts.restarts;
  return rep;
}

double split_condition_margin(const SplitBundleModel& model) {
  model.check();
  const int r = model.rank();
  const long sum = std::accumulate(model.degrees.begin(), model.degrees.end(), 0L);
  const int top = *std::max_element(model.degrees.begin(), model.degrees.end());
  return static_cast<double>(model.base_dim - 1) + static_cast<double>(sum - static_cast<long>(r) * top);
}

LambdaSearchReport lambda_search(const KahlerTensor& base, const BundleCurvature& bundle,
                                 const std::vector<CVector>& fiber_points, std::vector<double> grid,
                                 const CertifyOptions& opts) {
  if (grid.empty()) throw Error(ErrorCode::EmptyGrid, "lambda grid is empty");
  if (fiber_points.empty()) throw Error(ErrorCode::InvalidArgument, "no fiber points given");
  opts.check();
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // Validate every (λ, point) pair before any certification work.
  std::vector<std::vector<ProjBundleInput>> inputs;
  for (double lambda : grid) {
    std::vector<ProjBundleInput> row;
    for (const CVector& p : fiber_points) row.push_back(adapt(base, bundle, lambda, p));
    inputs.push_back(std::move(row));
  }

  LambdaSearchReport rep;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    LambdaPoint pt;
    pt.lambda = grid[g];
    bool first = true;
    for (std::size_t f = 0; f < fiber_points.size(); ++f) {
      const ProjBundleInput& in = inputs[g][f];
      const CurvaturePoint cp = g_curvature_at_origin(in);
      const PositivityReport pr = min_ric_perp(cp.R, cp.g, opts);
      if (first || pr.value < pt.min_ric_perp) {
        pt.min_ric_perp = pr.value;
        pt.fiber_index = static_cast<int>(f);
        pt.witness = std::get<CVector>(pr.witness);
        pt.converged = pr.method.converged;
      }
      first = false;
      if (in.r >= 2) {
        const CMatrix ss = ricci_split(in).ss;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (ss + ss.adjoint()));
        const double vm = es.eigenvalues()(0) - 2.0;
        pt.vertical_margin = pt.vertical_margin ? std::min(*pt.vertical_margin, vm) : vm;
      }
    }
    pt.verdict = verdict_for(pt.min_ric_perp);
    rep.points.push_back(std::move(pt));
  }
  for (const LambdaPoint& pt : rep.points) {
    if (pt.verdict == Verdict::Positive) {
      if (!rep.first_positive) rep.first_positive = pt.lambda;
    } else if (rep.first_positive) {
      rep.stays_positive = false;
    }
  }
  return rep;
}

LambdaSearchReport lambda_search(const SplitBundleModel& model, std::vector<double> grid,
                                 const CertifyOptions& opts) {
  model.check();
  const int r = model.rank();
  std::vector<CVector> points;
  for (int a = 0; a < r; ++a) points.push_back(CVector::Unit(r, a));
  const CurvaturePoint fs = fubini_study(model.base_dim);
  return lambda_search(fs.R, split_bundle_curvature(model), points, std::move(grid), opts);
}

int section_normal_c1(int r, const std::vector<int>& degrees, int i) {
  if (static_cast<int>(degrees.size()) != r) {
    throw Error(ErrorCode::DimensionMismatch, "degrees must have length r");
  }
  if (i < 1 || i > r) throw Error(ErrorCode::IndexOutOfRange, "section index must lie in 1..r");
  const int sum = std::accumulate(degrees.begin(), degrees.end(), 0);
  return r * degrees[i - 1] - sum;
}

int section_normal_c1_total(int r, const std::vector<int>& degrees, int i) {
  return section_normal_c1(r, degrees, i) + 1;
}

bool rational_curve_bound(int minus_k_dot_c, int genus) {
  if (genus < 0) throw Error(ErrorCode::InvalidArgument, "genus must be nonnegative");
  return minus_k_dot_c >= 3 - 2 * genus;
}

}  // namespace ricperp::projbundle
