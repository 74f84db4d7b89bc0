#include "ricperp/models.hpp"

#include <cmath>

#include "ricperp/error.hpp"

namespace ricperp {

namespace {

int delta(int a, int b) { return a == b ? 1 : 0; }

TensorBuffer fubini_study_buffer(int n) {
  TensorBuffer buf(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      buf(i, i, k, k) += 1.0;
      buf(i, k, k, i) += 1.0;
    }
  return buf;
}

// Integer coefficient of the compact type I tensor on matrix units.
int type_I_entry(int i, int a, int j, int b, int k, int c, int l, int d) {
  return delta(i, j) * delta(k, l) * delta(a, d) * delta(c, b) +
         delta(i, l) * delta(k, j) * delta(a, b) * delta(c, d);
}

}  // namespace

CurvaturePoint fubini_study(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "fubini_study needs n >= 1");
  return {trusted_tensor(fubini_study_buffer(n)), HermitianForm::identity(n)};
}

CurvaturePoint type_I_dual(int p, int q) {
  if (p < 1 || q < 1) throw Error(ErrorCode::InvalidArgument, "type_I_dual needs p, q >= 1");
  const int n = p * q;
  TensorBuffer buf(n);
  for (int i = 0; i < p; ++i)
    for (int a = 0; a < q; ++a)
      for (int j = 0; j < p; ++j)
        for (int b = 0; b < q; ++b)
          for (int k = 0; k < p; ++k)
            for (int c = 0; c < q; ++c)
              for (int l = 0; l < p; ++l)
                for (int d = 0; d < q; ++d) {
                  const int v = type_I_entry(i, a, j, b, k, c, l, d);
                  if (v != 0) buf(i * q + a, j * q + b, k * q + c, l * q + d) = v;
                }
  return {trusted_tensor(std::move(buf)), HermitianForm::identity(n)};
}

CurvaturePoint type_III_dual(int r) {
  if (r < 2) throw Error(ErrorCode::InvalidArgument, "type_III_dual needs r >= 2");
  struct Unit {
    int i, j;
  };
  std::vector<Unit> units;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) units.push_back({i, j});
  const int n = static_cast<int>(units.size());

  // Support of a symmetric unit as matrix positions (each with weight 1).
  const auto support = [](const Unit& u) {
    std::vector<std::pair<int, int>> s{{u.i, u.j}};
    if (u.i != u.j) s.emplace_back(u.j, u.i);
    return s;
  };

  // The entry is (integer sum) · 2^{-m/2}, m = number of off-diagonal units.
  // Evaluating the scale from m alone keeps mirrored entries bitwise equal.
  TensorBuffer buf(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          int sum = 0;
          for (auto [i, al] : support(units[a]))
            for (auto [j, be] : support(units[b]))
              for (auto [k, ga] : support(units[c]))
                for (auto [l, de] : support(units[d])) sum += type_I_entry(i, al, j, be, k, ga, l, de);
          if (sum == 0) continue;
          int m = 0;
          for (int t : {a, b, c, d}) m += units[t].i != units[t].j ? 1 : 0;
          double scale = std::ldexp(1.0, -(m / 2));
          if (m % 2 == 1) scale /= std::sqrt(2.0);
          buf(a, b, c, d) = sum * scale;
        }
  return {trusted_tensor(std::move(buf)), HermitianForm::identity(n)};
}

CurvaturePoint curve_product(double k1, double k2) {
  if (!std::isfinite(k1) || !std::isfinite(k2)) throw Error(ErrorCode::NonFinite, "curvatures must be finite");
  TensorBuffer buf(2);
  buf(0, 0, 0, 0) = k1;
  buf(1, 1, 1, 1) = k2;
  return {trusted_tensor(std::move(buf)), HermitianForm::identity(2)};
}

BundleCurvature::BundleCurvature(int rank, int base_dim) : r_(rank), n_(base_dim) {
  if (rank < 1 || base_dim < 1) throw Error(ErrorCode::InvalidArgument, "bundle rank and base dimension must be >= 1");
  data_.assign(static_cast<std::size_t>(rank) * rank * base_dim * base_dim, Complex(0.0));
}

void BundleCurvature::check(double tol) const {
  double worst = 0.0;
  std::array<int, 4> where{0, 0, 0, 0};
  for (int a = 0; a < r_; ++a)
    for (int b = 0; b < r_; ++b)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          const Complex v = (*this)(a, b, i, j);
          if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw Error(ErrorCode::NonFinite, "non-finite bundle curvature entry");
          }
          const double res = std::abs(v - std::conj((*this)(b, a, j, i)));
          if (res > worst) {
            worst = res;
            where = {a, b, i, j};
          }
        }
  if (worst > tol) throw SymmetryViolation(worst, where);
}

HermitianForm BundleCurvature::fiber_slice(const CVector& v) const {
  if (v.size() != r_) throw Error(ErrorCode::DimensionMismatch, "fiber vector has wrong length");
  CMatrix m = CMatrix::Zero(n_, n_);
  for (int a = 0; a < r_; ++a)
    for (int b = 0; b < r_; ++b) {
      const Complex w = v[a] * std::conj(v[b]);
      if (w == 0.0) continue;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) += w * (*this)(a, b, i, j);
    }
  return HermitianForm::from_matrix(0.5 * (m + m.adjoint()), 1e-8);
}

HermitianForm BundleCurvature::base_slice(const CVector& x) const {
  if (x.size() != n_) throw Error(ErrorCode::DimensionMismatch, "base vector has wrong length");
  CMatrix m = CMatrix::Zero(r_, r_);
  for (int a = 0; a < r_; ++a)
    for (int b = 0; b < r_; ++b) {
      Complex acc = 0.0;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) acc += (*this)(a, b, i, j) * x[i] * std::conj(x[j]);
      m(a, b) = acc;
    }
  return HermitianForm::from_matrix(0.5 * (m + m.adjoint()), 1e-8);
}

HermitianForm BundleCurvature::determinant() const {
  CMatrix m = CMatrix::Zero(n_, n_);
  for (int a = 0; a < r_; ++a)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(i, j) += (*this)(a, a, i, j);
  return HermitianForm::from_matrix(0.5 * (m + m.adjoint()), 1e-8);
}

BundleCurvature BundleCurvature::change_frame(const CMatrix& u, const CMatrix& w) const {
  if (u.rows() != r_ || u.cols() != r_ || w.rows() != n_ || w.cols() != n_) {
    throw Error(ErrorCode::DimensionMismatch, "frame change sizes differ from bundle");
  }
  BundleCurvature out(r_, n_);
  for (int a = 0; a < r_; ++a)
    for (int b = 0; b < r_; ++b)
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
          Complex acc = 0.0;
          for (int p = 0; p < r_; ++p)
            for (int q = 0; q < r_; ++q) {
              const Complex uw = u(p, a) * std::conj(u(q, b));
              if (uw == 0.0) continue;
              for (int k = 0; k < n_; ++k)
                for (int l = 0; l < n_; ++l) acc += uw * (*this)(p, q, k, l) * w(k, i) * std::conj(w(l, j));
            }
          out(a, b, i, j) = acc;
        }
  return out;
}

void SplitBundleModel::check() const {
  if (base_dim < 1) throw Error(ErrorCode::InvalidArgument, "split bundle needs base dimension >= 1");
  if (degrees.empty()) throw Error(ErrorCode::InvalidArgument, "split bundle needs at least one degree");
  for (std::size_t t = 1; t < degrees.size(); ++t) {
    if (degrees[t] > degrees[t - 1]) {
      throw Error(ErrorCode::InvalidArgument, "split bundle degrees must be non-increasing");
    }
  }
}

BundleCurvature split_bundle_curvature(const SplitBundleModel& model) {
  model.check();
  BundleCurvature rh(model.rank(), model.base_dim);
  for (int a = 0; a < model.rank(); ++a)
    for (int i = 0; i < model.base_dim; ++i) rh(a, a, i, i) = model.degrees[a];
  return rh;
}

BundleCurvature pn_tangent_bundle_curvature(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "P^n needs n >= 1");
  BundleCurvature rh(n, n);
  // Rh_{α β̄ i j̄} = R^FS_{i j̄ α β̄} = δ_ij δ_αβ + δ_iβ δ_αj
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rh(a, b, i, j) = delta(i, j) * delta(a, b) + delta(i, b) * delta(a, j);
  return rh;
}

BundleCurvature pn_cotangent_bundle_curvature(int n) {
  const BundleCurvature t = pn_tangent_bundle_curvature(n);
  BundleCurvature rh(n, n);
  // Dual bundle: Rh*_{α β̄ i j̄} = −Rh_{β ᾱ i j̄}.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rh(a, b, i, j) = -t(b, a, i, j);
  return rh;
}

}  // namespace ricperp
