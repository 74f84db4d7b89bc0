#include "ricperp/curvature.hpp"

#include <cmath>

#include "ricperp/error.hpp"

namespace ricperp {

namespace {

void require_same_dim(const KahlerTensor& R, const HermitianForm& g) {
  if (R.dim() != g.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "tensor and metric dimensions differ");
  }
}

CMatrix inverse_metric(const HermitianForm& g) {
  Eigen::LLT<CMatrix> llt(g.matrix());
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMetric, "metric is not positive definite");
  }
  return llt.solve(CMatrix::Identity(g.dim(), g.dim()));
}

double checked_norm_squared(const HermitianForm& g, const CVector& x) {
  if (x.size() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "direction has wrong length");
  const double n2 = norm_squared(g, x);
  if (!(n2 > 0.0)) throw Error(ErrorCode::ZeroVector, "direction must be nonzero");
  return n2;
}

}  // namespace

OrthonormalFrame orthonormal_frame(const HermitianForm& g) {
  const int n = g.dim();
  // |x|² = x^T G conj(x) = x^H G^T x, so factor G^T = L L^H.
  const CMatrix a = g.matrix().transpose();
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularMetric, "metric is not positive definite");
  }
  const CMatrix l = llt.matrixL();
  for (int i = 0; i < n; ++i) {
    if (!(l(i, i).real() > 0.0) || !std::isfinite(l(i, i).real())) {
      throw Error(ErrorCode::SingularMetric, "metric is not positive definite");
    }
  }
  OrthonormalFrame f;
  f.to_unit = l.adjoint();
  f.from_unit = f.to_unit.inverse();
  return f;
}

KahlerTensor to_orthonormal(const KahlerTensor& R, const HermitianForm& g) {
  require_same_dim(R, g);
  if (g.is_identity()) return R;
  return R.change_frame(orthonormal_frame(g).from_unit);
}

double norm_squared(const HermitianForm& g, const CVector& x) { return g.quadratic(x); }

HermitianForm ricci(const KahlerTensor& R, const HermitianForm& g) {
  require_same_dim(R, g);
  const int n = R.dim();
  const CMatrix ginv = g.is_identity() ? CMatrix::Identity(n, n) : inverse_metric(g);
  CMatrix ric = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (ginv(l, k) != 0.0) acc += ginv(l, k) * R(i, j, k, l);
        }
      ric(i, j) = acc;
    }
  // Hermitian by construction; symmetrize away rounding.
  const CMatrix herm = 0.5 * (ric + ric.adjoint());
  return HermitianForm::from_matrix(herm, 1e-8);
}

double holo_sect(const KahlerTensor& R, const HermitianForm& g, const CVector& x) {
  require_same_dim(R, g);
  const double n2 = checked_norm_squared(g, x);
  return R.quartic(x) / (n2 * n2);
}

double ric_perp(const KahlerTensor& R, const HermitianForm& g, const CVector& x) {
  require_same_dim(R, g);
  const double n2 = checked_norm_squared(g, x);
  const HermitianForm ric = ricci(R, g);
  return ric.quadratic(x) / n2 - R.quartic(x) / (n2 * n2);
}

double qb_form(const KahlerTensor& R, const FrameAndWeights& fw) {
  fw.check();
  const int n = R.dim();
  if (fw.frame.rows() != n) throw Error(ErrorCode::DimensionMismatch, "frame size differs from tensor");
  double total = 0.0;
  for (int m = 0; m < n; ++m) {
    const CVector em = fw.frame.col(m);
    for (int p = m + 1; p < n; ++p) {
      const double da = fw.weights[m] - fw.weights[p];
      if (da == 0.0) continue;
      const CVector ep = fw.frame.col(p);
      total += 2.0 * R.eval(em, em, ep, ep).real() * da * da;
    }
  }
  return total;
}

CMatrix q_operator(const KahlerTensor& R, const HermitianForm& g) {
  require_same_dim(R, g);
  const KahlerTensor on = to_orthonormal(R, g);
  const int n = on.dim();
  std::vector<std::pair<int, int>> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) basis.emplace_back(i, j);
  const auto coeff = [](const std::pair<int, int>& p) {
    return p.first == p.second ? 1.0 : std::sqrt(2.0);
  };
  const auto m = static_cast<Eigen::Index>(basis.size());
  CMatrix q(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto [i, j] = basis[a];
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto [k, l] = basis[b];
      // (Q f_B, f_A) = c_A c_B R_{k ī l j̄}
      q(a, b) = coeff(basis[a]) * coeff(basis[b]) * on(k, i, l, j);
    }
  }
  return 0.5 * (q + q.adjoint());
}

NuResult nu_max_with_vector(const KahlerTensor& R, const HermitianForm& g) {
  const CMatrix q = q_operator(R, g);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(q);
  const Eigen::Index last = q.rows() - 1;
  return {es.eigenvalues()[last], es.eigenvectors().col(last)};
}

double nu_max(const KahlerTensor& R, const HermitianForm& g) {
  return nu_max_with_vector(R, g).value;
}

KahlerTensor ric_operator_tensor(const HermitianForm& ric, const HermitianForm& g) {
  if (ric.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "Ricci form and metric differ in size");
  const int n = g.dim();
  TensorBuffer buf(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          buf(i, j, k, l) = 0.25 * (ric(i, j) * g(k, l) + ric(k, l) * g(i, j) +
                                    ric(i, l) * g(k, j) + ric(k, j) * g(i, l));
        }
  return trusted_tensor(std::move(buf));
}

std::pair<KahlerTensor, HermitianForm> product_tensor(const KahlerTensor& r1,
                                                      const HermitianForm& g1,
                                                      const KahlerTensor& r2,
                                                      const HermitianForm& g2) {
  require_same_dim(r1, g1);
  require_same_dim(r2, g2);
  const int n1 = r1.dim();
  const int n2 = r2.dim();
  const int n = n1 + n2;
  TensorBuffer buf(n);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n1; ++k)
        for (int l = 0; l < n1; ++l) buf(i, j, k, l) = r1(i, j, k, l);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n2; ++k)
        for (int l = 0; l < n2; ++l) buf(n1 + i, n1 + j, n1 + k, n1 + l) = r2(i, j, k, l);
  CMatrix g = CMatrix::Zero(n, n);
  g.topLeftCorner(n1, n1) = g1.matrix();
  g.bottomRightCorner(n2, n2) = g2.matrix();
  return {trusted_tensor(std::move(buf)), HermitianForm::from_matrix(g)};
}

double scalar_curvature(const KahlerTensor& R, const HermitianForm& g) {
  const HermitianForm ric = ricci(R, g);
  const int n = g.dim();
  const CMatrix ginv = g.is_identity() ? CMatrix::Identity(n, n) : inverse_metric(g);
  Complex s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += ginv(j, i) * ric(i, j);
  return s.real();
}

KahlerTensor scale_tensor(const KahlerTensor& R, double c) {
  return combine(c, R, 0.0, R);
}

KahlerTensor combine(double a, const KahlerTensor& A, double b, const KahlerTensor& B) {
  if (A.dim() != B.dim()) throw Error(ErrorCode::DimensionMismatch, "tensor dimensions differ");
  TensorBuffer buf(A.dim());
  auto out = buf.data();
  auto x = A.data();
  auto y = B.data();
  for (std::size_t t = 0; t < out.size(); ++t) out[t] = a * x[t] + (b == 0.0 ? Complex(0.0) : b * y[t]);
  return trusted_tensor(std::move(buf));
}

double max_abs(const KahlerTensor& R) {
  double m = 0.0;
  for (const Complex& z : R.data()) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace ricperp
