#include "ricperp/tensor.hpp"

#include <cmath>

#include "ricperp/error.hpp"

namespace ricperp {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

HermitianForm HermitianForm::from_matrix(CMatrix m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Hermitian form must be square");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!finite(m(i, j))) throw Error(ErrorCode::NonFinite, "non-finite form entry");
    }
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(j, i) - std::conj(m(i, j))) > tol) {
        throw Error(ErrorCode::InvalidArgument, "form is not Hermitian");
      }
    }
  }
  return HermitianForm(std::move(m));
}

HermitianForm HermitianForm::identity(int n) {
  return HermitianForm(CMatrix::Identity(n, n));
}

HermitianForm HermitianForm::zero(int n) { return HermitianForm(CMatrix::Zero(n, n)); }

double HermitianForm::quadratic(const CVector& x) const {
  // x^T F conj(x)
  return (x.transpose() * m_ * x.conjugate()).value().real();
}

bool HermitianForm::is_identity(double tol) const {
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      const Complex want = i == j ? Complex(1.0) : Complex(0.0);
      if (std::abs(m_(i, j) - want) > tol) return false;
    }
  }
  return true;
}

TensorBuffer::TensorBuffer(int n) : n_(n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "tensor dimension must be >= 1");
  data_.assign(static_cast<std::size_t>(n) * n * n * n, Complex(0.0));
}

SymmetryResidual symmetry_residual(const TensorBuffer& raw) {
  SymmetryResidual out;
  const int n = raw.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Complex v = raw(i, j, k, l);
          const double r = std::max({std::abs(v - std::conj(raw(j, i, l, k))),
                                     std::abs(v - raw(k, j, i, l)),
                                     std::abs(v - raw(i, l, k, j))});
          if (r > out.value) {
            out.value = r;
            out.where = {i, j, k, l};
          }
        }
  return out;
}

KahlerTensor KahlerTensor::validated(TensorBuffer raw, double tol) {
  for (const Complex& z : raw.data()) {
    if (!finite(z)) throw Error(ErrorCode::NonFinite, "non-finite curvature entry");
  }
  const SymmetryResidual res = symmetry_residual(raw);
  if (res.value > tol) throw SymmetryViolation(res.value, res.where);
  return KahlerTensor(std::move(raw));
}

KahlerTensor KahlerTensor::validated(int n, std::span<const Complex> raw, double tol) {
  TensorBuffer buf(n);
  if (raw.size() != buf.data().size()) {
    throw Error(ErrorCode::DimensionMismatch, "raw tensor must hold n^4 entries");
  }
  std::copy(raw.begin(), raw.end(), buf.data().begin());
  return validated(std::move(buf), tol);
}

KahlerTensor KahlerTensor::zero(int n) { return KahlerTensor(TensorBuffer(n)); }

KahlerTensor trusted_tensor(TensorBuffer b) { return KahlerTensor(std::move(b)); }

Complex KahlerTensor::eval(const CVector& x, const CVector& y, const CVector& z,
                           const CVector& w) const {
  const int n = dim();
  Complex total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const Complex xy = x[i] * std::conj(y[j]);
      if (xy == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        Complex acc = 0.0;
        for (int l = 0; l < n; ++l) acc += buf_(i, j, k, l) * std::conj(w[l]);
        total += xy * z[k] * acc;
      }
    }
  }
  return total;
}

double KahlerTensor::quartic(const CVector& x) const { return eval(x, x, x, x).real(); }

CVector KahlerTensor::quartic_partial(const CVector& x) const {
  const int n = dim();
  CVector out = CVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int k = 0; k < n; ++k) {
        Complex inner = 0.0;
        for (int l = 0; l < n; ++l) inner += buf_(i, j, k, l) * std::conj(x[l]);
        acc += x[k] * inner;
      }
      out[j] += x[i] * acc;
    }
  }
  return out;
}

KahlerTensor KahlerTensor::change_frame(const CMatrix& p) const {
  const int n = dim();
  if (p.rows() != n || p.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "frame change must be n x n");
  }
  const CMatrix pc = p.conjugate();
  // Contract one slot at a time; slot s uses P (unbarred) or conj(P) (barred).
  TensorBuffer cur = buf_;
  for (int slot = 0; slot < 4; ++slot) {
    const CMatrix& m = (slot % 2 == 0) ? p : pc;
    TensorBuffer next(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            Complex acc = 0.0;
            for (int t = 0; t < n; ++t) {
              Complex v;
              switch (slot) {
                case 0: v = cur(t, b, c, d) * m(t, a); break;
                case 1: v = cur(a, t, c, d) * m(t, b); break;
                case 2: v = cur(a, b, t, d) * m(t, c); break;
                default: v = cur(a, b, c, t) * m(t, d); break;
              }
              acc += v;
            }
            next(a, b, c, d) = acc;
          }
    cur = std::move(next);
  }
  return KahlerTensor(std::move(cur));
}

void FrameAndWeights::check(double tol) const {
  if (frame.rows() != frame.cols() || weights.size() != frame.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "frame and weights must agree in size");
  }
  const CMatrix defect = frame.adjoint() * frame - CMatrix::Identity(frame.rows(), frame.cols());
  if (defect.cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorCode::NonUnitaryFrame, "frame is not unitary");
  }
}

}  // namespace ricperp
