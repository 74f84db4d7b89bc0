#pragma once

#include <random>

#include "ricperp/models.hpp"
#include "ricperp/tensor.hpp"

namespace testing {

using namespace ricperp;

inline CVector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVector x(n);
  for (int i = 0; i < n; ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    x(i) = Complex(re, im);
  }
  return x;
}

inline CVector random_unit(std::mt19937_64& rng, int n) {
  CVector x = random_vector(rng, n);
  return x / x.norm();
}

inline CMatrix random_unitary(std::mt19937_64& rng, int n) {
  CMatrix z(n, n);
  for (int j = 0; j < n; ++j) z.col(j) = random_vector(rng, n);
  Eigen::HouseholderQR<CMatrix> qr(z);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

// Average over the symmetry group of a Kähler curvature tensor.
inline KahlerTensor symmetrize(const TensorBuffer& raw) {
  const int n = raw.dim();
  TensorBuffer out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const Complex s = raw(i, j, k, l) + raw(k, j, i, l) + raw(i, l, k, j) + raw(k, l, i, j);
          const Complex t = raw(j, i, l, k) + raw(j, k, l, i) + raw(l, i, j, k) + raw(l, k, j, i);
          out(i, j, k, l) = (s + std::conj(t)) / 8.0;
        }
  return KahlerTensor::validated(std::move(out));
}

inline KahlerTensor random_tensor(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  TensorBuffer raw(n);
  for (auto& c : raw.data()) {
    const double re = nd(rng);
    const double im = nd(rng);
    c = Complex(re, im);
  }
  return symmetrize(raw);
}

inline HermitianForm random_metric(std::mt19937_64& rng, int n) {
  CMatrix a(n, n);
  for (int j = 0; j < n; ++j) a.col(j) = random_vector(rng, n);
  const CMatrix g = a * a.adjoint() + 0.5 * CMatrix::Identity(n, n);
  return HermitianForm::from_matrix(0.5 * (g + g.adjoint()));
}

inline BundleCurvature random_bundle(std::mt19937_64& rng, int r, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  BundleCurvature raw(r, n);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double re = nd(rng);
          const double im = nd(rng);
          raw(a, b, i, j) = Complex(re, im);
        }
  BundleCurvature out(r, n);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(a, b, i, j) = 0.5 * (raw(a, b, i, j) + std::conj(raw(b, a, j, i)));
  return out;
}

}  // namespace testing
