#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "ricperp/curvature.hpp"
#include "ricperp/error.hpp"

using namespace ricperp;

TEST_CASE("Fubini-Study curvature quantities") {
  for (int n = 1; n <= 5; ++n) {
    const CurvaturePoint fs = fubini_study(n);
    const CMatrix ric = ricci(fs.R, fs.g).matrix();
    CHECK((ric - (n + 1) * CMatrix::Identity(n, n)).norm() == 0.0);
    CHECK(scalar_curvature(fs.R, fs.g) == doctest::Approx(n * (n + 1)));
    std::mt19937_64 rng(n);
    for (int s = 0; s < 10; ++s) {
      const CVector x = testing::random_vector(rng, n);
      CHECK(holo_sect(fs.R, fs.g, x) == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(ric_perp(fs.R, fs.g, x) == doctest::Approx(n - 1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("Fubini-Study Q operator is twice the identity") {
  const CurvaturePoint fs = fubini_study(3);
  const CMatrix q = q_operator(fs.R, fs.g);
  CHECK(q.rows() == 6);
  CHECK((q - 2.0 * CMatrix::Identity(6, 6)).norm() < 1e-14);
  CHECK(nu_max(fs.R, fs.g) == doctest::Approx(2.0));
}

TEST_CASE("zero vector and dimension errors") {
  const CurvaturePoint fs = fubini_study(2);
  try {
    ric_perp(fs.R, fs.g, CVector::Zero(2));
    FAIL("expected ZeroVector");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVector);
  }
  try {
    holo_sect(fs.R, fs.g, CVector::Ones(3));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("singular metrics are rejected") {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 1) = 0.0;
  const HermitianForm g = HermitianForm::from_matrix(m);
  try {
    orthonormal_frame(g);
    FAIL("expected SingularMetric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularMetric);
  }
}

TEST_CASE("ricci is linear in the tensor") {
  std::mt19937_64 rng(21);
  const KahlerTensor R = testing::random_tensor(rng, 3);
  const HermitianForm g = HermitianForm::identity(3);
  const CMatrix a = ricci(scale_tensor(R, 2.0), g).matrix();
  const CMatrix b = ricci(R, g).matrix();
  CHECK((a - 2.0 * b).norm() < 1e-12);
  CHECK(scalar_curvature(KahlerTensor::zero(3), g) == 0.0);
}

TEST_CASE("holomorphic sectional curvature of the Ricci tensor minus R is orthogonal Ricci") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 4; ++n) {
    for (int t = 0; t < 5; ++t) {
      const KahlerTensor R = testing::random_tensor(rng, n);
      const HermitianForm g = testing::random_metric(rng, n);
      const KahlerTensor rr = ric_operator_tensor(ricci(R, g), g);
      const KahlerTensor diff = combine(1.0, rr, -1.0, R);
      for (int s = 0; s < 20; ++s) {
        const CVector x = testing::random_vector(rng, n);
        CHECK(std::abs(holo_sect(diff, g, x) - ric_perp(R, g, x)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("nu bounds holomorphic sectional curvature") {
  std::mt19937_64 rng(9);
  for (int n = 2; n <= 4; ++n) {
    const KahlerTensor R = testing::random_tensor(rng, n);
    const HermitianForm g = HermitianForm::identity(n);
    const double nu = nu_max(R, g);
    for (int s = 0; s < 1000; ++s) {
      const CVector x = testing::random_unit(rng, n);
      CHECK(holo_sect(R, g, x) <= nu + 1e-10);
    }
  }
}

TEST_CASE("quadratic bisectional form with indicator weights is twice orthogonal Ricci") {
  std::mt19937_64 rng(13);
  for (int n = 2; n <= 4; ++n) {
    const KahlerTensor R = testing::random_tensor(rng, n);
    const HermitianForm g = HermitianForm::identity(n);
    for (int t = 0; t < 5; ++t) {
      const CMatrix u = testing::random_unitary(rng, n);
      for (int m = 0; m < n; ++m) {
        RVector a = RVector::Zero(n);
        a(m) = 1.0;
        const double qb = qb_form(R, FrameAndWeights{u, a});
        CHECK(std::abs(qb - 2.0 * ric_perp(R, g, u.col(m))) <= 1e-12);
      }
    }
  }
}

TEST_CASE("orthogonal Ricci is phase invariant and scales inversely with the metric") {
  std::mt19937_64 rng(17);
  const KahlerTensor R = testing::random_tensor(rng, 3);
  const HermitianForm g = testing::random_metric(rng, 3);
  const CVector x = testing::random_vector(rng, 3);
  const double base = ric_perp(R, g, x);
  CHECK(ric_perp(R, g, std::polar(1.0, 0.7) * x) == doctest::Approx(base).epsilon(1e-12));
  CHECK(ric_perp(R, g, 3.0 * x) == doctest::Approx(base).epsilon(1e-12));
  const double lam = 2.5;
  const HermitianForm g2 = HermitianForm::from_matrix(lam * g.matrix());
  const CVector xu = x / std::sqrt(norm_squared(g, x));
  const CVector xu2 = xu / std::sqrt(lam);
  CHECK(ric_perp(scale_tensor(R, lam), g2, xu2) == doctest::Approx(base / lam).epsilon(1e-10));
  CHECK(ric_perp(scale_tensor(R, lam), g2, xu) == doctest::Approx(base / lam).epsilon(1e-10));
}

TEST_CASE("non-identity metric agrees with the orthonormalized tensor") {
  std::mt19937_64 rng(23);
  const KahlerTensor R = testing::random_tensor(rng, 3);
  const HermitianForm g = testing::random_metric(rng, 3);
  const OrthonormalFrame f = orthonormal_frame(g);
  const KahlerTensor ron = to_orthonormal(R, g);
  const HermitianForm id = HermitianForm::identity(3);
  for (int s = 0; s < 10; ++s) {
    const CVector x = testing::random_vector(rng, 3);
    CHECK(norm_squared(g, x) == doctest::Approx((f.to_unit * x).squaredNorm()).epsilon(1e-12));
    CHECK(ric_perp(R, g, x) == doctest::Approx(ric_perp(ron, id, f.to_unit * x)).epsilon(1e-10));
  }
  CHECK(nu_max(R, g) == doctest::Approx(nu_max(ron, id)).epsilon(1e-10));
}

TEST_CASE("Q operator is Hermitian and frame invariant in spectrum") {
  std::mt19937_64 rng(29);
  const KahlerTensor R = testing::random_tensor(rng, 3);
  const HermitianForm id = HermitianForm::identity(3);
  const CMatrix q = q_operator(R, id);
  CHECK((q - q.adjoint()).norm() < 1e-12);
  const CMatrix u = testing::random_unitary(rng, 3);
  CHECK(nu_max(R.change_frame(u), id) == doctest::Approx(nu_max(R, id)).epsilon(1e-10));
}

TEST_CASE("product tensors are block sums") {
  const CurvaturePoint a = fubini_study(1);
  const CurvaturePoint b = fubini_study(2);
  const auto [R, g] = product_tensor(a.R, a.g, b.R, b.g);
  CHECK(R.dim() == 3);
  CHECK(R(0, 0, 0, 0) == Complex(2.0));
  CHECK(R(0, 0, 1, 1) == Complex(0.0));
  CHECK(R(1, 1, 2, 2) == Complex(1.0));
  const CMatrix ric = ricci(R, g).matrix();
  CHECK(ric(0, 0).real() == 2.0);
  CHECK(ric(1, 1).real() == 3.0);
}
