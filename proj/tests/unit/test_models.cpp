#include <doctest.h>

#include "helpers.hpp"
#include "ricperp/curvature.hpp"
#include "ricperp/error.hpp"

using namespace ricperp;

TEST_CASE("model constructors are exactly symmetric") {
  for (const CurvaturePoint& cp : {fubini_study(1), fubini_study(4), type_I_dual(2, 2), type_I_dual(2, 3),
                                   type_III_dual(2), type_III_dual(3), type_III_dual(4), curve_product(1, -1)}) {
    CHECK(symmetry_residual(cp.R.buffer()).value == 0.0);
  }
}

TEST_CASE("Grassmannian duals are Einstein with constant p+q") {
  for (auto [p, q] : {std::pair{1, 1}, {2, 2}, {2, 3}, {3, 2}}) {
    const CurvaturePoint cp = type_I_dual(p, q);
    const int n = p * q;
    CHECK((ricci(cp.R, cp.g).matrix() - (p + q) * CMatrix::Identity(n, n)).norm() == 0.0);
  }
}

TEST_CASE("Grassmannian dual of rank one is projective space") {
  const CurvaturePoint a = type_I_dual(1, 3);
  const CurvaturePoint b = fubini_study(3);
  for (std::size_t t = 0; t < a.R.data().size(); ++t) CHECK(a.R.data()[t] == b.R.data()[t]);
}

TEST_CASE("symmetric-matrix dual has Ricci constant r+1") {
  for (int r = 2; r <= 4; ++r) {
    const CurvaturePoint cp = type_III_dual(r);
    const int n = r * (r + 1) / 2;
    CHECK(cp.R.dim() == n);
    CHECK((ricci(cp.R, cp.g).matrix() - (r + 1.0) * CMatrix::Identity(n, n)).norm() < 1e-13);
  }
}

TEST_CASE("symmetric-matrix dual Q spectrum") {
  // Independent numpy oracle: largest eigenvalue 2 (multiplicity 15 for r = 3), smallest -1.
  const CurvaturePoint cp = type_III_dual(3);
  const CMatrix q = q_operator(cp.R, cp.g);
  CHECK(q.rows() == 21);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(q);
  const RVector ev = es.eigenvalues();
  int top = 0, bottom = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - 2.0) < 1e-10) ++top;
    if (std::abs(ev(i) + 1.0) < 1e-10) ++bottom;
  }
  CHECK(top == 15);
  CHECK(bottom == 6);
  CHECK(nu_max(cp.R, cp.g) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("curve products") {
  const CurvaturePoint cp = curve_product(1.0, -1.0);
  const CMatrix ric = ricci(cp.R, cp.g).matrix();
  CHECK(ric(0, 0).real() == 1.0);
  CHECK(ric(1, 1).real() == -1.0);
  CHECK_THROWS_AS(curve_product(std::nan(""), 1.0), Error);
}

TEST_CASE("constructor argument errors") {
  CHECK_THROWS_AS(fubini_study(0), Error);
  CHECK_THROWS_AS(type_I_dual(0, 2), Error);
  CHECK_THROWS_AS(type_III_dual(1), Error);
}

TEST_CASE("split bundle curvature and validation") {
  const SplitBundleModel m{3, {0, 0, -1}};
  const BundleCurvature rh = split_bundle_curvature(m);
  CHECK(rh.rank() == 3);
  CHECK(rh(2, 2, 1, 1) == Complex(-1.0));
  CHECK(rh(2, 2, 0, 1) == Complex(0.0));
  CHECK((rh.determinant().matrix() + CMatrix::Identity(3, 3)).norm() == 0.0);
  CHECK_THROWS_AS((SplitBundleModel{3, {0, 1}}.check()), Error);
  CHECK_THROWS_AS((SplitBundleModel{0, {1}}.check()), Error);
  CHECK_THROWS_AS((SplitBundleModel{2, {}}.check()), Error);
}

TEST_CASE("bundle slices") {
  const BundleCurvature t = pn_tangent_bundle_curvature(2);
  CHECK_NOTHROW(t.check());
  const CVector e0 = CVector::Unit(2, 0);
  const CMatrix fs = t.fiber_slice(e0).matrix();
  CHECK(fs(0, 0).real() == 2.0);
  CHECK(fs(1, 1).real() == 1.0);
  const BundleCurvature c = pn_cotangent_bundle_curvature(2);
  CHECK_NOTHROW(c.check());
  CHECK((c.determinant().matrix() + 3.0 * CMatrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("bundle frame change preserves the slice spectrum") {
  std::mt19937_64 rng(31);
  const BundleCurvature b = testing::random_bundle(rng, 3, 2);
  const CMatrix u = testing::random_unitary(rng, 3);
  const CMatrix w = testing::random_unitary(rng, 2);
  const BundleCurvature bp = b.change_frame(u, w);
  CHECK_NOTHROW(bp.check(1e-12));
  const CVector v = testing::random_unit(rng, 3);
  const CVector x = testing::random_unit(rng, 2);
  CHECK(bp.fiber_slice(v).quadratic(x) == doctest::Approx(b.fiber_slice(u * v).quadratic(w * x)).epsilon(1e-12));
}

TEST_CASE("bundle conjugate symmetry is enforced") {
  BundleCurvature b(2, 2);
  b(0, 1, 0, 0) = 1.0;
  CHECK_THROWS_AS(b.check(), SymmetryViolation);
}
