#include <doctest.h>

#include "helpers.hpp"
#include "ricperp/error.hpp"
#include "ricperp/projbundle.hpp"

using namespace ricperp;
using namespace ricperp::projbundle;

namespace {

ProjBundleInput split_input(int n, std::vector<int> degrees, double lambda, int point = 0) {
  const SplitBundleModel m{n, std::move(degrees)};
  return adapt(fubini_study(n).R, split_bundle_curvature(m), lambda, CVector::Unit(m.rank(), point));
}

// Generic adapted input with random bundle curvature and derivative arrays.
ProjBundleInput random_input(std::mt19937_64& rng, int n, int r, double lambda) {
  const KahlerTensor base = testing::random_tensor(rng, n, 0.5);
  const BundleCurvature rh = testing::random_bundle(rng, r, n);
  ProjBundleInput in = adapt(base, rh, lambda, testing::random_unit(rng, r));
  std::normal_distribution<double> nd(0.0, 0.3);
  const auto rc = [&] {
    const double re = nd(rng);
    const double im = nd(rng);
    return Complex(re, im);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = i; k < n; ++k) {
        const Complex c = rc();
        in.d3[(std::size_t(i) * n + j) * n + k] = c;
        in.d3[(std::size_t(k) * n + j) * n + i] = c;
        for (int b = 1; b < r; ++b) {
          const Complex d = rc();
          in.d3_mixed[((std::size_t(b - 1) * n + i) * n + j) * n + k] = d;
          in.d3_mixed[((std::size_t(b - 1) * n + k) * n + j) * n + i] = d;
        }
      }
  in.d4 = testing::random_tensor(rng, n, 0.3);
  in.check();
  return in;
}

}  // namespace

TEST_CASE("metric at the origin") {
  const ProjBundleInput a = split_input(2, {0, 0}, 5.0);
  const RVector d = g_metric_diagonal(a);
  CHECK(d.size() == 3);
  CHECK(d(0) == 5.0);
  CHECK(d(1) == 5.0);
  CHECK(d(2) == 1.0);

  BundleCurvature rh(1, 2);
  rh(0, 0, 0, 0) = 1.0;
  rh(0, 0, 1, 1) = 2.0;
  const ProjBundleInput b = adapt(fubini_study(2).R, rh, 3.0, CVector::Ones(1));
  const RVector db = g_metric_diagonal(b);
  CHECK(db(0) == 2.0);
  CHECK(db(1) == 1.0);

  BundleCurvature big(1, 1);
  big(0, 0, 0, 0) = 3.0;
  try {
    adapt(fubini_study(1).R, big, 2.0, CVector::Ones(1));
    FAIL("expected LambdaTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LambdaTooSmall);
  }
}

TEST_CASE("adaptation diagonalizes the fiber slice") {
  std::mt19937_64 rng(71);
  const BundleCurvature rh = testing::random_bundle(rng, 3, 3);
  const CVector v = testing::random_unit(rng, 3);
  const ProjBundleInput in = adapt(fubini_study(3).R, rh, 50.0, v);
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(rh.fiber_slice(v).matrix());
  RVector xi(3);
  for (int i = 0; i < 3; ++i) xi(i) = in.xi(i);
  std::sort(xi.data(), xi.data() + 3);
  for (int i = 0; i < 3; ++i) CHECK(xi(i) == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-12));
  CHECK_THROWS_AS(adapt(fubini_study(3).R, rh, 50.0, CVector::Zero(3)), Error);
}

TEST_CASE("assembled curvature is Kahler symmetric") {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 5; ++t) {
    const ProjBundleInput in = random_input(rng, 2 + t % 2, 2 + t % 3, 40.0);
    const CurvaturePoint cp = g_curvature_at_origin(in);
    CHECK(symmetry_residual(cp.R.buffer()).value <= 1e-10);
  }
}

TEST_CASE("vertical block is projective space") {
  std::mt19937_64 rng(79);
  const ProjBundleInput in = random_input(rng, 2, 4, 30.0);
  const KahlerTensor R = g_curvature_coordinates(in);
  const CurvaturePoint fs = fubini_study(3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) CHECK(R(2 + a, 2 + b, 2 + c, 2 + d) == fs.R(a, b, c, d));
  // R_{σσ̄σσ̄} = 2|σ|⁴ and the mixed terms vanish identically.
  CVector x = CVector::Zero(5);
  const CVector s = testing::random_vector(rng, 3);
  x.tail(3) = s;
  CHECK(R.quartic(x) == doctest::Approx(2.0 * std::pow(s.squaredNorm(), 2)).epsilon(1e-14));
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int a = 2; a < 5; ++a)
        for (int b = 2; b < 5; ++b) {
          CHECK(R(i, a, k, b) == Complex(0.0));
          for (int c = 2; c < 5; ++c) CHECK(R(i, a, c, b) == Complex(0.0));
        }
}

TEST_CASE("ricci blocks match the tensor contraction") {
  std::mt19937_64 rng(83);
  for (int t = 0; t < 6; ++t) {
    const ProjBundleInput in = random_input(rng, 2 + t % 2, 1 + t % 4, 25.0);
    const RicciSplit f = ricci_split(in);
    const RicciSplit d = ricci_split_direct(in);
    CHECK((f.yy - d.yy).cwiseAbs().maxCoeff() <= 1e-9);
    if (in.r > 1) {
      CHECK((f.ys - d.ys).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK((f.ss - d.ss).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
  const ProjBundleInput s = split_input(3, {0, 0, -1}, 50.0, 2);
  const RicciSplit f = ricci_split(s);
  const RicciSplit d = ricci_split_direct(s);
  CHECK((f.ss - d.ss).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(f.ys.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flat data leave only the projective-space term") {
  const SplitBundleModel m{2, {0, 0, 0}};
  const ProjBundleInput in = adapt(KahlerTensor::zero(2), split_bundle_curvature(m), 4.0, CVector::Unit(3, 0));
  const RicciSplit f = ricci_split(in);
  CHECK((f.ss - 3.0 * CMatrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("phi pieces sum to the direct evaluation") {
  std::mt19937_64 rng(89);
  for (int t = 0; t < 4; ++t) {
    const ProjBundleInput in = random_input(rng, 2 + t % 2, 2 + t % 3, 30.0);
    for (int s = 0; s < 125; ++s) {
      const CVector y = testing::random_vector(rng, in.n);
      const CVector sig = testing::random_vector(rng, in.r - 1);
      const PhiBreakdown p = phi(in, y, sig);
      const double sum = p.phi0 + 2.0 * p.phi1.real() + p.phi2 + 2.0 * p.phi3.real() + p.phi4;
      CHECK(std::abs(p.total - sum) <= 1e-10 * std::max(1.0, std::abs(sum)));
      CHECK(std::abs(p.total - p.direct) <= 1e-9 * std::max(1.0, std::abs(p.direct)));
    }
  }
  const ProjBundleInput in = split_input(2, {0, 0}, 5.0);
  CHECK_THROWS_AS(phi(in, CVector::Zero(2), CVector::Zero(1)), Error);
}

TEST_CASE("pure vertical phi") {
  const ProjBundleInput in = split_input(3, {0, 0, -1}, 50.0);
  const CVector s = CVector::Unit(2, 0);
  const PhiBreakdown p = phi(in, CVector::Zero(3), s);
  CHECK(p.phi0 == 0.0);
  CHECK(p.phi4 == doctest::Approx(p.total));
  const RicciSplit rs = ricci_split(in);
  CHECK(p.phi4 == doctest::Approx(rs.ss(0, 0).real() - 2.0));
}

TEST_CASE("condition margin for split bundles") {
  CHECK(split_condition_margin({3, {0, 0, -1}}) == 1.0);
  CHECK(split_condition_margin({3, {2, 0, 0}}) == -2.0);
  CHECK(split_condition_margin({4, {1, 1, 1}}) == 3.0);
  CHECK(split_condition_margin({3, {3, 1, 0}}) == split_condition_margin({3, {5, 3, 2}}));

  CertifyOptions o;
  o.restarts = 8;
  o.seed = 4;
  for (const SplitBundleModel& m : {SplitBundleModel{3, {0, 0, -1}}, SplitBundleModel{3, {2, 0, 0}},
                                    SplitBundleModel{2, {1, -1}}, SplitBundleModel{1, {0}}}) {
    const MarginReport rep = condition_margin(fubini_study(m.base_dim).R, split_bundle_curvature(m), o);
    CHECK(std::abs(rep.value - split_condition_margin(m)) <= 1e-6);
  }
}

TEST_CASE("condition margin for tangent and cotangent bundles") {
  CertifyOptions o;
  o.restarts = 16;
  for (int n = 2; n <= 4; ++n) {
    const KahlerTensor fs = fubini_study(n).R;
    CHECK(condition_margin(fs, pn_tangent_bundle_curvature(n), o).value == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
    CHECK(condition_margin(fs, pn_cotangent_bundle_curvature(n), o).value ==
          doctest::Approx(n - 2.0).scale(1.0).epsilon(1e-6));
  }
  BundleCurvature wrong(2, 3);
  CHECK_THROWS_AS(condition_margin(fubini_study(2).R, wrong, o), Error);
}

TEST_CASE("lambda search") {
  CertifyOptions o;
  o.restarts = 8;
  const LambdaSearchReport rep = lambda_search(SplitBundleModel{3, {0, 0, -1}}, {50, 5, 10}, o);
  REQUIRE(rep.points.size() == 3);
  CHECK(rep.points[0].lambda == 5.0);
  REQUIRE(rep.first_positive);
  CHECK(*rep.first_positive == 5.0);
  CHECK(rep.stays_positive);
  CHECK(rep.points[0].min_ric_perp == doctest::Approx(0.2).epsilon(1e-6));

  const LambdaSearchReport two = lambda_search(SplitBundleModel{2, {1, 0}}, {5, 20}, o);
  for (const auto& p : two.points) {
    REQUIRE(p.vertical_margin);
    CHECK(*p.vertical_margin <= 0.0);
    CHECK(p.verdict == Verdict::Fails);
  }
  try {
    lambda_search(SplitBundleModel{2, {1, 0}}, {}, o);
    FAIL("expected EmptyGrid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyGrid);
  }
  try {
    lambda_search(SplitBundleModel{2, {3, 0}}, {2.0, 10.0}, o);
    FAIL("expected LambdaTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LambdaTooSmall);
  }
}

TEST_CASE("section normal degrees and the rational curve bound") {
  CHECK(section_normal_c1(3, {1, 0, 0}, 1) == 2);
  CHECK(section_normal_c1_total(3, {1, 0, 0}, 1) == 3);
  for (int i = 1; i <= 3; ++i) CHECK(section_normal_c1(3, {2, 2, 2}, i) == 0);
  CHECK_THROWS_AS(section_normal_c1(3, {1, 0, 0}, 4), Error);
  CHECK_THROWS_AS(section_normal_c1(2, {1, 0, 0}, 1), Error);
  CHECK(!rational_curve_bound(2, 0));
  CHECK(rational_curve_bound(3, 0));
  CHECK(rational_curve_bound(-1, 2));
  CHECK_THROWS_AS(rational_curve_bound(3, -1), Error);
}
