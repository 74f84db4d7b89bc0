#include <doctest.h>

#include <cstdlib>

#include "helpers.hpp"
#include "ricperp/certifier.hpp"
#include "ricperp/error.hpp"

using namespace ricperp;

namespace {

CertifyOptions quick(std::uint64_t seed = 1, int restarts = 16) {
  CertifyOptions o;
  o.seed = seed;
  o.restarts = restarts;
  return o;
}

}  // namespace

TEST_CASE("verdict bands") {
  CHECK(verdict_for(1e-5) == Verdict::Positive);
  CHECK(verdict_for(1e-6) == Verdict::NonnegativeBoundary);
  CHECK(verdict_for(-1e-6) == Verdict::NonnegativeBoundary);
  CHECK(verdict_for(-2e-6) == Verdict::Fails);
}

TEST_CASE("options are validated") {
  CertifyOptions o;
  o.restarts = 0;
  CHECK_THROWS_AS(o.check(), Error);
  o = CertifyOptions{};
  o.step_tol = 0.0;
  CHECK_THROWS_AS(o.check(), Error);
}

TEST_CASE("sphere gradient matches finite differences") {
  std::mt19937_64 rng(41);
  const KahlerTensor R = testing::random_tensor(rng, 3);
  CMatrix quad(3, 3);
  for (int j = 0; j < 3; ++j) quad.col(j) = testing::random_vector(rng, 3);
  quad = 0.5 * (quad + quad.adjoint()).eval();
  SphereProblem p{&R, quad, -0.7};
  const CVector x = testing::random_vector(rng, 3);
  const CVector g = p.gradient(x);
  const double h = 1e-5;
  for (int j = 0; j < 3; ++j) {
    for (Complex dir : {Complex(1, 0), Complex(0, 1)}) {
      CVector xp = x, xm = x;
      xp(j) += h * dir;
      xm(j) -= h * dir;
      const double fd = (p.value(xp) - p.value(xm)) / (2 * h);
      const double an = (std::conj(g(j)) * dir).real();
      CHECK(fd == doctest::Approx(an).epsilon(1e-6));
    }
  }
}

TEST_CASE("Fubini-Study minimum orthogonal Ricci is n-1") {
  for (int n = 2; n <= 6; ++n) {
    const CurvaturePoint fs = fubini_study(n);
    const PositivityReport rep = min_ric_perp(fs.R, fs.g, quick());
    CHECK(rep.value == doctest::Approx(n - 1.0).epsilon(1e-9));
    CHECK(rep.verdict == Verdict::Positive);
    CHECK(rep.margin == rep.value);
    const CVector w = std::get<CVector>(rep.witness);
    CHECK(std::abs(ric_perp(fs.R, fs.g, w) - rep.value) <= 1e-8);
  }
}

TEST_CASE("product of two lines is a nonnegative boundary case") {
  const CurvaturePoint p1 = fubini_study(1);
  const auto [R, g] = product_tensor(p1.R, p1.g, p1.R, p1.g);
  const PositivityReport rep = min_ric_perp(R, g, quick());
  CHECK(std::abs(rep.value) <= 1e-6);
  CHECK(rep.verdict == Verdict::NonnegativeBoundary);
}

TEST_CASE("holomorphic sectional maximum") {
  const CurvaturePoint gr = type_I_dual(2, 2);
  const PositivityReport rep = max_holo_sect(gr.R, gr.g, quick());
  CHECK(rep.value == doctest::Approx(2.0).epsilon(1e-8));
  REQUIRE(rep.method.nu_bound);
  CHECK(rep.value <= *rep.method.nu_bound + 1e-10);
  const CurvaturePoint t3 = type_III_dual(3);
  CHECK(max_holo_sect(t3.R, t3.g, quick()).value == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(min_ric_perp(t3.R, t3.g, quick()).value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("negative orthogonal Ricci on a mixed-sign product") {
  const CurvaturePoint cp = curve_product(1.0, -2.0);
  const PositivityReport rep = min_ric_perp(cp.R, cp.g, quick());
  CHECK(rep.verdict == Verdict::Fails);
  CHECK(rep.value < -1e-3);
}

TEST_CASE("non-identity metrics report witnesses in original coordinates") {
  std::mt19937_64 rng(43);
  const KahlerTensor R = testing::random_tensor(rng, 3);
  const HermitianForm g = testing::random_metric(rng, 3);
  const PositivityReport rep = min_ric_perp(R, g, quick());
  const CVector w = std::get<CVector>(rep.witness);
  CHECK(norm_squared(g, w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(ric_perp(R, g, w) - rep.value) <= 1e-8);
}

TEST_CASE("grid oracle agrees with the optimizer in low dimension") {
  std::mt19937_64 rng(47);
  for (int n = 2; n <= 3; ++n) {
    const KahlerTensor R = testing::random_tensor(rng, n);
    CertifyOptions o = quick(3, 32);
    o.grid_oracle = true;
    const PositivityReport rep = min_ric_perp(R, HermitianForm::identity(n), o);
    REQUIRE(rep.method.grid_value);
    CHECK(*rep.method.grid_agrees);
    CHECK(std::abs(*rep.method.grid_value - rep.value) <= kGridAgreementTol);
  }
}

TEST_CASE("optimizer minimum never exceeds random sampling") {
  std::mt19937_64 rng(53);
  const int n = 4;
  const KahlerTensor R = testing::random_tensor(rng, n);
  const HermitianForm id = HermitianForm::identity(n);
  const PositivityReport rep = min_ric_perp(R, id, quick(5, 32));
  for (int s = 0; s < 2000; ++s) CHECK(ric_perp(R, id, testing::random_unit(rng, n)) >= rep.value - 1e-9);
}

TEST_CASE("reports are identical across thread counts") {
  std::mt19937_64 rng(59);
  const KahlerTensor R = testing::random_tensor(rng, 4);
  const HermitianForm id = HermitianForm::identity(4);
  CertifyOptions a = quick(9, 24);
  a.threads = 1;
  CertifyOptions b = a;
  b.threads = 5;
  const PositivityReport ra = min_ric_perp(R, id, a);
  const PositivityReport rb = min_ric_perp(R, id, b);
  CHECK(ra.value == rb.value);
  CHECK(std::get<CVector>(ra.witness) == std::get<CVector>(rb.witness));
  const PositivityReport qa = min_qb(R, a);
  const PositivityReport qb = min_qb(R, b);
  CHECK(qa.value == qb.value);
}

TEST_CASE("quadratic bisectional minimum") {
  // Fubini-Study: Σ (1 + δ)(a_m - a_p)² = 2n for unit sum-zero weights.
  const CurvaturePoint fs = fubini_study(3);
  const PositivityReport rep = min_qb(fs.R, quick());
  CHECK(rep.value == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(rep.method.heuristic);
  const auto& fw = std::get<FrameAndWeights>(rep.witness);
  CHECK_NOTHROW(fw.check());
  CHECK(std::abs(fw.weights.sum()) < 1e-12);
  CHECK(fw.weights.norm() == doctest::Approx(1.0));

  const CurvaturePoint cp = curve_product(1.0, -2.0);
  const PositivityReport neg = min_qb(cp.R, quick());
  CHECK(neg.verdict == Verdict::Fails);
  CHECK(std::abs(qb_form(cp.R, std::get<FrameAndWeights>(neg.witness)) - neg.value) <= 1e-12);

  CHECK_THROWS_AS(min_qb(fubini_study(1).R, quick()), Error);
}

TEST_CASE("opposite-curvature product has vanishing quadratic bisectional form") {
  const CurvaturePoint cp = curve_product(1.0, -1.0);
  const PositivityReport rep = min_qb(cp.R, quick());
  CHECK(std::abs(rep.value) <= 1e-9);
  CHECK(rep.verdict == Verdict::NonnegativeBoundary);
  // brute-force scan over U(2) frames parametrized by (theta, phases)
  RVector a(2);
  a << std::sqrt(0.5), -std::sqrt(0.5);
  double lo = 1e300, hi = -1e300;
  const int steps = 24;
  for (int t = 0; t <= steps; ++t) {
    const double th = 0.5 * M_PI * t / steps;
    for (int p = 0; p < steps; ++p) {
      const double ph = 2.0 * M_PI * p / steps;
      CMatrix U(2, 2);
      U << std::cos(th), -std::sin(th) * std::polar(1.0, -ph), std::sin(th) * std::polar(1.0, ph), std::cos(th);
      const double v = qb_form(cp.R, FrameAndWeights{U, a});
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  CHECK(std::abs(lo) <= 1e-12);
  CHECK(std::abs(hi) <= 1e-12);
}

TEST_CASE("quadratic bisectional minimum is below random frames") {
  std::mt19937_64 rng(61);
  const KahlerTensor R = testing::random_tensor(rng, 3);
  const PositivityReport rep = min_qb(R, quick(2, 32));
  std::normal_distribution<double> nd;
  for (int s = 0; s < 300; ++s) {
    RVector a(3);
    for (int i = 0; i < 3; ++i) a(i) = nd(rng);
    a.array() -= a.mean();
    a /= a.norm();
    CHECK(qb_form(R, FrameAndWeights{testing::random_unitary(rng, 3), a}) >= rep.value - 1e-9);
  }
}

TEST_CASE("nu report") {
  const CurvaturePoint fs = fubini_study(2);
  const PositivityReport rep = nu_report(fs.R, fs.g);
  CHECK(rep.value == doctest::Approx(2.0));
  CHECK(std::get<CVector>(rep.witness).size() == 3);
}

TEST_CASE("flat classification") {
  const double tol = 1e-9;
  const CurvaturePoint split = curve_product(1.0, -1.0);
  const FlatReport a = flat_ric_perp_classify(split.R, split.g, tol);
  CHECK(a.verdict == FlatVerdict::N2ConformallySplit);
  CHECK(a.max_abs_ric_perp <= 1e-12);

  const FlatReport b = flat_ric_perp_classify(KahlerTensor::zero(3), HermitianForm::identity(3), tol);
  CHECK(b.verdict == FlatVerdict::Flat);

  const CurvaturePoint fs = fubini_study(3);
  CHECK(flat_ric_perp_classify(fs.R, fs.g, tol).verdict == FlatVerdict::NotRicPerpFlat);

  try {
    flat_ric_perp_classify(fubini_study(1).R, HermitianForm::identity(1), tol);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("Einstein check") {
  for (int n = 2; n <= 6; ++n) {
    const CurvaturePoint fs = fubini_study(n);
    const EinsteinResult e = einstein_check(fs.R, fs.g, 1e-12);
    CHECK(e.einstein);
    CHECK(e.mu == n + 1.0);
  }
  const CurvaturePoint cp = curve_product(1.0, 2.0);
  CHECK(!einstein_check(cp.R, cp.g, 1e-9).einstein);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
  CHECK(split_seed(1, 0) != split_seed(1, 1));
  CHECK(split_seed(1, 0) == split_seed(1, 0));
}
