#include "twaff/grouprep.hpp"

#include <doctest.h>

using namespace twaff;

TEST_CASE("pinning equations are solved exactly") {
  for (int n : {3, 4, 5}) {
    const SUnModel m = make_sun_model(n, 2);
    CHECK(pinning_residual(m) <= 1e-12);
    const CMatrix x = m.tau(m.tau(CMatrix::Identity(n, n)));
    CHECK((x - CMatrix::Identity(n, n)).norm() <= 1e-12);
  }
  const SUnModel m3 = make_sun_model(3, 2);
  CHECK(std::abs(m3.J(0, 2) * m3.J(2, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(m3.J(0, 0)) == doctest::Approx(0.0));
}

TEST_CASE("tau is an involutive automorphism") {
  const SUnModel m = make_sun_model(4, 2);
  std::mt19937_64 rng(2);
  const CMatrix a = haar_sample(4, rng), b = haar_sample(4, rng);
  CHECK((m.tau(a * b) - m.tau(a) * m.tau(b)).norm() <= 1e-12);
  CHECK((m.tau(m.tau(a)) - a).norm() <= 1e-12);
}

TEST_CASE("Haar samples lie in SU(n)") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const CMatrix g = haar_sample(3, rng);
    CHECK((g.adjoint() * g - CMatrix::Identity(3, 3)).norm() <= 1e-12);
    CHECK(std::abs(g.determinant() - cplx(1)) <= 1e-12);
  }
}

TEST_CASE("bialternant characters agree with representation traces") {
  const SUnModel m = make_sun_model(4, 1);
  std::mt19937_64 rng(6);
  const RepModel w2 = make_rep(m, RepKind::Exterior, 2), ad = make_rep(m, RepKind::Adjoint);
  for (int i = 0; i < 5; ++i) {
    const CMatrix g = haar_sample(4, rng);
    CHECK(std::abs(sun_character({0, 1, 0}, g) - w2.rho(g).trace()) <= 1e-10);
    CHECK(std::abs(sun_character({1, 0, 1}, g) - ad.rho(g).trace()) <= 1e-10);
  }
}

TEST_CASE("intertwiners and the calibrated sign") {
  const SUnModel m = make_sun_model(3, 2);
  RepModel ad = make_rep(m, RepKind::Adjoint);
  ad.T = solve_intertwiner(m, ad);
  CHECK((ad.T * ad.T - CMatrix::Identity(ad.dim, ad.dim)).norm() <= 1e-10);
  const Calibration cal = calibrate_sign(m, ad, 20, 1);
  CHECK(cal.max_err <= 1e-8);
  CHECK(std::abs(std::abs(ad.T.trace().real()) - 2) <= 1e-10);
  CHECK(std::abs(pinned_adjoint_lift(m).trace().real() + 2) <= 1e-10);
  RepModel def = make_rep(make_sun_model(5, 2), RepKind::Defining);
  CHECK_THROWS(solve_intertwiner(make_sun_model(5, 2), def));
}

TEST_CASE("heat kernel normalization") {
  // Long times flatten the kernel to the constant 1.
  const HeatKernel flat(3, 400.0, 1e-14);
  std::mt19937_64 rng(8);
  CHECK(flat(haar_sample(3, rng)) == doctest::Approx(1.0).epsilon(1e-8));
  const HeatKernel hk(2, 1.0, 1e-14);
  CHECK(hk.terms() > 5);
  CHECK(hk.tail_bound() <= 1e-14);
}

TEST_CASE("Weyl integral formula for Gtau") {
  const SUnModel m = make_sun_model(3, 2);
  const auto one = weyl_integral_check(m, [](const CMatrix&) { return 1.0; }, 100, 12, 0, 1);
  CHECK(std::abs(one.torus_value - 1) <= 1e-10);
  RepModel ad = make_rep(m, RepKind::Adjoint);
  ad.T = solve_intertwiner(m, ad);
  const auto sq = weyl_integral_check(
      m, [&](const CMatrix& g) { return std::norm((ad.rho(g) * ad.T).trace()); }, 20000, 16, 3, 2);
  CHECK(std::abs(sq.torus_value - 1) <= 1e-10);
  CHECK(std::abs(sq.mc.mean - 1) <= 4 * sq.mc.sigma);
}

TEST_CASE("heat-kernel route on A1 at desk scale") {
  const SUnModel m = make_sun_model(2, 1);
  const AffineAlgebra alg(m.fold);
  AffinePoint p{1.0, Eigen::VectorXcd::Constant(1, cplx(0, 0.7)), Eigen::VectorXcd::Constant(1, cplx(0, -0.4))};
  const HeatPropRecord rec = heatprop_check(m, alg, p, 20000, 3);
  CHECK(rec.strata == 1);
  CHECK(std::abs(rec.lhs - rec.rhs) <= 4 * rec.sigma);
  CHECK(rec.rel_err <= 2e-2);
  AffinePoint bad = p;
  bad.h(0) = cplx(0.3, 0.7);
  CHECK_THROWS_AS(heatprop_check(m, alg, bad, 10, 3), std::invalid_argument);
}

TEST_CASE("twisted convolution of the adjoint character") {
  const SUnModel m = make_sun_model(3, 2);
  RepModel ad = make_rep(m, RepKind::Adjoint);
  ad.T = solve_intertwiner(m, ad);
  std::mt19937_64 rng(12);
  const CMatrix g1 = haar_sample(3, rng), g2 = haar_sample(3, rng);
  const ConvolutionRecord rec = twisted_convolution_check(m, ad, g1, g2, 20000, 9);
  CHECK(std::abs(rec.lhs_re.mean - rec.rhs.real()) <= 4 * rec.lhs_re.sigma + 1e-12);
  CHECK(std::abs(rec.lhs_im.mean - rec.rhs.imag()) <= 4 * rec.lhs_im.sigma + 1e-12);
}

TEST_CASE("Monte Carlo is deterministic in the seed and thread count") {
  const SUnModel m = make_sun_model(2, 1);
  const AffineAlgebra alg(m.fold);
  AffinePoint p{1.0, Eigen::VectorXcd::Constant(1, cplx(0, 0.7)), Eigen::VectorXcd::Constant(1, cplx(0, -0.4))};
  const HeatPropRecord a = heatprop_check(m, alg, p, 5000, 21, 1e-10, 1);
  const HeatPropRecord b = heatprop_check(m, alg, p, 5000, 21, 1e-10, 3);
  CHECK(a.rhs == b.rhs);
  CHECK(a.sigma == b.sigma);
}
