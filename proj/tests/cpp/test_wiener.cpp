#include "twaff/wiener.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

using namespace twaff;

TEST_CASE("Killing-orthonormal basis") {
  for (int n : {2, 3, 4}) {
    const auto b = killing_orthonormal_basis(n);
    CHECK(b.size() == static_cast<std::size_t>(n * n - 1));
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        CHECK(std::abs(-2.0 * n * (b[i] * b[j]).trace().real() - (i == j ? 1.0 : 0.0)) <= 1e-12);
  }
}

TEST_CASE("closed-form SU(2) exponential") {
  std::mt19937_64 rng(1);
  const PathSampler s(make_sun_model(2, 1), 1.0, 3);
  for (int i = 0; i < 10; ++i) {
    const CMatrix x = 5.0 * s.increment(rng);
    CHECK((exp_su(x) - CMatrix(x.exp())).norm() <= 1e-12);
  }
}

TEST_CASE("path samples satisfy the product recursion") {
  std::mt19937_64 rng(2);
  const PathSampler s(make_sun_model(3, 2), 1.0, 4);
  const PathSample p = s.sample(rng);
  CHECK(p.points.size() == 17);
  CHECK(p.times.back() == doctest::Approx(0.5));
  for (std::size_t j = 0; j + 1 < p.points.size(); ++j)
    CHECK((p.points[j + 1] - p.points[j] * exp_su(p.increments[j])).norm() <= 1e-12);
  CHECK_THROWS_AS(PathSampler(make_sun_model(2, 1), -1.0, 3), std::invalid_argument);
}

TEST_CASE("endpoint law at small scale") {
  const ChiSquareRecord rec = endpoint_law_check(1.0, 5, 20000, 3);
  CHECK(rec.dof > 10);
  CHECK(rec.p_value > 1e-3);
}

TEST_CASE("quasi-invariance and the smoothed path integral") {
  CMatrix y(2, 2);
  y << cplx(0, 0.7), 0, 0, cplx(0, -0.7);
  const StochasticRecord q = quasi_invariance_check(
      make_sun_model(2, 1), 1.0, 6, exponential_path(y), [](const CMatrix& z) { return z.trace().real(); }, 20000, 4);
  CHECK(std::abs(q.lhs - q.rhs) <= 4 * q.sigma);
  const StochasticRecord b =
      smoothed_berechnung_check(y, 1.0, 6, LinearClassTest{0, CMatrix::Identity(2, 2)}, 20000, 5);
  CHECK(b.rhs == doctest::Approx(2 * std::cos(0.7) * std::exp(-3.0 / 16)).epsilon(1e-10));
  CHECK(std::abs(b.lhs - b.rhs) <= 4 * b.sigma);
}

TEST_CASE("dyadic refinement gap shrinks with depth") {
  const RefinementRecord r = refinement_check(make_sun_model(2, 1), 1.0, 4, 8, 100, 7);
  CHECK(r.median_gap_fine < r.median_gap_coarse);
}
