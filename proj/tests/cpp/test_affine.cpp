#include "twaff/affine.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace twaff;

namespace {

AffinePoint random_point(const AffineAlgebra& alg, double t, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  AffinePoint p{t, Eigen::VectorXcd(alg.l), Eigen::VectorXcd(alg.l)};
  for (int i = 0; i < alg.l; ++i) {
    p.h(i) = cplx(nd(rng), nd(rng));
    p.k(i) = cplx(nd(rng), nd(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("marks and comarks of the affine diagrams") {
  const AffineAlgebra a1(fold_from_tag("A1"));
  CHECK(a1.marks == std::vector<int>{1, 1});
  const AffineAlgebra a22(fold_from_tag("A2^2"));
  CHECK(a22.marks.size() == 2);
  CHECK(a22.comarks.size() == 2);
  CHECK(level(a22, AffineWeight{{1, 0}}) == a22.comarks[0]);
}

TEST_CASE("Poisson identity on random complex points") {
  std::mt19937_64 rng(17);
  for (const char* tag : {"A1", "A2^2", "A3^2"}) {
    const AffineAlgebra alg(fold_from_tag(tag));
    for (double t : {0.5, 2.0})
      for (int i = 0; i < 4; ++i) {
        const AffinePoint p = random_point(alg, t, rng);
        const SeriesValue lhs = numerator_lattice_side(alg, p), rhs = numerator_character_side(alg, p);
        CHECK(std::abs(lhs.value - rhs.value) <= 1e-8 * std::abs(lhs.value));
        CHECK(lhs.tail_bound <= 1e-12 * std::abs(lhs.value));
      }
  }
}

TEST_CASE("basic representation of A1 against the theta/eta product") {
  const AffineAlgebra a1(fold_from_tag("A1"));
  const double beta = 0.35, kre = 0.3;
  const double q = std::exp(-2 * std::numbers::pi * beta);
  const double ak = std::sqrt(2.0) * kre;
  double num = 0, phi = 1;
  for (int n = -30; n <= 30; ++n) num += std::exp(n * ak) * std::pow(q, n * n);
  for (int n = 1; n < 400; ++n) phi *= 1 - std::pow(q, n);
  Eigen::VectorXcd k(1);
  k(0) = kre;
  for (auto labels : {std::vector<int>{1, 0}}) {
    const cplx v = character_value(a1, AffineWeight{labels}, cplx(0, -beta), k);
    CHECK(std::abs(v - num / phi) <= 1e-9 * std::abs(num / phi));
  }
}

TEST_CASE("zero weight has normalized character one") {
  for (const char* tag : {"A2^2", "D4^3"}) {
    const AffineAlgebra alg(fold_from_tag(tag));
    Eigen::VectorXcd k = Eigen::VectorXcd::Constant(alg.l, 0.2);
    const cplx v = character_value(alg, AffineWeight{std::vector<int>(static_cast<std::size_t>(alg.l) + 1, 0)},
                                   cplx(0, -0.3), k);
    CHECK(std::abs(v - 1.0) <= 1e-12);
  }
}

TEST_CASE("numerator data rejects points outside the domain") {
  const AffineAlgebra alg(fold_from_tag("A2^2"));
  Eigen::VectorXcd k = Eigen::VectorXcd::Constant(1, 0.1);
  CHECK_THROWS_AS(numerator_data(alg, AffineWeight{{1, 0}}, cplx(0, 0.3), k), std::domain_error);
  CHECK_THROWS_AS(numerator_data(alg, AffineWeight{{1}}, cplx(0, -0.3), k), std::invalid_argument);
  CHECK_THROWS_AS(numerator_data(alg, AffineWeight{{-1, 0}}, cplx(0, -0.3), k), std::invalid_argument);
}

TEST_CASE("translation action is a group action preserving the shell") {
  const FoldedData fd = fold_from_tag("A3^2");
  const auto basis = m_lattice_basis(fd).basis;
  const AffineCartanElement x{fd.rho_tau, Rational(1, 3), Rational(2)};
  const AffineCartanElement ab = lattice_action(fd, basis[0], lattice_action(fd, basis[1], x));
  const AffineCartanElement sum = lattice_action(fd, basis[0] + basis[1], x);
  CHECK(ab == sum);
  // 2ab + (h, h)/killing_scale is invariant.
  auto shell = [&](const AffineCartanElement& y) {
    return Rational(2) * y.a * y.b + fd.base.inner(y.h, y.h) / fd.base.killing_scale;
  };
  CHECK(shell(sum) == shell(x));
  CHECK(lattice_action(fd, basis[0], x).b == x.b);
}
