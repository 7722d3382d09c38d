#include "twaff/charform.hpp"

#include <doctest.h>

#include <random>

using namespace twaff;

namespace {

TorusPoint random_point(int l, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TorusPoint h(l);
  for (int i = 0; i < l; ++i) h(i) = u(rng);
  return h;
}

}  // namespace

TEST_CASE("Weyl group tables have the right size and signs") {
  const CharacterContext ctx(fold_from_tag("D4^3"));
  CHECK(ctx.weyl.size() == 12);
  int sum = 0;
  for (int s : ctx.weyl.signs) sum += s;
  CHECK(sum == 0);
}

TEST_CASE("denominator identity in double precision on small folds") {
  std::mt19937_64 rng(3);
  for (const char* tag : {"A2^2", "A3^2", "A4^2", "D4^3"}) {
    const CharacterContext ctx(fold_from_tag(tag));
    for (int i = 0; i < 50; ++i) {
      const TorusPoint h = random_point(ctx.fold.l(), rng);
      const cplx a = alternating_sum(ctx.weyl, ctx.rho_tau, h), d = denominator(ctx, h);
      CHECK(std::abs(a - d) <= 1e-9 * std::abs(d));
    }
  }
}

TEST_CASE("extended-precision denominator comparison on E6^2") {
  const FoldedData fd = fold_from_tag("E6^2");
  const auto orbit = signed_orbit(fd, fd.rho_tau);
  CHECK(orbit.size() == 1152);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> c(4);
    for (auto& x : c) x = u(rng);
    CHECK(compare_denominator_precise(fd, orbit, c).rel_err <= 1e-10);
  }
}

TEST_CASE("character at the identity is the twining dimension") {
  for (const char* tag : {"A3^2", "A4^2", "D4^3"}) {
    const CharacterContext ctx(fold_from_tag(tag));
    for (const auto& w : invariant_dominant_weights(ctx.fold, 4)) {
      const CharacterValue v = twisted_character(ctx, w, TorusPoint::Zero(ctx.fold.l()));
      CHECK(v.singular_fallback_used);
      CHECK(std::abs(v.value - cplx(to_double(twisted_dimension(ctx.fold, w)) * character_sign(ctx.tag(), w))) <=
            1e-8);
    }
  }
}

TEST_CASE("classical character at the identity is the Weyl dimension") {
  const RootSystem g2 = build_root_system(RootType::G2, 2);
  const WeightVector w{{Rational(1), Rational(1)}};
  const CharacterValue v = classical_character(g2, w, TorusPoint::Zero(2));
  CHECK(std::abs(v.value - to_double(weyl_dimension(g2, w))) <= 1e-8);
}

TEST_CASE("non-invariant weights have vanishing twisted character") {
  const CharacterContext ctx(fold_from_tag("A3^2"));
  const WeightVector w{{Rational(1), Rational(0), Rational(0)}};
  CHECK(twisted_character(ctx, w, TorusPoint::Constant(2, 0.3)).value == cplx(0));
}

TEST_CASE("twisted characters are orthonormal") {
  const CharacterContext ctx(fold_from_tag("A4^2"));
  const auto ws = invariant_dominant_weights(ctx.fold, 5);
  for (std::size_t i = 0; i < ws.size(); ++i)
    for (std::size_t j = 0; j < ws.size(); ++j)
      CHECK(std::abs(twisted_inner_product(ctx, ws[i], ws[j]) - cplx(i == j ? 1.0 : 0.0)) <= 1e-9);
}

TEST_CASE("radial Laplacian eigenvalue equation") {
  const CharacterContext ctx(fold_from_tag("A3^2"));
  const auto ws = invariant_dominant_weights(ctx.fold, 6);
  const RadialCheck rc = radial_laplacian_check(ctx, ws[4], 3, 11);
  CHECK(rc.analytic_eigenvalue > 0);
  CHECK(rc.residual <= 1e-12);
  CHECK(rc.fd_residual <= 1e-4);
}
