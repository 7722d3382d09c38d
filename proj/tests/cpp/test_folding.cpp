#include "twaff/folding.hpp"

#include <doctest.h>

using namespace twaff;

TEST_CASE("fold table by family") {
  struct Row {
    const char* tag;
    const char* folded;
    const char* r1;
  };
  for (const Row& row : {Row{"A3^2", "C2", "B2"}, Row{"A5^2", "C3", "B3"}, Row{"A2^2", "BC1", "C1"},
                         Row{"A4^2", "BC2", "C2"}, Row{"D4^2", "B3", "C3"}, Row{"D5^2", "B4", "C4"},
                         Row{"D4^3", "G2", "G2"}, Row{"E6^2", "F4", "F4"}}) {
    CAPTURE(row.tag);
    const FoldedData fd = fold_from_tag(row.tag);
    CHECK(fd.folded_type() == row.folded);
    CHECK(fd.r1_type() == row.r1);
    CHECK(algebra_tag(fd) == row.tag);
  }
}

TEST_CASE("identity fold keeps the root system") {
  const FoldedData fd = fold(RootType::E6, 6, 1);
  CHECK(fd.l() == 6);
  CHECK(fd.folded_type() == "E6");
  CHECK(fd.r() == 1);
  CHECK(algebra_tag(fd) == "E6");
}

TEST_CASE("tau has the stated order and fixes the folded data") {
  for (const char* tag : {"A4^2", "D4^3", "E6^2"}) {
    const FoldedData fd = fold_from_tag(tag);
    for (const auto& a : fd.base.roots) {
      QVector v = a;
      for (int i = 0; i < fd.r(); ++i) v = fd.tau(v);
      CHECK(v == a);
      CHECK(fd.base.is_root(fd.tau(a)));
    }
    for (const auto& b : fd.fixed_basis) CHECK(fd.tau(b) == b);
    CHECK(fd.tau(fd.rho_tau) == fd.rho_tau);
  }
}

TEST_CASE("rho^tau is half the sum of the positive roots of R^1") {
  for (const char* tag : {"A3^2", "A4^2", "D5^2", "D4^3", "E6^2"}) {
    CAPTURE(tag);
    const FoldedData fd = fold_from_tag(tag);
    QVector sum(fd.base.ambient_dim(), Rational(0));
    for (const auto& a : fd.r1.positive_roots) sum = sum + a;
    CHECK(Rational(1, 2) * sum == fd.rho_tau);
  }
}

TEST_CASE("projection is idempotent and lands in LS0") {
  const FoldedData fd = fold_from_tag("D4^3");
  for (const auto& a : fd.base.roots) {
    const QVector p = fd.project(a);
    CHECK(fd.project(p) == p);
    CHECK(fd.tau(p) == p);
  }
}

TEST_CASE("Weyl group orders of the folded systems") {
  CHECK(weyl_group_orders(fold_from_tag("D4^3")).order_W_tau == 12);
  CHECK(weyl_group_orders(fold_from_tag("E6^2")).order_W_tau == 1152);
  CHECK(weyl_group_orders(fold_from_tag("A5^2")).order_W_tau == 48);
}

TEST_CASE("tau-invariance of weights") {
  const FoldedData fd = fold_from_tag("A3^2");
  CHECK(fd.is_tau_invariant(WeightVector{{Rational(0), Rational(1), Rational(0)}}));
  CHECK(fd.is_tau_invariant(WeightVector{{Rational(1), Rational(0), Rational(1)}}));
  CHECK_FALSE(fd.is_tau_invariant(WeightVector{{Rational(1), Rational(0), Rational(0)}}));
}

TEST_CASE("malformed tags are rejected") {
  CHECK_THROWS(fold_from_tag("B3^2"));
  CHECK_THROWS(fold_from_tag("A3^5"));
  CHECK_THROWS(fold_from_tag("nonsense"));
}
