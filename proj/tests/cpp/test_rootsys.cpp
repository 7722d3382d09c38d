#include "twaff/rootsys.hpp"

#include <doctest.h>

using namespace twaff;

namespace {

WeightVector fundamental(int rank, int i) {
  WeightVector w;
  w.coords.assign(static_cast<std::size_t>(rank), Rational(0));
  w.coords[static_cast<std::size_t>(i)] = Rational(1);
  return w;
}

}  // namespace

TEST_CASE("root counts and Weyl orders match the classification") {
  const std::vector<std::pair<RootType, int>> types = {
      {RootType::A, 1}, {RootType::A, 4},  {RootType::B, 3}, {RootType::C, 3},  {RootType::D, 4},
      {RootType::D, 5}, {RootType::E6, 6}, {RootType::F4, 4}, {RootType::G2, 2}};
  for (auto [type, rank] : types) {
    CAPTURE(type_name(type, rank));
    const RootSystem r = build_root_system(type, rank);
    CHECK(r.roots.size() == classical_root_count(type, rank));
    CHECK(r.positive_roots.size() * 2 == r.roots.size());
    CHECK(r.simple_roots.size() == static_cast<std::size_t>(rank));
    CHECK(r.weyl_order() == classical_weyl_order(type, rank));
  }
}

TEST_CASE("Cartan matrix entries and reflections") {
  const RootSystem r = build_root_system(RootType::G2, 2);
  int off = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.cartan(i, i) == Rational(2));
    for (std::size_t j = 0; j < 2; ++j)
      if (i != j) off += static_cast<int>(boost::rational_cast<double>(r.cartan(i, j)));
  }
  CHECK(off == -4);  // -1 and -3
  for (const auto& a : r.roots)
    for (const auto& b : r.roots) {
      CHECK(r.is_root(r.reflect(a, b)));
      CHECK(r.reflect(a, r.reflect(a, b)) == b);
    }
}

TEST_CASE("rho is half the sum of positive roots and pairs to 1 with simple coroots") {
  for (auto [type, rank] : {std::pair{RootType::B, 3}, std::pair{RootType::F4, 4}, std::pair{RootType::E6, 6}}) {
    const RootSystem r = build_root_system(type, rank);
    QVector sum(r.ambient_dim(), Rational(0));
    for (const auto& a : r.positive_roots) sum = sum + a;
    CHECK(Rational(1, 2) * sum == r.rho);
    for (const auto& s : r.simple_roots) CHECK(r.inner(r.rho, r.coroot(s)) == Rational(1));
  }
}

TEST_CASE("highest root has maximal height") {
  const RootSystem r = build_root_system(RootType::E6, 6);
  CHECK(r.height(r.highest_root()) == Rational(11));
  const RootSystem f = build_root_system(RootType::F4, 4);
  CHECK(f.height(f.highest_root()) == Rational(11));
}

TEST_CASE("Weyl dimension formula on known representations") {
  CHECK(weyl_dimension(build_root_system(RootType::A, 2), WeightVector{{Rational(1), Rational(1)}}) == Rational(8));
  CHECK(weyl_dimension(build_root_system(RootType::E6, 6), fundamental(6, 0)) == Rational(27));
  const RootSystem g2 = build_root_system(RootType::G2, 2);
  const Rational d0 = weyl_dimension(g2, fundamental(2, 0)), d1 = weyl_dimension(g2, fundamental(2, 1));
  CHECK(((d0 == Rational(7) && d1 == Rational(14)) || (d0 == Rational(14) && d1 == Rational(7))));
  CHECK(weyl_dimension(build_root_system(RootType::F4, 4), WeightVector{std::vector<Rational>(4, Rational(0))}) ==
        Rational(1));
}

TEST_CASE("weights convert between labels and ambient coordinates") {
  const RootSystem r = build_root_system(RootType::D, 5);
  const WeightVector w{{Rational(1), Rational(0), Rational(2), Rational(0), Rational(1)}};
  CHECK(to_weight(r, to_ambient(r, w)) == w);
  CHECK(w.is_dominant());
  for (const auto& d : dominant_weights_below(r, 6.0)) CHECK(d.is_dominant());
}

TEST_CASE("type names parse back") {
  for (auto [type, rank] : {std::pair{RootType::A, 7}, std::pair{RootType::D, 4}, std::pair{RootType::G2, 2}}) {
    const auto parsed = parse_type_name(type_name(type, rank));
    CHECK(parsed.first == type);
    CHECK(parsed.second == rank);
  }
  CHECK_THROWS(parse_type_name("Q3"));
}
