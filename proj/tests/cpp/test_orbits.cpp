#include "twaff/json_io.hpp"
#include "twaff/orbits.hpp"

#include <doctest.h>

using namespace twaff;

namespace {

std::shared_ptr<const SUnModel> model(int n, int r) { return std::make_shared<const SUnModel>(make_sun_model(n, r)); }

}  // namespace

TEST_CASE("loop validation") {
  auto m = model(3, 2);
  std::vector<CMatrix> bad(9, CMatrix::Identity(3, 3));  // not anti-Hermitian
  CHECK_THROWS_AS(make_loop(m, bad, 0, 1), std::invalid_argument);
  std::vector<CMatrix> zero(9, CMatrix::Zero(3, 3));
  CHECK_THROWS_AS(make_loop(m, zero, 0, 0), std::invalid_argument);
  CHECK_NOTHROW(make_loop(m, zero, 0, 1));
  const TwistedLoop c = constant_loop(m, torus_algebra(*m, Eigen::VectorXd::Constant(1, 0.1)), 16, 0.5, 2);
  CHECK(c.intervals() == 16);
  CHECK(c.period() == doctest::Approx(0.5));
}

TEST_CASE("Killing form and loop pairing") {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 0) = cplx(0, 1);
  x(1, 1) = cplx(0, -1);
  CHECK(killing(x, x) == doctest::Approx(-8.0));
  CHECK(loop_pairing(std::vector<CMatrix>(5, x), std::vector<CMatrix>(5, x)) == doctest::Approx(-8.0));
}

TEST_CASE("alcove folding lands in the alcove and is idempotent") {
  auto m = model(4, 2);
  const Classifier cl(m);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd z(m->fold.l());
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = nd(rng);
    const Eigen::VectorXd f = fold_to_alcove(cl.context(), z);
    CHECK(in_alcove(cl.context(), f, 1e-9));
    CHECK((fold_to_alcove(cl.context(), f) - f).norm() <= 1e-12);
  }
}

TEST_CASE("constant loops classify to their construction point") {
  for (auto [n, r] : {std::pair{3, 2}, std::pair{3, 1}, std::pair{4, 2}}) {
    auto m = model(n, r);
    const Classifier cl(m);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
      Eigen::VectorXd z(m->fold.l());
      for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = nd(rng);
      const Eigen::VectorXd mu = fold_to_alcove(cl.context(), z);
      const AlcoveClass cls = cl.classify(cl.construct(mu, 32, 0.0, 0.8));
      CHECK((cls.coords - mu).norm() <= 1e-6);
      CHECK(cls.residual <= 1e-6);
    }
  }
}

TEST_CASE("gauge round trip, equivariance and shell") {
  const RoundTripRecord rt = orbit_round_trip_check(model(3, 2), 6, 128, 13);
  CHECK(rt.max_alcove_err <= 1e-6);
  CHECK(rt.max_equivariance <= 1e-6);
  CHECK(rt.max_shell_drift <= 1e-8);
}

TEST_CASE("CF4 integrator is fourth order") {
  for (auto [n, r] : {std::pair{3, 2}, std::pair{4, 2}}) {
    const OrderRecord ord = integrator_order_check(make_sun_model(n, r));
    CHECK(ord.min_ratio >= 8);
  }
}

TEST_CASE("unitary projection") {
  std::mt19937_64 rng(1);
  const CMatrix g = haar_sample(3, rng);
  CMatrix noisy = g;
  noisy(0, 1) += 1e-6;
  const CMatrix p = unitary_projection(noisy);
  CHECK((p.adjoint() * p - CMatrix::Identity(3, 3)).norm() <= 1e-12);
  CHECK((p - g).norm() <= 2e-6);
}

TEST_CASE("loop files round trip through JSON") {
  auto m = model(3, 2);
  const Classifier cl(m);
  const TwistedLoop loop = cl.construct(Eigen::VectorXd::Constant(1, 0.2), 8, 0.25, 1.5);
  const TwistedLoop back = loop_from_json(Json::parse(loop_to_json(loop).dump()));
  CHECK(back.samples.size() == loop.samples.size());
  CHECK(back.a == loop.a);
  CHECK(back.b == loop.b);
  for (std::size_t j = 0; j < loop.samples.size(); ++j) CHECK((back.samples[j] - loop.samples[j]).norm() == 0.0);
  Json broken = loop_to_json(loop);
  broken.erase("b");
  CHECK_THROWS_AS(loop_from_json(broken), std::invalid_argument);
}
