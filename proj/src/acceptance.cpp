#include "twaff/acceptance.hpp"

#include "twaff/orbits.hpp"
#include "twaff/wiener.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace twaff {

namespace {

// Pinned tolerances.
constexpr double kDenominatorTol = 1e-10;
constexpr double kOrthonormalityTol = 1e-9;
constexpr double kCharacterTol = 1e-8;
constexpr double kIntegerTol = 1e-10;
constexpr double kPoissonTol = 1e-8;
constexpr double kHeatRelTol = 2e-2;
constexpr double kSigmaBand = 3.0;
constexpr double kHalvingLow = 1.5;  // sigma(n) / sigma(4n), ideally 2
constexpr double kHalvingHigh = 2.5;
constexpr double kTorusTol = 1e-10;
constexpr double kAlcoveTol = 1e-6;
constexpr double kEquivarianceTol = 1e-6;
constexpr double kShellTol = 1e-8;
constexpr double kOrderRatio = 8.0;
constexpr double kRadialTol = 1e-12;
constexpr double kRadialFdTol = 1e-4;
constexpr double kPValueFloor = 0.01;
constexpr double kStochasticRelTol = 5e-2;
constexpr double kEndToEndTol = 2e-2;
constexpr double kUnitTol = 1e-10;

using Clock = std::chrono::steady_clock;

std::string fmt(double x, int prec = 3) {
  std::ostringstream s;
  s << std::setprecision(prec) << x;
  return s.str();
}

Json weight_json(const WeightVector& w) { return to_json(w.coords); }

CriterionResult folding_table(const AcceptanceOptions&) {
  struct Row {
    const char* tag;
    const char* folded;
    const char* r1;
  };
  // A_{2n-1} -> C_n, A_{2n} -> BC_n, D_n -> B_{n-1}, D4 -> G2, E6 -> F4; several ranks per family.
  const std::vector<Row> rows = {{"A3^2", "C2", "B2"},  {"A5^2", "C3", "B3"},  {"A7^2", "C4", "B4"},
                                 {"A2^2", "BC1", "C1"}, {"A4^2", "BC2", "C2"}, {"A6^2", "BC3", "C3"},
                                 {"D4^2", "B3", "C3"},  {"D5^2", "B4", "C4"},  {"D6^2", "B5", "C5"},
                                 {"D4^3", "G2", "G2"},  {"E6^2", "F4", "F4"}};
  CriterionResult r;
  r.pass = true;
  r.details["rows"] = Json::array();
  int matched = 0;
  for (const auto& row : rows) {
    const FoldedData fd = fold_from_tag(row.tag);
    const bool ok = fd.folded_type() == row.folded && fd.r1_type() == row.r1;
    matched += ok;
    r.pass = r.pass && ok;
    r.details["rows"].push_back(
        {{"tag", row.tag}, {"folded_type", fd.folded_type()}, {"r1", fd.r1_type()}, {"match", ok}});
  }
  r.summary = std::to_string(matched) + "/" + std::to_string(rows.size()) + " rows exact";
  return r;
}

CriterionResult denominator_identity(const AcceptanceOptions& opt) {
  CriterionResult r;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0;
  for (const char* tag : {"A3^2", "A4^2", "D4^3", "D5^2", "E6^2"}) {
    const FoldedData fd = fold_from_tag(tag);
    const auto orbit = signed_orbit(fd, fd.rho_tau);
    double mx = 0;
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> c(static_cast<std::size_t>(fd.l()));
      for (auto& x : c) x = u(rng);
      mx = std::max(mx, compare_denominator_precise(fd, orbit, c).rel_err);
    }
    r.details[tag] = {{"points", 1000}, {"max_rel_err", mx}};
    worst = std::max(worst, mx);
  }
  r.pass = worst <= kDenominatorTol;
  r.summary = "max rel err " + fmt(worst) + " <= " + fmt(kDenominatorTol);
  r.details["tolerance"] = kDenominatorTol;
  return r;
}

CriterionResult orthonormality(const AcceptanceOptions&) {
  CriterionResult r;
  double worst = 0;
  for (const char* tag : {"A3^2", "A4^2"}) {
    const CharacterContext ctx(fold_from_tag(tag));
    const auto ws = invariant_dominant_weights(ctx.fold, 10);
    double mx = 0;
    for (std::size_t i = 0; i < ws.size(); ++i)
      for (std::size_t j = 0; j < ws.size(); ++j)
        mx = std::max(mx, std::abs(twisted_inner_product(ctx, ws[i], ws[j]) - cplx(i == j ? 1.0 : 0.0)));
    r.details[tag] = {{"weights", ws.size()}, {"max_dev", mx}};
    worst = std::max(worst, mx);
  }
  r.pass = worst <= kOrthonormalityTol;
  r.summary = "max |<chi_l, chi_m> - delta| " + fmt(worst) + " <= " + fmt(kOrthonormalityTol);
  return r;
}

CriterionResult character_oracle(const AcceptanceOptions& opt) {
  struct Case {
    const char* name;
    int n;
    RepKind kind;
    int k;
  };
  CriterionResult r;
  r.pass = true;
  double worst = 0;
  std::string dims;
  for (const Case& c : {Case{"A2 adjoint", 3, RepKind::Adjoint, 1}, Case{"A3 omega2", 4, RepKind::Exterior, 2},
                        Case{"A3 adjoint", 4, RepKind::Adjoint, 1}}) {
    const SUnModel m = make_sun_model(c.n, 2);
    RepModel rep = make_rep(m, c.kind, c.k);
    rep.T = solve_intertwiner(m, rep);
    const Calibration cal = calibrate_sign(m, rep, 100, opt.seed);
    const Rational dim = twisted_dimension(m.fold, rep.lambda);
    const double trace = cal.sign * rep.T.trace().real();
    const bool integral = dim.denominator() == 1;
    const bool matches = std::abs(to_double(dim) - trace) <= kIntegerTol;
    Json d = {{"sign", cal.sign},
              {"points", 100},
              {"max_err", cal.max_err},
              {"twining_dimension", to_string(dim)},
              {"signed_tau_trace", trace}};
    if (c.kind == RepKind::Adjoint && c.n == 3) {
      // Pinned lift on the adjoint carrier; its trace is the twining dimension of the pinning.
      const double pinned = pinned_adjoint_lift(m).trace().real();
      d["pinned_lift_trace"] = pinned;
      d["pinned_highest_sign"] = rep.pinned_highest_sign;
      const bool pinned_ok = std::abs(pinned + 2) <= kIntegerTol &&
                             std::abs(rep.pinned_highest_sign * to_double(dim) - pinned) <= kIntegerTol;
      r.pass = r.pass && pinned_ok;
      d["pinned_match"] = pinned_ok;
    }
    r.details[c.name] = d;
    worst = std::max(worst, cal.max_err);
    r.pass = r.pass && integral && matches && cal.max_err <= kCharacterTol;
    dims += std::string(dims.empty() ? "" : ", ") + to_string(dim);
  }
  r.summary = "max |chi - s tr(rho T)| " + fmt(worst) + " <= " + fmt(kCharacterTol) + "; twining dims " + dims;
  return r;
}

CriterionResult poisson_identity(const AcceptanceOptions& opt) {
  CriterionResult r;
  std::mt19937_64 rng(opt.seed);
  // Unit scale keeps the points off the zero locus of the alternating numerator, where
  // double-precision cancellation alone would dominate the relative error.
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst = 0;
  for (const char* tag : {"A1", "A2^2", "A3^2", "A4^2", "D4^3"}) {
    const AffineAlgebra alg(fold_from_tag(tag));
    double mx = 0;
    for (double t : {0.5, 1.0, 2.0})
      for (int trial = 0; trial < 20; ++trial) {
        AffinePoint p{t, Eigen::VectorXcd(alg.l), Eigen::VectorXcd(alg.l)};
        for (int i = 0; i < alg.l; ++i) {
          p.h(i) = cplx(nd(rng), nd(rng));
          p.k(i) = cplx(nd(rng), nd(rng));
        }
        const cplx lhs = numerator_lattice_side(alg, p).value;
        const cplx rhs = numerator_character_side(alg, p).value;
        mx = std::max(mx, std::abs(lhs - rhs) / std::abs(lhs));
      }
    r.details[tag] = {{"points", 60}, {"max_rel_err", mx}};
    worst = std::max(worst, mx);
  }
  r.pass = worst <= kPoissonTol;
  r.summary = "max rel err " + fmt(worst) + " <= " + fmt(kPoissonTol);
  return r;
}

CriterionResult heat_route(const AcceptanceOptions& opt) {
  struct Pair {
    double h, k;
  };
  // Pairs fixed in advance from a pilot variance scan on an unrelated seed.
  const std::vector<std::pair<int, std::vector<Pair>>> cases = {{2, {{0.7, -0.4}, {1.1, 0.6}}},
                                                                {3, {{0.25, 5.0}, {0.25, 6.0}}}};
  constexpr std::size_t n_mc = 200000;
  CriterionResult r;
  r.pass = true;
  double worst = 0, worst_ratio = 2;
  std::uint64_t seed = opt.seed;
  r.details["cases"] = Json::array();
  for (const auto& [n, pairs] : cases) {
    const SUnModel m = make_sun_model(n, n == 2 ? 1 : 2);
    const AffineAlgebra alg(m.fold);
    for (const Pair& pr : pairs) {
      AffinePoint p{1.0, Eigen::VectorXcd::Constant(alg.l, cplx(0, pr.h)),
                    Eigen::VectorXcd::Constant(alg.l, cplx(0, pr.k))};
      const HeatPropRecord full = heatprop_check(m, alg, p, n_mc, ++seed, 1e-10, opt.threads);
      const HeatPropRecord quarter = heatprop_check(m, alg, p, n_mc / 4, ++seed, 1e-10, opt.threads);
      const double err = std::abs(full.lhs - full.rhs);
      const double ratio = quarter.sigma / full.sigma;
      const bool ok = full.rel_err <= kHeatRelTol && err <= kSigmaBand * full.sigma && ratio >= kHalvingLow &&
                      ratio <= kHalvingHigh;
      r.pass = r.pass && ok;
      worst = std::max(worst, full.rel_err);
      if (std::abs(ratio - 2) > std::abs(worst_ratio - 2)) worst_ratio = ratio;
      r.details["cases"].push_back({{"algebra", m.fold.r() == 1 ? "A1" : "A2^2"},
                                    {"h", pr.h},
                                    {"k", pr.k},
                                    {"t", 1.0},
                                    {"lhs", full.lhs.real()},
                                    {"rhs", full.rhs},
                                    {"sigma", full.sigma},
                                    {"rel_err", full.rel_err},
                                    {"err_over_sigma", err / full.sigma},
                                    {"strata", full.strata},
                                    {"quarter_rel_err", quarter.rel_err},
                                    {"sigma_ratio_quarter_to_full", ratio},
                                    {"seed", full.seed},
                                    {"pass", ok}});
    }
  }
  r.summary = "max rel err " + fmt(worst) + " <= " + fmt(kHeatRelTol) + ", within " + fmt(kSigmaBand, 2) +
              " sigma; sigma(n/4)/sigma(n) " + fmt(worst_ratio);
  return r;
}

CriterionResult weyl_integral(const AcceptanceOptions& opt) {
  CriterionResult r;
  const SUnModel m = make_sun_model(4, 2);
  const auto one = weyl_integral_check(m, [](const CMatrix&) { return 1.0; }, 1000, 16, 0, opt.seed, opt.threads);
  RepModel rep = make_rep(m, RepKind::Exterior, 2);
  rep.T = solve_intertwiner(m, rep);
  const auto sq = weyl_integral_check(
      m, [&](const CMatrix& g) { return std::norm((rep.rho(g) * rep.T).trace()); }, 100000, 16, 3, opt.seed + 1,
      opt.threads);
  const double z = std::abs(sq.mc.mean - 1) / sq.mc.sigma;
  r.pass = std::abs(one.torus_value - 1) <= kTorusTol && std::abs(one.mc.mean - 1) <= kTorusTol && z <= kSigmaBand;
  r.details = {{"constant", {{"mc", one.mc.mean}, {"torus", one.torus_value}}},
               {"omega2_squared",
                {{"mc", sq.mc.mean}, {"sigma", sq.mc.sigma}, {"n_mc", 100000}, {"torus", sq.torus_value}}}};
  r.summary = "f=1 torus dev " + fmt(std::abs(one.torus_value - 1)) + "; |chi_w2|^2 MC " + fmt(sq.mc.mean, 5) +
              " +- " + fmt(sq.mc.sigma, 2) + " (" + fmt(z, 2) + " sigma)";
  return r;
}

CriterionResult orbit_round_trip(const AcceptanceOptions& opt) {
  CriterionResult r;
  r.pass = true;
  double alcove = 0, equiv = 0, shell = 0, ratio = 1e300;
  for (int n : {3, 4}) {
    auto model = std::make_shared<const SUnModel>(make_sun_model(n, 2));
    const RoundTripRecord rt = orbit_round_trip_check(model, 100, 128, opt.seed + static_cast<std::uint64_t>(n));
    const OrderRecord ord = integrator_order_check(*model);
    alcove = std::max(alcove, rt.max_alcove_err);
    equiv = std::max(equiv, rt.max_equivariance);
    shell = std::max(shell, rt.max_shell_drift);
    ratio = std::min(ratio, ord.min_ratio);
    r.details["SU(" + std::to_string(n) + ")/2"] = {{"trials", rt.trials},
                                                    {"max_alcove_err", rt.max_alcove_err},
                                                    {"max_equivariance", rt.max_equivariance},
                                                    {"max_shell_drift", rt.max_shell_drift},
                                                    {"max_steps", rt.max_steps},
                                                    {"order_steps", ord.steps},
                                                    {"order_errors", ord.errors},
                                                    {"min_ratio", ord.min_ratio}};
  }
  r.pass = alcove <= kAlcoveTol && equiv <= kEquivarianceTol && shell <= kShellTol && ratio >= kOrderRatio;
  r.summary = "alcove " + fmt(alcove) + ", equivariance " + fmt(equiv) + ", shell " + fmt(shell) +
              ", step-halving ratio >= " + fmt(ratio, 4);
  return r;
}

CriterionResult radial_laplacian(const AcceptanceOptions& opt) {
  CriterionResult r;
  const CharacterContext ctx(fold_from_tag("A3^2"));
  auto pool = invariant_dominant_weights(ctx.fold, 20);
  std::mt19937_64 rng(opt.seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(5);
  double an = 0, fd = 0;
  r.details["weights"] = Json::array();
  for (const auto& w : pool) {
    const RadialCheck rc = radial_laplacian_check(ctx, w, 5, opt.seed);
    an = std::max(an, rc.residual);
    fd = std::max(fd, rc.fd_residual);
    r.details["weights"].push_back({{"lambda", weight_json(w)},
                                    {"eigenvalue", rc.analytic_eigenvalue},
                                    {"residual", rc.residual},
                                    {"fd_residual", rc.fd_residual}});
  }
  r.pass = an <= kRadialTol && fd <= kRadialFdTol;
  r.summary = "analytic " + fmt(an) + " <= " + fmt(kRadialTol) + ", finite-difference " + fmt(fd) +
              " <= " + fmt(kRadialFdTol);
  return r;
}

CriterionResult wiener_checks(const AcceptanceOptions& opt) {
  CriterionResult r;
  const ChiSquareRecord chi = endpoint_law_check(1.0, 10, 100000, opt.seed, opt.threads);
  const SUnModel m2 = make_sun_model(2, 1);
  CMatrix y(2, 2);
  y << cplx(0, 0.7), 0, 0, cplx(0, -0.7);
  const StochasticRecord q = quasi_invariance_check(
      m2, 1.0, 8, exponential_path(y), [](const CMatrix& z) { return z.trace().real(); }, 100000, opt.seed + 1,
      opt.threads);
  const StochasticRecord b = smoothed_berechnung_check(y, 1.0, 10, LinearClassTest{0, CMatrix::Identity(2, 2)},
                                                       100000, opt.seed + 2, opt.threads);
  auto stoch_ok = [](const StochasticRecord& s) {
    return std::abs(s.lhs - s.rhs) <= kSigmaBand * s.sigma && s.rel_err <= kStochasticRelTol;
  };
  auto stoch_json = [](const StochasticRecord& s) {
    return Json{{"lhs", s.lhs}, {"rhs", s.rhs}, {"sigma", s.sigma}, {"rel_err", s.rel_err},
                {"n_paths", s.n_paths}, {"depth", s.depth}, {"seed", s.seed}};
  };
  r.pass = chi.p_value > kPValueFloor && stoch_ok(q) && stoch_ok(b);
  r.details = {{"endpoint", {{"chi2", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value},
                             {"n_paths", chi.n_paths}, {"depth", chi.depth}}},
               {"quasi_invariance", stoch_json(q)},
               {"berechnung", stoch_json(b)}};
  r.summary = "endpoint p " + fmt(chi.p_value) + "; quasi rel " + fmt(q.rel_err) + " (" +
              fmt(std::abs(q.lhs - q.rhs) / q.sigma, 2) + " sigma); smoothed rel " + fmt(b.rel_err) + " (" +
              fmt(std::abs(b.lhs - b.rhs) / b.sigma, 2) + " sigma)";
  return r;
}

CriterionResult end_to_end(const AcceptanceOptions& opt) {
  CriterionResult r;
  const SUnModel m = make_sun_model(3, 2);
  const AffineAlgebra alg(m.fold);
  const cplx b(0, -0.4);
  Eigen::VectorXcd k(1);
  k(0) = 0.37;
  const AffineWeight lambda{{1, 0}}, zero{{0, 0}};
  constexpr std::size_t n_mc = 200000;
  // Heat route per numerator: exp(log_prefactor) * prefactor * E[u], evaluated on M.
  auto heat_numerator_log = [&](const AffineWeight& w, std::uint64_t seed, double* rel_sigma) {
    const NumeratorData d = numerator_data(alg, w, b, k);
    double pref = 0;
    const MonteCarloEstimate mc = heatprop_group_side(m, alg, d.scaled_point, n_mc, seed, 1e-12, opt.threads, &pref);
    *rel_sigma = mc.sigma / std::abs(mc.mean);
    return d.log_prefactor + std::log(cplx(pref * mc.mean));
  };
  double s_l = 0, s_0 = 0, s_00 = 0;
  const cplx log_l = heat_numerator_log(lambda, opt.seed, &s_l);
  const cplx log_0 = heat_numerator_log(zero, opt.seed + 1, &s_0);
  const cplx assembled = std::exp(log_l - log_0);
  const cplx direct = character_value(alg, lambda, b, k);
  const double rel = std::abs(assembled - direct) / std::abs(direct);
  const cplx direct0 = character_value(alg, zero, b, k);
  const cplx assembled0 = std::exp(heat_numerator_log(zero, opt.seed + 1, &s_00) - log_0);
  r.pass = rel <= kEndToEndTol && std::abs(direct0 - 1.0) <= kUnitTol && std::abs(assembled0 - 1.0) <= kUnitTol;
  r.details = {{"algebra", "A2^2"},
               {"labels", lambda.labels},
               {"b", to_json(b)},
               {"K", 0.37},
               {"level", level(alg, lambda)},
               {"n_mc", n_mc},
               {"character_value", to_json(direct)},
               {"heat_assembled", to_json(assembled)},
               {"rel_err", rel},
               {"rel_sigma", std::hypot(s_l, s_0)},
               {"zero_weight_direct", to_json(direct0)},
               {"zero_weight_assembled", to_json(assembled0)}};
  r.summary = "ch " + fmt(direct.real(), 6) + " vs heat route " + fmt(assembled.real(), 6) + " (rel " + fmt(rel) +
              "); Lambda=0 gives " + fmt(std::abs(direct0 - 1.0)) + " off 1";
  return r;
}

struct Entry {
  const char* name;
  double budget;
  CriterionResult (*fn)(const AcceptanceOptions&);
};

const Entry kEntries[kCriterionCount] = {
    {"folding table", 1, folding_table},
    {"denominator identity", 10, denominator_identity},
    {"twisted orthonormality", 30, orthonormality},
    {"character oracle", 30, character_oracle},
    {"Poisson identity", 300, poisson_identity},
    {"heat-kernel route", 600, heat_route},
    {"Weyl integral formula", 120, weyl_integral},
    {"orbit classification", 300, orbit_round_trip},
    {"radial Laplacian", 10, radial_laplacian},
    {"Wiener checks", 600, wiener_checks},
    {"end-to-end character", 600, end_to_end},
};

}  // namespace

std::uint64_t criterion_seed(std::uint64_t master, int id) {
  // splitmix64 finalizer
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  if (id < 1 || id > kCriterionCount) throw std::out_of_range("criterion id must be in 1..11");
  const Entry& e = kEntries[id - 1];
  AcceptanceOptions sub = opt;
  sub.seed = criterion_seed(opt.seed, id);
  const auto t0 = Clock::now();
  CriterionResult r;
  try {
    r = e.fn(sub);
  } catch (const std::exception& ex) {
    r.pass = false;
    r.summary = std::string("error: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.id = id;
  r.name = e.name;
  r.budget_seconds = e.budget;
  r.details["seed"] = sub.seed;
  if (r.seconds > r.budget_seconds) {
    r.pass = false;
    r.summary += "; over the " + fmt(r.budget_seconds) + " s budget";
  }
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const std::vector<int>& ids) {
  std::vector<int> which = ids;
  if (which.empty())
    for (int i = 1; i <= kCriterionCount; ++i) which.push_back(i);
  std::vector<CriterionResult> out;
  for (int id : which) out.push_back(run_criterion(id, opt));
  return out;
}

std::string format_line(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << ' ' << std::setw(2) << r.id << ' ' << r.name << ": " << r.summary << " ["
    << std::fixed << std::setprecision(1) << r.seconds << " s]";
  return s.str();
}

Json to_json(const CriterionResult& r, bool include_timing) {
  Json j = {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"summary", r.summary}};
  j["budget_seconds"] = r.budget_seconds;
  if (include_timing) j["seconds"] = r.seconds;
  j["details"] = r.details;
  return j;
}

}  // namespace twaff
