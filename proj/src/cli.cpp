#include "twaff/cli.hpp"

#include "twaff/acceptance.hpp"
#include "twaff/orbits.hpp"
#include "twaff/wiener.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace twaff {

namespace {

struct RunConfig {
  bool csv = false;
  bool json = false;
  bool no_timing = false;
  std::uint64_t seed = 7;
  double tol = -1;  // negative: the subcommand default
  int threads = 1;
  std::string out;
};

// Result of one subcommand before the common envelope is added.
struct Outcome {
  bool pass = true;
  Json tolerances = Json::object();
  Json result = Json::object();
};

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double x = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument("not a number: " + item);
    v.push_back(x);
  }
  return v;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> v;
  for (double x : parse_doubles(text)) {
    if (x != std::floor(x)) throw std::invalid_argument("expected integers: " + text);
    v.push_back(static_cast<int>(x));
  }
  return v;
}

double tol_or(const RunConfig& c, double fallback) { return c.tol >= 0 ? c.tol : fallback; }

// SU(n) model for an A-type tag with r in {1, 2}.
SUnModel sun_model_from_tag(const std::string& tag) {
  const FoldedData fd = fold_from_tag(tag);
  if (fd.base.type != RootType::A || fd.r() > 2)
    throw std::invalid_argument("group-side checks need an A_n tag with r in {1, 2}: " + tag);
  return make_sun_model(fd.base.rank + 1, fd.r());
}

RepModel rep_from_name(const SUnModel& m, const std::string& name) {
  RepModel rep;
  if (name == "defining") {
    rep = make_rep(m, RepKind::Defining);
  } else if (name == "adjoint") {
    rep = make_rep(m, RepKind::Adjoint);
  } else if (name.rfind("exterior:", 0) == 0) {
    rep = make_rep(m, RepKind::Exterior, std::stoi(name.substr(9)));
  } else {
    throw std::invalid_argument("unknown representation " + name + " (defining | adjoint | exterior:k)");
  }
  rep.T = solve_intertwiner(m, rep);
  return rep;
}

WeightVector weight_from_labels(const RootSystem& base, const std::string& text) {
  WeightVector w;
  for (int x : parse_ints(text)) w.coords.push_back(Rational(x));
  if (static_cast<int>(w.coords.size()) != base.rank)
    throw std::invalid_argument("weight needs " + std::to_string(base.rank) + " Dynkin labels");
  if (!w.is_dominant()) throw std::invalid_argument("weight must be dominant");
  return w;
}

TorusPoint point_from_text(const std::string& text, int dim) {
  const auto v = parse_doubles(text);
  if (static_cast<int>(v.size()) != dim)
    throw std::invalid_argument("point needs " + std::to_string(dim) + " coordinates");
  TorusPoint h(dim);
  for (int i = 0; i < dim; ++i) h(i) = v[static_cast<std::size_t>(i)];
  return h;
}

Json record_json(const MonteCarloEstimate& e) {
  return {{"mean", e.mean}, {"sigma", e.sigma}, {"samples", e.samples}, {"seed", e.seed}};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"twisted affine characters: folding, characters, orbits, heat kernels and Wiener checks"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  RunConfig cfg;
  auto* json_flag = app.add_flag("--json", cfg.json, "JSON report (default)");
  app.add_flag("--csv", cfg.csv, "flat key,value CSV instead of JSON")->excludes(json_flag);
  app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  app.add_option("--tol", cfg.tol, "tolerance override")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", cfg.out, "write the report to this path instead of stdout");
  app.add_flag("--no-timing", cfg.no_timing, "omit wall-clock fields so reports are byte-identical");

  std::function<Outcome()> action;

  // fold
  auto* fold_cmd = app.add_subcommand("fold", "fold a Dynkin diagram by its automorphism");
  std::string type_letter_opt, algebra;
  int rank = 0, order = 1;
  fold_cmd->add_option("--type", type_letter_opt, "base type letter (A, D, E)");
  fold_cmd->add_option("--rank", rank, "base rank")->check(CLI::PositiveNumber);
  fold_cmd->add_option("--order", order, "automorphism order")->check(CLI::Range(1, 3));
  fold_cmd->add_option("--algebra", algebra, "tag such as D4^3 (alternative to --type/--rank/--order)");
  fold_cmd->callback([&] {
    action = [&] {
      const FoldedData fd = algebra.empty() ? fold(parse_type_name(type_letter_opt + std::to_string(rank)).first,
                                                   rank, order)
                                            : fold_from_tag(algebra);
      Outcome o;
      o.result = to_json(fd);
      const WeylOrders wo = weyl_group_orders(fd);
      o.result["order_W_tau"] = wo.order_W_tau;
      o.result["order_W_S"] = wo.order_W_S;
      return o;
    };
  });

  // char
  auto* char_cmd = app.add_subcommand("char", "twisted (or classical) character at a torus point");
  std::string weight_text, point_text;
  bool use_tau = false;
  char_cmd->add_option("--algebra", algebra, "algebra tag")->required();
  char_cmd->add_option("--weight", weight_text, "Dynkin labels of the base highest weight")->required();
  char_cmd->add_option("--point", point_text, "torus point in orthonormal coordinates")->required();
  char_cmd->add_flag("--tau", use_tau, "evaluate on the twisted component G tau");
  char_cmd->callback([&] {
    action = [&] {
      const CharacterContext ctx(fold_from_tag(algebra));
      const WeightVector w = weight_from_labels(ctx.fold.base, weight_text);
      const int dim = use_tau ? ctx.fold.l() : ctx.fold.base.rank;
      const TorusPoint h = point_from_text(point_text, dim);
      const CharacterValue v = use_tau ? twisted_character(ctx, w, h) : classical_character(ctx.fold.base, w, h);
      Outcome o;
      o.result = {{"algebra", algebra},
                  {"weight", to_json(w.coords)},
                  {"tau", use_tau},
                  {"tau_invariant", ctx.fold.is_tau_invariant(w)},
                  {"value", to_json(v.value)},
                  {"singular_fallback_used", v.singular_fallback_used}};
      if (use_tau) o.result["twining_dimension"] = to_string(twisted_dimension(ctx.fold, w));
      return o;
    };
  });

  // affchar
  auto* aff_cmd = app.add_subcommand("affchar", "normalized affine character by the numerator ratio");
  std::string labels_text, k_text;
  double beta = 0.4;
  aff_cmd->add_option("--algebra", algebra, "algebra tag")->required();
  aff_cmd->add_option("--labels", labels_text, "affine Dynkin labels m_0,...,m_l")->required();
  aff_cmd->add_option("--beta", beta, "b = -i beta")->check(CLI::PositiveNumber)->capture_default_str();
  aff_cmd->add_option("--K", k_text, "real Cartan component, l coordinates")->required();
  aff_cmd->callback([&] {
    action = [&] {
      const AffineAlgebra alg(fold_from_tag(algebra));
      const AffineWeight w{parse_ints(labels_text)};
      const Eigen::VectorXcd kk = point_from_text(k_text, alg.l);
      const cplx b(0, -beta);
      Outcome o;
      o.result = {{"algebra", algebra},
                  {"labels", w.labels},
                  {"level", level(alg, w)},
                  {"b", to_json(b)},
                  {"value", to_json(character_value(alg, w, b, kk))}};
      return o;
    };
  });

  // denominator-check
  auto* den_cmd = app.add_subcommand("denominator-check", "alternating sum over W against the product formula");
  int points = 1000;
  den_cmd->add_option("--algebra", algebra, "algebra tag")->required();
  den_cmd->add_option("--points", points, "random points")->check(CLI::PositiveNumber)->capture_default_str();
  den_cmd->callback([&] {
    action = [&] {
      const FoldedData fd = fold_from_tag(algebra);
      const auto orbit = signed_orbit(fd, fd.rho_tau);
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      double mx = 0;
      for (int i = 0; i < points; ++i) {
        std::vector<double> c(static_cast<std::size_t>(fd.l()));
        for (auto& x : c) x = u(rng);
        mx = std::max(mx, compare_denominator_precise(fd, orbit, c).rel_err);
      }
      Outcome o;
      const double tol = tol_or(cfg, 1e-10);
      o.tolerances["rel"] = tol;
      o.pass = mx <= tol;
      o.result = {{"algebra", algebra}, {"points", points}, {"orbit_size", orbit.size()}, {"max_rel_err", mx}};
      return o;
    };
  });

  // poisson-check
  auto* poi_cmd = app.add_subcommand("poisson-check", "lattice theta sum against its character expansion");
  double t = 1.0;
  poi_cmd->add_option("--algebra", algebra, "algebra tag")->required();
  poi_cmd->add_option("--t", t, "heat time")->check(CLI::PositiveNumber)->capture_default_str();
  poi_cmd->add_option("--points", points, "random (h, k) pairs")->check(CLI::PositiveNumber);
  double scale = 1.0;
  poi_cmd->add_option("--scale", scale, "standard deviation of Re and Im of h, k")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  poi_cmd->callback([&] {
    action = [&] {
      const AffineAlgebra alg(fold_from_tag(algebra));
      std::mt19937_64 rng(cfg.seed);
      std::normal_distribution<double> nd(0.0, scale);
      const int count = poi_cmd->count("--points") ? points : 20;
      double mx = 0;
      Json rows = Json::array();
      for (int i = 0; i < count; ++i) {
        AffinePoint p{t, Eigen::VectorXcd(alg.l), Eigen::VectorXcd(alg.l)};
        for (int j = 0; j < alg.l; ++j) {
          p.h(j) = cplx(nd(rng), nd(rng));
          p.k(j) = cplx(nd(rng), nd(rng));
        }
        const SeriesValue lhs = numerator_lattice_side(alg, p), rhs = numerator_character_side(alg, p);
        const double rel = std::abs(lhs.value - rhs.value) / std::abs(lhs.value);
        mx = std::max(mx, rel);
        rows.push_back({{"lattice", to_json(lhs.value)}, {"character", to_json(rhs.value)}, {"rel_err", rel},
                        {"terms", {lhs.terms, rhs.terms}}});
      }
      Outcome o;
      const double tol = tol_or(cfg, 1e-8);
      o.tolerances["rel"] = tol;
      o.pass = mx <= tol;
      o.result = {{"algebra", algebra}, {"t", t}, {"scale", scale}, {"max_rel_err", mx}, {"points", rows}};
      return o;
    };
  });

  // heat-check
  auto* heat_cmd = app.add_subcommand("heat-check", "lattice side against the heat-kernel group integral");
  std::string h_text, kk_text;
  std::size_t n_mc = 200000;
  int strata = 0;
  heat_cmd->add_option("--algebra", algebra, "A1 or A_n^2 tag")->required();
  heat_cmd->add_option("--t", t, "heat time")->check(CLI::PositiveNumber)->capture_default_str();
  heat_cmd->add_option("--h-imag", h_text, "imaginary parts of h, l coordinates")->required();
  heat_cmd->add_option("--k-imag", kk_text, "imaginary parts of k, l coordinates")->required();
  heat_cmd->add_option("--n-mc", n_mc, "Haar draws")->check(CLI::PositiveNumber)->capture_default_str();
  heat_cmd->add_option("--strata", strata, "circle strata per draw (0 = default)")->check(CLI::NonNegativeNumber);
  heat_cmd->callback([&] {
    action = [&] {
      const SUnModel m = sun_model_from_tag(algebra);
      const AffineAlgebra alg(m.fold);
      AffinePoint p{t, cplx(0, 1) * point_from_text(h_text, alg.l), cplx(0, 1) * point_from_text(kk_text, alg.l)};
      const HeatPropRecord rec = heatprop_check(m, alg, p, n_mc, cfg.seed, 1e-10, cfg.threads, strata);
      const double err = std::abs(rec.lhs - rec.rhs);
      Outcome o;
      const double tol = tol_or(cfg, 2e-2);
      o.tolerances = {{"rel", tol}, {"sigma_band", 3.0}};
      o.pass = rec.rel_err <= tol && err <= 3 * rec.sigma;
      o.result = {{"algebra", algebra},  {"t", t},           {"lhs", to_json(rec.lhs)}, {"rhs", rec.rhs},
                  {"sigma", rec.sigma},  {"rel_err", rec.rel_err}, {"prefactor", rec.prefactor},
                  {"n_mc", n_mc},        {"strata", rec.strata}};
      return o;
    };
  });

  // integral-check
  auto* int_cmd = app.add_subcommand("integral-check", "Haar mean on G tau against the torus integral");
  std::string rep_name = "one";
  int grid = 16;
  int_cmd->add_option("--algebra", algebra, "A_n^2 tag")->required();
  int_cmd->add_option("--rep", rep_name, "one | defining | adjoint | exterior:k; f = |tr(rho(g) T)|^2")
      ->capture_default_str();
  int_cmd->add_option("--n-mc", n_mc, "Haar samples")->check(CLI::PositiveNumber);
  int_cmd->add_option("--grid", grid, "torus grid per axis")->check(CLI::PositiveNumber)->capture_default_str();
  int_cmd->callback([&] {
    action = [&] {
      const SUnModel m = sun_model_from_tag(algebra);
      const std::size_t samples = int_cmd->count("--n-mc") ? n_mc : 100000;
      WeylIntegralRecord rec;
      if (rep_name == "one") {
        rec = weyl_integral_check(m, [](const CMatrix&) { return 1.0; }, samples, grid, 0, cfg.seed, cfg.threads);
      } else {
        const RepModel rep = rep_from_name(m, rep_name);
        // |chi|^2 has frequencies up to twice the highest weight; a generous bound keeps the grid exact.
        rec = weyl_integral_check(
            m, [&](const CMatrix& g) { return std::norm((rep.rho(g) * rep.T).trace()); }, samples, grid, 3,
            cfg.seed, cfg.threads);
      }
      Outcome o;
      const double tol = tol_or(cfg, 1e-10);
      o.tolerances = {{"torus", tol}, {"sigma_band", 3.0}};
      const double expected = rep_name == "one" ? 1.0 : rec.torus_value;
      const double dev = std::abs(rec.mc.mean - expected);
      o.pass = (rep_name != "one" || std::abs(rec.torus_value - 1) <= tol) && dev <= 3 * rec.mc.sigma + 1e-12;
      o.result = {{"algebra", algebra}, {"rep", rep_name}, {"mc", record_json(rec.mc)},
                  {"torus", rec.torus_value}, {"grid", grid}};
      return o;
    };
  });

  // conv-check
  auto* conv_cmd = app.add_subcommand("conv-check", "twisted convolution of characters");
  conv_cmd->add_option("--algebra", algebra, "A_n^2 tag")->required();
  conv_cmd->add_option("--rep", rep_name, "defining | adjoint | exterior:k")->required();
  conv_cmd->add_option("--n-mc", n_mc, "Haar samples")->check(CLI::PositiveNumber);
  conv_cmd->callback([&] {
    action = [&] {
      const SUnModel m = sun_model_from_tag(algebra);
      const RepModel rep = rep_from_name(m, rep_name);
      std::mt19937_64 rng(cfg.seed);
      const CMatrix g1 = haar_sample(m.n, rng), g2 = haar_sample(m.n, rng);
      const std::size_t samples = conv_cmd->count("--n-mc") ? n_mc : 100000;
      const ConvolutionRecord rec = twisted_convolution_check(m, rep, g1, g2, samples, cfg.seed + 1, cfg.threads);
      const double dev = std::hypot(rec.lhs_re.mean - rec.rhs.real(), rec.lhs_im.mean - rec.rhs.imag());
      const double sigma = std::hypot(rec.lhs_re.sigma, rec.lhs_im.sigma);
      Outcome o;
      o.tolerances = {{"sigma_band", 3.0}};
      o.pass = dev <= 3 * sigma;
      o.result = {{"algebra", algebra}, {"rep", rep_name}, {"lhs_re", record_json(rec.lhs_re)},
                  {"lhs_im", record_json(rec.lhs_im)}, {"rhs", to_json(rec.rhs)}, {"deviation", dev}};
      return o;
    };
  });

  // orbit
  auto* orbit_cmd = app.add_subcommand("orbit", "coadjoint orbits of the twisted loop group");
  orbit_cmd->require_subcommand(1, 1);
  auto* classify_cmd = orbit_cmd->add_subcommand("classify", "alcove point of a loop file");
  std::string loop_path;
  classify_cmd->add_option("--loop", loop_path, "loop file (JSON)")->required()->check(CLI::ExistingFile);
  classify_cmd->callback([&] {
    action = [&] {
      std::ifstream in(loop_path);
      const TwistedLoop loop = loop_from_json(Json::parse(in));
      IntegratorOptions io;
      if (cfg.tol >= 0) io.tol = cfg.tol;
      const Classifier cl(loop.model);
      const FundamentalSolution fs = fundamental_solution(loop, io);
      const AlcoveClass cls = cl.classify_monodromy(fs.z.back());
      Outcome o;
      o.tolerances = {{"integrator", io.tol}, {"character", 1e-6}};
      o.result = to_json(cls);
      o.result["steps"] = fs.steps;
      o.result["refinement_gap"] = fs.refinement_gap;
      const Shell sh = shell_invariant(loop);
      o.result["shell"] = {{"a", sh.a}, {"b", sh.b}};
      return o;
    };
  });
  auto* construct_cmd = orbit_cmd->add_subcommand("construct", "constant loop for an alcove point");
  double a_coeff = 0, b_coeff = 1;
  int intervals = 128;
  construct_cmd->add_option("--algebra", algebra, "A_n or A_n^2 tag")->required();
  construct_cmd->add_option("--point", point_text, "alcove point, l coordinates")->required();
  construct_cmd->add_option("--grid", intervals, "intervals")->check(CLI::PositiveNumber)->capture_default_str();
  construct_cmd->add_option("--a", a_coeff, "central coefficient")->capture_default_str();
  construct_cmd->add_option("--b", b_coeff, "derivation coefficient, nonzero")->capture_default_str();
  construct_cmd->callback([&] {
    action = [&] {
      if (b_coeff == 0) throw std::invalid_argument("b must be nonzero");
      auto model = std::make_shared<const SUnModel>(sun_model_from_tag(algebra));
      const Classifier cl(model);
      const TorusPoint z = point_from_text(point_text, model->fold.l());
      const Eigen::VectorXd zr = z.real();
      if (!in_alcove(cl.context(), zr, 1e-12)) throw std::invalid_argument("point is not in the alcove");
      Outcome o;
      o.result = loop_to_json(cl.construct(zr, intervals, a_coeff, b_coeff));
      return o;
    };
  });

  // wiener-check
  auto* wiener_cmd = app.add_subcommand("wiener-check", "path-space Monte Carlo checks on SU(2)");
  std::string test_name;
  std::size_t n_paths = 100000;
  int depth = 10;
  double s = 1.0, y_angle = 0.7;
  wiener_cmd->add_option("--test", test_name, "endpoint | quasi | berechnung")
      ->required()
      ->check(CLI::IsMember({"endpoint", "quasi", "berechnung"}));
  wiener_cmd->add_option("--paths", n_paths, "sample paths")->check(CLI::PositiveNumber)->capture_default_str();
  wiener_cmd->add_option("--depth", depth, "dyadic depth m (2^m steps)")->check(CLI::Range(1, 20));
  wiener_cmd->add_option("--s", s, "variance parameter")->check(CLI::PositiveNumber)->capture_default_str();
  wiener_cmd->add_option("--y", y_angle, "shift Y = diag(i y, -i y)")->capture_default_str();
  wiener_cmd->callback([&] {
    action = [&] {
      Outcome o;
      CMatrix y(2, 2);
      y << cplx(0, y_angle), 0, 0, cplx(0, -y_angle);
      if (test_name == "endpoint") {
        const ChiSquareRecord rec = endpoint_law_check(s, depth, n_paths, cfg.seed, cfg.threads);
        const double floor = tol_or(cfg, 0.01);
        o.tolerances["p_value_floor"] = floor;
        o.pass = rec.p_value > floor;
        o.result = {{"test", test_name}, {"chi2", rec.statistic}, {"dof", rec.dof}, {"p_value", rec.p_value},
                    {"seed", rec.seed}, {"n_paths", rec.n_paths}, {"depth", rec.depth}};
        return o;
      }
      const int d = wiener_cmd->count("--depth") ? depth : (test_name == "quasi" ? 8 : 10);
      const StochasticRecord rec =
          test_name == "quasi"
              ? quasi_invariance_check(make_sun_model(2, 1), s, d, exponential_path(y),
                                       [](const CMatrix& z) { return z.trace().real(); }, n_paths, cfg.seed,
                                       cfg.threads)
              : smoothed_berechnung_check(y, s, d, LinearClassTest{0, CMatrix::Identity(2, 2)}, n_paths, cfg.seed,
                                          cfg.threads);
      const double tol = tol_or(cfg, 5e-2);
      o.tolerances = {{"rel", tol}, {"sigma_band", 3.0}};
      o.pass = rec.rel_err <= tol && std::abs(rec.lhs - rec.rhs) <= 3 * rec.sigma;
      o.result = {{"test", test_name}, {"lhs", rec.lhs},         {"rhs", rec.rhs},   {"sigma", rec.sigma},
                  {"rel_err", rec.rel_err}, {"seed", rec.seed}, {"n_paths", rec.n_paths}, {"depth", rec.depth}};
      return o;
    };
  });

  // acceptance-all
  auto* acc_cmd = app.add_subcommand("acceptance-all", "run every acceptance criterion");
  std::vector<int> only;
  acc_cmd->add_option("--only", only, "criterion ids")->check(CLI::Range(1, kCriterionCount));
  acc_cmd->callback([&] {
    action = [&] {
      Outcome o;
      const auto results = run_acceptance(AcceptanceOptions{cfg.seed, cfg.threads}, only);
      o.result["criteria"] = Json::array();
      for (const auto& r : results) {
        o.pass = o.pass && r.pass;
        o.result["criteria"].push_back(to_json(r, !cfg.no_timing));
      }
      o.tolerances = "pinned per criterion";
      return o;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n" << app.help();
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  int code = 0;
  try {
    o = action();
    code = o.pass ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    o.pass = false;
    o.result = {{"error", e.what()}};
    code = 1;
  }
  std::string command;
  for (const auto* sub : app.get_subcommands()) {
    command = sub->get_name();
    for (const auto* inner : sub->get_subcommands()) command += " " + inner->get_name();
  }
  Json report = {{"version", TWAFF_VERSION}, {"command", command}, {"seed", cfg.seed},
                 {"threads", cfg.threads},   {"tolerances", o.tolerances}};
  report["wall_time"] = cfg.no_timing ? Json(nullptr)
                                      : Json(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  report["pass"] = o.pass;
  report["result"] = o.result;
  const std::string text = cfg.csv ? json_to_csv(report) : report.dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      err << "error: cannot write " << cfg.out << "\n";
      return 2;
    }
    f << text;
  }
  return code;
}

}  // namespace twaff
