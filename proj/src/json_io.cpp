#include "twaff/json_io.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace twaff {

Json to_json(const Rational& q) { return to_string(q); }

Json to_json(const QVector& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

Json to_json(const cplx& z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const FoldedData& fd) {
  Json roots = Json::array();
  for (const auto& fr : fd.folded_roots)
    roots.push_back({{"vector", to_json(fr.vector)},
                     {"multiplicity", fr.multiplicity},
                     {"length_class", to_string(fr.length_class)}});
  Json basis = Json::array();
  for (const auto& b : fd.fixed_basis) basis.push_back(to_json(b));
  return {{"base", fd.base.name()},
          {"order", fd.r()},
          {"tag", algebra_tag(fd)},
          {"folded_type", fd.folded_type()},
          {"r1", fd.r1_type()},
          {"rank", fd.l()},
          {"dim_T_mod_S0", fd.dim_T_mod_S0},
          {"a0", fd.a0},
          {"rho_tau", to_json(fd.rho_tau)},
          {"fixed_basis", basis},
          {"folded_roots", roots}};
}

Json to_json(const AlcoveClass& c) {
  Json walls = Json::array();
  for (bool w : c.on_wall) walls.push_back(w);
  return {{"alcove", to_json(c.coords)},
          {"on_wall", walls},
          {"residual", c.residual},
          {"character_checks", c.character_checks}};
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw std::invalid_argument("rational must be a \"p/q\" string or an integer");
}

QVector qvector_from_json(const Json& j) {
  QVector out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

Json loop_to_json(const TwistedLoop& loop) {
  Json samples = Json::array();
  for (const auto& x : loop.samples) {
    Json mat = Json::array();
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index k = 0; k < x.cols(); ++k) mat.push_back(to_json(x(i, k)));
    samples.push_back(mat);
  }
  return {{"n", loop.model->n},
          {"r", loop.model->r},
          {"b", loop.b},
          {"a_coeff", loop.a},
          {"grid", loop.samples.size()},
          {"samples", samples}};
}

TwistedLoop loop_from_json(const Json& j) {
  for (const char* key : {"n", "r", "b", "a_coeff", "grid", "samples"})
    if (!j.contains(key)) throw std::invalid_argument(std::string("loop file lacks \"") + key + "\"");
  const int n = j.at("n").get<int>();
  auto model = std::make_shared<const SUnModel>(make_sun_model(n, j.at("r").get<int>()));
  const auto grid = j.at("grid").get<std::size_t>();
  const Json& s = j.at("samples");
  if (s.size() != grid) throw std::invalid_argument("loop file: grid does not match the sample count");
  std::vector<CMatrix> xs;
  for (const auto& mat : s) {
    if (mat.size() != static_cast<std::size_t>(n * n)) throw std::invalid_argument("loop file: sample size mismatch");
    CMatrix x(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Json& e = mat.at(static_cast<std::size_t>(i * n + k));
        x(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
      }
    xs.push_back(x);
  }
  return make_loop(model, std::move(xs), j.at("a_coeff").get<double>(), j.at("b").get<double>());
}

namespace {

void flatten(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    std::string v = j.is_string() ? j.get<std::string>() : j.dump();
    if (v.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      v = q + "\"";
    }
    out << prefix << ',' << v << '\n';
  }
}

}  // namespace

std::string json_to_csv(const Json& j) {
  std::ostringstream out;
  out << "key,value\n";
  flatten(j, "", out);
  return out.str();
}

}  // namespace twaff
