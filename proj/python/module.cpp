#include "twaff/acceptance.hpp"
#include "twaff/cli.hpp"
#include "twaff/json_io.hpp"
#include "twaff/orbits.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace twaff;

namespace {

WeightVector labels_to_weight(const std::vector<int>& labels) {
  WeightVector w;
  for (int x : labels) w.coords.push_back(Rational(x));
  return w;
}

Eigen::VectorXcd to_vector(const std::vector<std::complex<double>>& v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Twisted affine characters: folding, characters, Poisson and heat-kernel checks, orbits";
  m.attr("__version__") = TWAFF_VERSION;

  m.def("fold_json", [](const std::string& tag) { return to_json(fold_from_tag(tag)).dump(); }, py::arg("tag"));

  m.def(
      "twisted_character",
      [](const std::string& tag, const std::vector<int>& weight, const std::vector<std::complex<double>>& point) {
        const CharacterContext ctx(fold_from_tag(tag));
        return twisted_character(ctx, labels_to_weight(weight), to_vector(point)).value;
      },
      py::arg("tag"), py::arg("weight"), py::arg("point"),
      "Twisted character on exp(point) tau; the point has l orthonormal coordinates.");

  m.def(
      "twining_dimension",
      [](const std::string& tag, const std::vector<int>& weight) {
        return to_string(twisted_dimension(fold_from_tag(tag), labels_to_weight(weight)));
      },
      py::arg("tag"), py::arg("weight"));

  m.def(
      "poisson_sides",
      [](const std::string& tag, double t, const std::vector<std::complex<double>>& h,
         const std::vector<std::complex<double>>& k) {
        const AffineAlgebra alg(fold_from_tag(tag));
        const AffinePoint p{t, to_vector(h), to_vector(k)};
        return std::make_pair(numerator_lattice_side(alg, p).value, numerator_character_side(alg, p).value);
      },
      py::arg("tag"), py::arg("t"), py::arg("h"), py::arg("k"),
      "(lattice side, character side) of the Poisson identity.");

  m.def(
      "character_value",
      [](const std::string& tag, const std::vector<int>& labels, double beta, const std::vector<double>& k) {
        const AffineAlgebra alg(fold_from_tag(tag));
        Eigen::VectorXcd kk(static_cast<Eigen::Index>(k.size()));
        for (std::size_t i = 0; i < k.size(); ++i) kk(static_cast<Eigen::Index>(i)) = k[i];
        return character_value(alg, AffineWeight{labels}, {0.0, -beta}, kk);
      },
      py::arg("tag"), py::arg("labels"), py::arg("beta"), py::arg("k"),
      "Normalized affine character at b = -i beta.");

  m.def(
      "classify_constant_loop",
      [](int n, int r, const std::vector<double>& point, int intervals, double b) {
        auto model = std::make_shared<const SUnModel>(make_sun_model(n, r));
        const Classifier cl(model);
        Eigen::VectorXd z(static_cast<Eigen::Index>(point.size()));
        for (std::size_t i = 0; i < point.size(); ++i) z(static_cast<Eigen::Index>(i)) = point[i];
        const AlcoveClass c = cl.classify(cl.construct(z, intervals, 0.0, b));
        return std::vector<double>(c.coords.data(), c.coords.data() + c.coords.size());
      },
      py::arg("n"), py::arg("r"), py::arg("point"), py::arg("intervals") = 64, py::arg("b") = 1.0);

  m.def(
      "run_criterion_json",
      [](int id, std::uint64_t seed, int threads) {
        py::gil_scoped_release release;
        return to_json(run_criterion(id, AcceptanceOptions{seed, threads})).dump();
      },
      py::arg("id"), py::arg("seed") = 7, py::arg("threads") = 1);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::vector<const char*> argv{"twaff"};
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line dispatcher in-process: (exit code, stdout, stderr).");
}
