#include "twaff/wiener.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twaff {

namespace {

constexpr double kPi = std::numbers::pi;
using Mat2 = Eigen::Matrix2cd;

// -Killing pairing on su(n).
double metric(const CMatrix& x, const CMatrix& y) { return -2.0 * x.rows() * (x * y).trace().real(); }

Mat2 exp_su2(const Mat2& x) {
  // x^2 = -theta^2 for traceless anti-Hermitian x.
  const double th = std::sqrt(std::max(0.0, -(x * x).trace().real() / 2));
  const double c = std::cos(th), sc = th < 1e-8 ? 1 - th * th / 6 : std::sin(th) / th;
  return c * Mat2::Identity() + sc * x;
}

double su2_angle(const Mat2& z) { return std::acos(std::clamp(z.trace().real() / 2, -1.0, 1.0)); }

// Increment of the SU(2) walk in closed form: i (xi . sigma) scale / (2 sqrt 2).
Mat2 su2_increment(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double w = scale / (2 * std::sqrt(2.0));
  const double a = nd(rng) * w, b = nd(rng) * w, c = nd(rng) * w;
  Mat2 x;
  x << cplx(0, c), cplx(b, a), cplx(-b, a), cplx(0, -c);
  return x;
}

double su2_heat(const HeatKernel& hk, double theta) {
  Eigen::VectorXcd ev(2);
  ev << std::exp(cplx(0, theta)), std::exp(cplx(0, -theta));
  return hk.evaluate_eigen(ev);
}

template <class F>
double integrate(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-13);
}

}  // namespace

std::vector<CMatrix> killing_orthonormal_basis(int n) {
  // Generalized Gell-Mann matrices l with tr(l l) = 2; i l / (2 sqrt n) has -Killing norm 1.
  std::vector<CMatrix> out;
  const double w = 1 / (2 * std::sqrt(static_cast<double>(n)));
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      CMatrix sym = CMatrix::Zero(n, n), anti = CMatrix::Zero(n, n);
      sym(j, k) = sym(k, j) = 1;
      anti(j, k) = cplx(0, -1);
      anti(k, j) = cplx(0, 1);
      out.push_back(cplx(0, w) * sym);
      out.push_back(cplx(0, w) * anti);
    }
  for (int l = 1; l < n; ++l) {
    CMatrix d = CMatrix::Zero(n, n);
    const double c = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int i = 0; i < l; ++i) d(i, i) = c;
    d(l, l) = -l * c;
    out.push_back(cplx(0, w) * d);
  }
  return out;
}

CMatrix exp_su(const CMatrix& x) {
  if (x.rows() == 2) return exp_su2(Mat2(x));
  return x.exp();
}

PathSampler::PathSampler(const SUnModel& m, double s, int depth)
    : n_(m.n), s_(s), steps_(1 << depth), horizon_(1.0 / m.r), basis_(killing_orthonormal_basis(m.n)) {
  if (!(s > 0)) throw std::invalid_argument("variance s must be positive");
  if (depth < 0 || depth > 24) throw std::invalid_argument("dyadic depth out of range");
  scale_ = std::sqrt(s * horizon_ * dt());
}

CMatrix PathSampler::increment(std::mt19937_64& rng) const {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix x = CMatrix::Zero(n_, n_);
  for (const auto& e : basis_) x += (scale_ * nd(rng)) * e;
  return x;
}

CMatrix PathSampler::walk(std::mt19937_64& rng,
                          const std::function<void(int, const CMatrix&, const CMatrix&)>& visit) const {
  CMatrix z = CMatrix::Identity(n_, n_);
  for (int j = 0; j < steps_; ++j) {
    const CMatrix dy = increment(rng);
    if (visit) visit(j, z, dy);
    z = z * exp_su(dy);
  }
  return z;
}

PathSample PathSampler::sample(std::mt19937_64& rng) const {
  PathSample p;
  p.times.push_back(0);
  p.points.push_back(CMatrix::Identity(n_, n_));
  for (int j = 0; j < steps_; ++j) {
    p.increments.push_back(increment(rng));
    p.points.push_back(p.points.back() * exp_su(p.increments.back()));
    p.times.push_back((j + 1) * dt());
  }
  return p;
}

ChiSquareRecord endpoint_law_check(double s, int depth, std::size_t n_paths, std::uint64_t seed, int threads,
                                   int bins) {
  const SUnModel m = make_sun_model(2, 1);
  const PathSampler sampler(m, s, depth);
  const double horizon = sampler.horizon();
  // Endpoint law u_s(., T): exponent scale s T T.
  const HeatKernel hk(2, s * horizon * horizon, 1e-14);
  const int steps = sampler.steps();
  const double scale = std::sqrt(s * horizon * sampler.dt());
  auto freq = monte_carlo_vector(n_paths, seed, threads, static_cast<std::size_t>(bins),
                                 [&](std::mt19937_64& rng, double* out) {
                                   Mat2 z = Mat2::Identity();
                                   for (int j = 0; j < steps; ++j) z = z * exp_su2(su2_increment(rng, scale));
                                   const double th = su2_angle(z);
                                   const int b = std::min(bins - 1, static_cast<int>(th / kPi * bins));
                                   for (int k = 0; k < bins; ++k) out[k] = k == b ? 1.0 : 0.0;
                                 });
  ChiSquareRecord rec;
  rec.n_paths = n_paths;
  rec.depth = depth;
  rec.seed = seed;
  double total = 0;
  std::vector<double> expect;
  for (int k = 0; k < bins; ++k) {
    const double lo = kPi * k / bins, hi = kPi * (k + 1) / bins;
    expect.push_back(integrate([&](double th) { return su2_heat(hk, th) * 2 / kPi * std::sin(th) * std::sin(th); },
                               lo, hi));
    total += expect.back();
  }
  // Bins below five expected counts are pooled into their neighbour.
  double pend_o = 0, pend_e = 0;
  for (int k = 0; k < bins; ++k) {
    pend_o += std::round(freq[static_cast<std::size_t>(k)].mean * static_cast<double>(n_paths));
    pend_e += expect[static_cast<std::size_t>(k)] / total * static_cast<double>(n_paths);
    if (pend_e >= 5 || k == bins - 1) {
      if (pend_e > 0) {
        rec.statistic += (pend_o - pend_e) * (pend_o - pend_e) / pend_e;
        ++rec.dof;
      }
      pend_o = pend_e = 0;
    }
  }
  --rec.dof;
  rec.p_value = boost::math::gamma_q(rec.dof / 2.0, rec.statistic / 2);
  return rec;
}

SmoothPath exponential_path(const CMatrix& y) {
  return {[y](double t) { return exp_su(CMatrix(t * y)); }, [y](double t) { return CMatrix(y * exp_su(CMatrix(t * y))); }};
}

StochasticRecord quasi_invariance_check(const SUnModel& m, double s, int depth, const SmoothPath& g,
                                        const std::function<double(const CMatrix&)>& f, std::size_t n_paths,
                                        std::uint64_t seed, int threads) {
  const PathSampler sampler(m, s, depth);
  const double horizon = sampler.horizon();
  if ((g.g(0) - CMatrix::Identity(m.n, m.n)).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("shift path must start at the identity");
  // (1/2s)(g^{-1} g', g^{-1} g') with the pairing (1/T) int_0^T.
  const double energy = integrate(
                            [&](double t) {
                              const CMatrix gi = g.g(t).inverse();
                              const CMatrix v = gi * g.dg(t);
                              return metric(v, v);
                            },
                            0.0, horizon) /
                        horizon;
  std::vector<CMatrix> drift;  // g' g^{-1} at the left end of every step
  for (int j = 0; j < sampler.steps(); ++j) {
    const double t = j * sampler.dt();
    drift.push_back(g.dg(t) * g.g(t).inverse());
  }
  const CMatrix g_end = g.g(horizon);
  auto est = monte_carlo_vector(n_paths, seed, threads, 3, [&](std::mt19937_64& rng, double* out) {
    double pairing = 0;
    const CMatrix z = sampler.walk(rng, [&](int j, const CMatrix&, const CMatrix& dy) {
      pairing += metric(drift[static_cast<std::size_t>(j)], dy);
    });
    const double lhs = f(z);
    const double rhs = f(z * g_end) * std::exp(-pairing / (s * horizon) - energy / (2 * s));
    out[0] = lhs;
    out[1] = rhs;
    out[2] = lhs - rhs;
  });
  StochasticRecord rec;
  rec.lhs = est[0].mean;
  rec.rhs = est[1].mean;
  rec.lhs_sigma = est[0].sigma;
  rec.rhs_sigma = est[1].sigma;
  rec.sigma = est[2].sigma;
  rec.rel_err = std::abs(rec.lhs - rec.rhs) / std::max(std::abs(rec.lhs), 1e-300);
  rec.n_paths = n_paths;
  rec.depth = depth;
  rec.seed = seed;
  return rec;
}

StochasticRecord smoothed_berechnung_check(const CMatrix& y, double s, int depth, const LinearClassTest& f,
                                           std::size_t n_paths, std::uint64_t seed, int threads) {
  const SUnModel m = make_sun_model(2, 1);
  const PathSampler sampler(m, s, depth);
  const double horizon = sampler.horizon();
  const int steps = sampler.steps();
  const double scale = std::sqrt(s * horizon * sampler.dt());
  const double y2 = metric(y, y);
  const Mat2 y2m(y), a2(f.a);
  auto est = monte_carlo(n_paths, seed, threads, [&](std::mt19937_64& rng) {
    Mat2 z = Mat2::Identity();
    double pairing = 0;
    for (int j = 0; j < steps; ++j) {
      const Mat2 dy = su2_increment(rng, scale);
      pairing += -4.0 * (dy * y2m).trace().real();
      z = z * exp_su2(dy);
    }
    const double fz = f.c0 + (a2 * z).trace().real();
    return fz * std::exp(pairing / (s * horizon) - y2 / (2 * s));
  });
  // Right side: the class average of W is cos(theta) for 2x2 SU(2), so the integral of
  // f(W h^{-1}) u(W) reduces to c0 + Re tr(h^{-1} A) int u(theta) cos(theta) dmu(theta).
  const HeatKernel hk(2, s * horizon * horizon, 1e-14);
  const double i1 = integrate(
      [&](double th) { return su2_heat(hk, th) * std::cos(th) * 2 / kPi * std::sin(th) * std::sin(th); }, 0.0, kPi);
  const CMatrix hinv = exp_su(CMatrix(-horizon * y));
  StochasticRecord rec;
  rec.lhs = est.mean;
  rec.lhs_sigma = est.sigma;
  rec.sigma = est.sigma;
  rec.rhs = f.c0 + (hinv * f.a).trace().real() * i1;
  rec.rel_err = std::abs(rec.lhs - rec.rhs) / std::max(std::abs(rec.rhs), 1e-300);
  rec.n_paths = n_paths;
  rec.depth = depth;
  rec.seed = seed;
  return rec;
}

RefinementRecord refinement_check(const SUnModel& m, double s, int m0, int m1, std::size_t n_paths,
                                  std::uint64_t seed) {
  auto median_gap = [&](int depth, std::uint64_t sd) {
    const PathSampler fine(m, s, depth + 1);
    std::mt19937_64 rng(sd);
    std::vector<double> gaps;
    for (std::size_t p = 0; p < n_paths; ++p) {
      CMatrix zf = CMatrix::Identity(m.n, m.n), zc = zf;
      for (int j = 0; j < fine.steps(); j += 2) {
        const CMatrix d1 = fine.increment(rng), d2 = fine.increment(rng);
        zf = zf * exp_su(d1) * exp_su(d2);
        zc = zc * exp_su(CMatrix(d1 + d2));
      }
      Eigen::JacobiSVD<CMatrix> svd(zf - zc);
      gaps.push_back(svd.singularValues()(0));
    }
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(gaps.size() / 2), gaps.end());
    return gaps[gaps.size() / 2];
  };
  return {median_gap(m0, seed), median_gap(m1, seed + 1)};
}

}  // namespace twaff
