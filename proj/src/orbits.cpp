#include "twaff/orbits.hpp"

#include "twaff/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace twaff {

namespace {

constexpr double kPi = std::numbers::pi;

double op_norm(const CMatrix& a) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

// Node j of a twisted-periodic sequence, j may leave [0, N]; tau^r = 1 and r <= 2.
template <class Tau>
CMatrix extended(const std::vector<CMatrix>& s, int j, Tau tau) {
  const int n = static_cast<int>(s.size()) - 1;
  if (j < 0) return tau(s[static_cast<std::size_t>(j + n)]);
  if (j > n) return tau(s[static_cast<std::size_t>(j - n)]);
  return s[static_cast<std::size_t>(j)];
}

// Lagrange interpolation of the loop samples at t, using `p` nodes around t.
class LoopInterpolant {
 public:
  LoopInterpolant(const TwistedLoop& loop, int p) : loop_(loop), p_(p) {}
  CMatrix operator()(double t) const {
    const double h = loop_.spacing();
    const double u = t / h;
    int first = static_cast<int>(std::floor(u)) - (p_ / 2 - 1);
    CMatrix out = CMatrix::Zero(loop_.model->n, loop_.model->n);
    for (int i = 0; i < p_; ++i) {
      double w = 1;
      for (int k = 0; k < p_; ++k)
        if (k != i) w *= (u - (first + k)) / static_cast<double>(i - k);
      out += w * extended(loop_.samples, first + i, [&](const CMatrix& x) { return loop_.model->tau_algebra(x); });
    }
    return out / loop_.b;
  }

 private:
  const TwistedLoop& loop_;
  int p_;
};

}  // namespace

CMatrix torus_algebra(const SUnModel& m, const Eigen::VectorXd& z) {
  const Eigen::VectorXd x = m.fold.from_lso(z);
  CMatrix d = CMatrix::Zero(m.n, m.n);
  for (int i = 0; i < m.n; ++i) d(i, i) = cplx(0, 2 * kPi * x(i));
  return d;
}

TwistedLoop make_loop(std::shared_ptr<const SUnModel> model, std::vector<CMatrix> samples, double a, double b,
                      double seam_tol) {
  if (!model) throw std::invalid_argument("loop needs a group model");
  if (b == 0) throw std::invalid_argument("b = 0 lies in the zero hyperplane, which is not classified");
  if (samples.size() < 8) throw std::invalid_argument("loop grid needs at least 8 intervals");
  double scale = 1;
  for (const auto& x : samples) {
    if (x.rows() != model->n || x.cols() != model->n) throw std::invalid_argument("sample has the wrong size");
    scale = std::max(scale, x.cwiseAbs().maxCoeff());
  }
  for (const auto& x : samples) {
    if ((x + x.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw std::invalid_argument("loop sample is not anti-Hermitian");
    if (std::abs(x.trace()) > 1e-10 * scale) throw std::invalid_argument("loop sample is not traceless");
  }
  const CMatrix seam = model->tau_algebra(samples.front());
  const double gap = (seam - samples.back()).cwiseAbs().maxCoeff();
  if (gap > seam_tol * scale)
    throw std::invalid_argument("seam condition tau(x(0)) = x(1/r) violated by " + std::to_string(gap));
  samples.back() = seam;
  TwistedLoop loop;
  loop.model = std::move(model);
  loop.samples = std::move(samples);
  loop.a = a;
  loop.b = b;
  return loop;
}

TwistedLoop constant_loop(std::shared_ptr<const SUnModel> model, const CMatrix& x0, int intervals, double a,
                          double b) {
  std::vector<CMatrix> s(static_cast<std::size_t>(intervals + 1), x0);
  return make_loop(std::move(model), std::move(s), a, b);
}

double killing(const CMatrix& x, const CMatrix& y) { return 2.0 * x.rows() * (x * y).trace().real(); }

double loop_pairing(const std::vector<CMatrix>& x, const std::vector<CMatrix>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("loop grids differ");
  // The integrand is 1/r-periodic; the periodic trapezoid rule over [0, 1/r] times r is the mean.
  double s = 0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) s += killing(x[j], y[j]);
  return s / static_cast<double>(x.size() - 1);
}

Shell shell_invariant(const TwistedLoop& loop) {
  return {2 * loop.a * loop.b + loop_pairing(loop.samples, loop.samples), loop.b};
}

GaugePath random_gauge(const SUnModel& m, int intervals, int modes, double amplitude, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  auto random_su = [&] {
    CMatrix z(m.n, m.n);
    for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = cplx(nd(rng), nd(rng));
    CMatrix x = (z - z.adjoint()) / 2.0;
    x -= x.trace() / double(m.n) * CMatrix::Identity(m.n, m.n);
    return x;
  };
  // Mode k lives in the tau-eigenspace with eigenvalue e^{2 pi i k / r}, so Y(t + 1/r) = tau(Y(t)).
  auto project = [&](const CMatrix& x, int k) {
    if (m.r == 1) return x;
    const CMatrix tx = m.tau_algebra(x);
    return k % 2 == 0 ? CMatrix((x + tx) / 2.0) : CMatrix((x - tx) / 2.0);
  };
  std::vector<CMatrix> cs, sn;
  for (int k = 0; k <= modes; ++k) {
    const double w = amplitude / (1.0 + k * k);
    cs.push_back(w * project(random_su(), k));
    sn.push_back(w * project(random_su(), k));
  }
  GaugePath g;
  const double h = 1.0 / (m.r * intervals);
  for (int j = 0; j <= intervals; ++j) {
    const double t = j * h;
    CMatrix y = CMatrix::Zero(m.n, m.n), dy = CMatrix::Zero(m.n, m.n);
    for (int k = 0; k <= modes; ++k) {
      const double om = 2 * kPi * k;
      y += std::cos(om * t) * cs[static_cast<std::size_t>(k)] + std::sin(om * t) * sn[static_cast<std::size_t>(k)];
      dy += om * (-std::sin(om * t) * cs[static_cast<std::size_t>(k)] + std::cos(om * t) * sn[static_cast<std::size_t>(k)]);
    }
    // d/dt exp(Y) is the upper-right block of exp([[Y, Y'], [0, Y]]).
    CMatrix big = CMatrix::Zero(2 * m.n, 2 * m.n);
    big.topLeftCorner(m.n, m.n) = y;
    big.bottomRightCorner(m.n, m.n) = y;
    big.topRightCorner(m.n, m.n) = dy;
    const CMatrix e = big.exp();
    g.samples.push_back(e.topLeftCorner(m.n, m.n));
    g.derivative.push_back(e.topRightCorner(m.n, m.n));
  }
  return g;
}

TwistedLoop gauge_action(const GaugePath& g, const TwistedLoop& loop, double periodicity_tol) {
  const SUnModel& m = *loop.model;
  if (g.samples.size() != loop.samples.size()) throw std::invalid_argument("gauge and loop grids differ");
  if (!g.derivative.empty() && g.derivative.size() != g.samples.size())
    throw std::invalid_argument("gauge derivative grid differs");
  const double gap = (m.tau(g.samples.front()) - g.samples.back()).cwiseAbs().maxCoeff();
  if (gap > periodicity_tol) throw std::invalid_argument("gauge is not twisted periodic: gap " + std::to_string(gap));
  std::vector<CMatrix> dg = g.derivative;
  if (dg.empty()) {
    const double h = loop.spacing();
    auto at = [&](int j) { return extended(g.samples, j, [&](const CMatrix& x) { return m.tau(x); }); };
    for (int j = 0; j <= loop.intervals(); ++j)
      dg.push_back((-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12 * h));
  }
  std::vector<CMatrix> xs, left, right;
  for (std::size_t j = 0; j < g.samples.size(); ++j) {
    const CMatrix gi = g.samples[j].inverse();
    const CMatrix r = dg[j] * gi;  // g' g^{-1}
    xs.push_back(g.samples[j] * loop.samples[j] * gi - loop.b * r);
    left.push_back(gi * dg[j]);  // g^{-1} g'
    right.push_back(r);
  }
  const double a = loop.a + loop_pairing(left, loop.samples) - loop.b / 2 * loop_pairing(right, right);
  // The new samples are anti-Hermitian up to the accuracy of g'; restore the compact form exactly.
  for (auto& x : xs) {
    x = (x - x.adjoint()) / 2.0;
    x -= x.trace() / double(m.n) * CMatrix::Identity(m.n, m.n);
  }
  return make_loop(loop.model, std::move(xs), a, loop.b, 1e-6);
}

CMatrix unitary_projection(const CMatrix& z) {
  Eigen::JacobiSVD<CMatrix> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

std::vector<CMatrix> cf4_integrate(const std::function<CMatrix(double)>& a, double t_end, int steps, int stride) {
  const double h = t_end / steps;
  const double c1 = 0.5 - std::sqrt(3.0) / 6, c2 = 0.5 + std::sqrt(3.0) / 6;
  const double w1 = 0.25 + std::sqrt(3.0) / 6, w2 = 0.25 - std::sqrt(3.0) / 6;
  CMatrix z = CMatrix::Identity(a(0).rows(), a(0).cols());
  std::vector<CMatrix> out{z};
  for (int s = 0; s < steps; ++s) {
    const double t = s * h;
    const CMatrix a1 = a(t + c1 * h), a2 = a(t + c2 * h);
    // z' = z A: the factor weighted towards the earlier node acts first, on the left.
    const CMatrix e1 = (h * (w1 * a1 + w2 * a2)).exp();
    const CMatrix e2 = (h * (w2 * a1 + w1 * a2)).exp();
    z = unitary_projection(z * e1 * e2);
    if ((s + 1) % stride == 0) out.push_back(z);
  }
  return out;
}

FundamentalSolution fundamental_solution(const TwistedLoop& loop, const IntegratorOptions& opt) {
  const LoopInterpolant x(loop, opt.interpolation_points);
  const int n = loop.intervals();
  FundamentalSolution prev;
  prev.steps = n;
  prev.z = cf4_integrate(std::cref(x), loop.period(), n, 1);
  for (int stride = 2; n * stride <= opt.max_steps; stride *= 2) {
    FundamentalSolution next;
    next.steps = n * stride;
    next.z = cf4_integrate(std::cref(x), loop.period(), n * stride, stride);
    double gap = 0;
    for (std::size_t j = 0; j < next.z.size(); ++j) gap = std::max(gap, op_norm(next.z[j] - prev.z[j]));
    next.refinement_gap = gap;
    if (gap < opt.tol) return next;
    prev = std::move(next);
  }
  throw ResourceError("fundamental solution did not converge within " + std::to_string(opt.max_steps) +
                      " steps; last refinement gap " + std::to_string(prev.refinement_gap));
}

CMatrix monodromy(const TwistedLoop& loop, const IntegratorOptions& opt) {
  return fundamental_solution(loop, opt).z.back();
}

bool in_alcove(const CharacterContext& ctx, const Eigen::VectorXd& z, double tol) {
  for (const auto& a : ctx.r1_positive) {
    const double p = a.dot(z);
    if (p < -tol || p > 1 + tol) return false;
  }
  return true;
}

Eigen::VectorXd fold_to_alcove(const CharacterContext& ctx, Eigen::VectorXd z) {
  // Each reflection strictly lowers the number of walls separating z from the alcove.
  for (int iter = 0; iter < 100000; ++iter) {
    bool moved = false;
    for (const auto& a : ctx.r1_positive) {
      const double p = a.dot(z);
      const Eigen::VectorXd cv = 2 * a / a.squaredNorm();
      if (p < -1e-13) {
        z -= p * cv;
        moved = true;
      } else if (p > 1 + 1e-13) {
        z -= (p - 1) * cv;
        moved = true;
      }
    }
    if (!moved) return z;
  }
  throw ConsistencyError("alcove folding did not terminate");
}

Classifier::Classifier(std::shared_ptr<const SUnModel> model, double tol)
    : model_(std::move(model)), ctx_(model_->fold), tol_(tol) {
  const SUnModel& m = *model_;
  std::vector<RepModel> all;
  if (m.r == 1) all.push_back(make_rep(m, RepKind::Defining));
  for (int k = 2; k < m.n; ++k) all.push_back(make_rep(m, RepKind::Exterior, k));
  all.push_back(make_rep(m, RepKind::Adjoint));
  for (auto& rep : all) {
    if (!m.fold.is_tau_invariant(rep.lambda)) continue;
    rep.T = solve_intertwiner(m, rep);
    const Calibration c = calibrate_sign(m, rep, 4, 17);
    if (c.max_err > 1e-8) throw ConsistencyError("character calibration failed with error " + std::to_string(c.max_err));
    reps_.push_back(std::move(rep));
  }
}

std::vector<Eigen::VectorXd> Classifier::candidates(const CMatrix& mono) const {
  const SUnModel& m = *model_;
  std::vector<Eigen::VectorXd> out;
  if (m.r == 1) {
    Eigen::ComplexEigenSolver<CMatrix> es(mono, false);
    Eigen::VectorXd x(m.n);
    for (int i = 0; i < m.n; ++i) x(i) = std::arg(es.eigenvalues()(i)) / (2 * kPi);
    x(0) -= std::round(x.sum());
    out.push_back(m.fold.to_lso(x));
    return out;
  }
  // (M tau)^r = M tau(M) is conjugate to s^2 for the torus point s of the class.
  const CMatrix p = mono * m.tau(mono);
  Eigen::ComplexEigenSolver<CMatrix> es(p, false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.n);
  if (m.n % 2 == 1) {
    auto mid = std::min_element(ev.begin(), ev.end(),
                                [](cplx u, cplx v) { return std::abs(u - 1.0) < std::abs(v - 1.0); });
    ev.erase(mid);
  }
  std::vector<double> half;
  while (!ev.empty()) {
    const cplx u = ev.front();
    ev.erase(ev.begin());
    auto partner = std::min_element(ev.begin(), ev.end(), [&](cplx v, cplx w) {
      return std::abs(v - std::conj(u)) < std::abs(w - std::conj(u));
    });
    ev.erase(partner);
    half.push_back(std::arg(u) / (4 * kPi));
  }
  const int mh = static_cast<int>(half.size());
  for (int mask = 0; mask < (1 << mh); ++mask) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(m.n);
    for (int j = 0; j < mh; ++j) {
      const double a = half[static_cast<std::size_t>(j)] + ((mask >> j) & 1 ? 0.5 : 0.0);
      x(j) = a;
      x(m.n - 1 - j) = -a;
    }
    out.push_back(m.fold.to_lso(x));
  }
  return out;
}

AlcoveClass Classifier::classify_monodromy(const CMatrix& mono) const {
  std::vector<cplx> target;
  for (const auto& rep : reps_) target.push_back((rep.rho(mono) * rep.T).trace());
  AlcoveClass best;
  best.residual = 1e300;
  std::vector<Eigen::VectorXd> seen;
  for (const auto& c : candidates(mono)) {
    const Eigen::VectorXd z = fold_to_alcove(ctx_, c);
    if (std::any_of(seen.begin(), seen.end(), [&](const Eigen::VectorXd& s) { return (s - z).norm() < 1e-9; }))
      continue;
    seen.push_back(z);
    AlcoveClass cls;
    cls.coords = z;
    for (std::size_t i = 0; i < reps_.size(); ++i) {
      const cplx chi = twisted_character(ctx_, reps_[i].lambda, z.cast<cplx>()).value;
      cls.character_checks.push_back(std::abs(chi - target[i]) / reps_[i].dim);
    }
    cls.residual = *std::max_element(cls.character_checks.begin(), cls.character_checks.end());
    if (cls.residual < best.residual) best = cls;
  }
  if (best.residual > tol_)
    throw ConsistencyError("no alcove candidate matches the twisted characters; best residual " +
                           std::to_string(best.residual));
  for (const auto& a : ctx_.r1_positive) {
    const double p = a.dot(best.coords);
    best.on_wall.push_back(std::abs(p) < 1e-9 || std::abs(p - 1) < 1e-9);
  }
  return best;
}

AlcoveClass Classifier::classify(const TwistedLoop& loop, const IntegratorOptions& opt) const {
  return classify_monodromy(monodromy(loop, opt));
}

TwistedLoop Classifier::construct(const Eigen::VectorXd& z, int intervals, double a, double b) const {
  return constant_loop(model_, model_->r * b * torus_algebra(*model_, z), intervals, a, b);
}

RoundTripRecord orbit_round_trip_check(std::shared_ptr<const SUnModel> model, int trials, int intervals,
                                       std::uint64_t seed, const IntegratorOptions& opt) {
  const Classifier cl(model);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  RoundTripRecord rec;
  rec.trials = trials;
  rec.seed = seed;
  for (int trial = 0; trial < trials; ++trial) {
    Eigen::VectorXd z(model->fold.l());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = nd(rng);
    const Eigen::VectorXd mu = fold_to_alcove(cl.context(), z);
    const double b = 0.5 + std::abs(nd(rng));
    const double a = nd(rng);
    const TwistedLoop loop = cl.construct(mu, intervals, a, b);
    const GaugePath g = random_gauge(*model, intervals, 2, 0.8, rng);
    const TwistedLoop gauged = gauge_action(g, loop);
    const FundamentalSolution fs = fundamental_solution(gauged, opt);
    const AlcoveClass cls = cl.classify_monodromy(fs.z.back());
    const CMatrix m0 = monodromy(loop, opt);
    const CMatrix expected = g.samples.front() * m0 * model->tau(g.samples.front()).inverse();
    rec.max_alcove_err = std::max(rec.max_alcove_err, (cls.coords - mu).norm());
    rec.max_equivariance = std::max(rec.max_equivariance, (fs.z.back() - expected).norm());
    rec.max_shell_drift = std::max(rec.max_shell_drift, std::abs(shell_invariant(gauged).a - shell_invariant(loop).a));
    rec.max_steps = std::max(rec.max_steps, fs.steps);
  }
  return rec;
}

OrderRecord integrator_order_check(const SUnModel& m, const std::vector<int>& steps) {
  const int n = m.n, r = m.r;
  Eigen::VectorXd z(m.fold.l());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = 0.3 + 0.1 * static_cast<double>(i);
  const CMatrix x0 = r * torus_algebra(m, z);
  // g(t) = exp(sin(2 pi r t) W) with W tau-fixed is twisted-periodic; the gauged loop has
  // monodromy g(0) exp(x0 / r) g(1/r)^{-1}.
  CMatrix w = CMatrix::Zero(n, n);
  w(0, 1) = cplx(0.4, 0.2);
  w(1, 0) = -std::conj(w(0, 1));
  w = (w + m.tau_algebra(w)) / 2.0;
  const double omega = 2 * kPi * r;
  auto g = [&](double t) { return CMatrix((std::sin(omega * t) * w).exp()); };
  auto xg = [&](double t) {
    const CMatrix gt = g(t);
    const CMatrix dg = omega * std::cos(omega * t) * w * gt;
    return CMatrix(gt * x0 * gt.inverse() - dg * gt.inverse());
  };
  const CMatrix exact = g(0) * CMatrix(x0 / static_cast<double>(r)).exp() * g(1.0 / r).inverse();
  OrderRecord rec;
  rec.steps = steps;
  for (int s : steps) rec.errors.push_back((cf4_integrate(xg, 1.0 / r, s, s).back() - exact).norm());
  rec.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rec.errors.size(); ++i)
    rec.min_ratio = std::min(rec.min_ratio, rec.errors[i - 1] / rec.errors[i]);
  return rec;
}

}  // namespace twaff
