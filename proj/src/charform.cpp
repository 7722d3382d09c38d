#include "twaff/charform.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <quadmath.h>
#include <random>
#include <set>
#include <stdexcept>

namespace twaff {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::vector<std::int64_t> key_of(const Eigen::MatrixXd& m) {
  std::vector<std::int64_t> k(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) k[static_cast<std::size_t>(i)] = std::llround(m.data()[i] * 1e8);
  return k;
}

// Factors of the denominator closer to zero than this are treated as exactly singular.
constexpr double kSingularFactor = 1e-7;

}  // namespace

WeylGroupTable generate_weyl_group(const std::vector<Eigen::VectorXd>& simple_roots) {
  if (simple_roots.empty()) throw std::invalid_argument("Weyl group needs at least one root");
  const auto d = simple_roots.front().size();
  std::vector<Eigen::MatrixXd> gens;
  for (const auto& a : simple_roots) gens.push_back(Eigen::MatrixXd::Identity(d, d) - 2 * a * a.transpose() / a.squaredNorm());
  WeylGroupTable t;
  std::set<std::vector<std::int64_t>> seen;
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  seen.insert(key_of(id));
  t.elements.push_back(id);
  t.signs.push_back(1);
  for (std::size_t head = 0; head < t.elements.size(); ++head) {
    for (const auto& g : gens) {
      Eigen::MatrixXd w = g * t.elements[head];
      if (seen.insert(key_of(w)).second) {
        t.elements.push_back(w);
        t.signs.push_back(-t.signs[head]);
      }
    }
  }
  return t;
}

CharacterContext::CharacterContext(FoldedData fd) : fold(std::move(fd)) {
  std::vector<Eigen::VectorXd> simple;
  for (const auto& a : fold.r1.simple_roots) simple.push_back(fold.to_lso(a));
  weyl = generate_weyl_group(simple);
  for (const auto& a : fold.r1.positive_roots) r1_positive.push_back(fold.to_lso(a));
  rho_tau = fold.to_lso(fold.rho_tau);
}

Eigen::VectorXd CharacterContext::weight(const WeightVector& lambda) const {
  return fold.to_lso(to_ambient(fold.base, lambda));
}

Eigen::VectorXd CharacterContext::shifted(const WeightVector& lambda) const {
  return fold.to_lso(to_ambient(fold.base, lambda) + fold.rho_tau);
}

cplx alternating_sum(const WeylGroupTable& w, const Eigen::VectorXd& mu, const TorusPoint& h) {
  if (mu.size() != h.size() || static_cast<int>(mu.size()) != w.dim())
    throw std::invalid_argument("alternating_sum: dimension mismatch");
  cplx s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    Eigen::VectorXd wm = w.elements[i] * mu;
    cplx phase = wm.cast<cplx>().dot(h);  // dot() conjugates the left operand, which is real
    s += static_cast<double>(w.signs[i]) * std::exp(cplx(0, kTwoPi) * phase);
  }
  return s;
}

cplx alternating_sum_exp(const WeylGroupTable& w, const Eigen::VectorXd& mu, const TorusPoint& x) {
  if (mu.size() != x.size() || static_cast<int>(mu.size()) != w.dim())
    throw std::invalid_argument("alternating_sum_exp: dimension mismatch");
  cplx s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    Eigen::VectorXd wm = w.elements[i] * mu;
    s += static_cast<double>(w.signs[i]) * std::exp(wm.cast<cplx>().dot(x));
  }
  return s;
}

cplx denominator(const CharacterContext& ctx, const TorusPoint& h) {
  if (h.size() != ctx.rho_tau.size()) throw std::invalid_argument("denominator: dimension mismatch");
  cplx d = std::exp(cplx(0, kTwoPi) * ctx.rho_tau.cast<cplx>().dot(h));
  for (const auto& a : ctx.r1_positive) d *= 1.0 - std::exp(cplx(0, -kTwoPi) * a.cast<cplx>().dot(h));
  return d;
}

CharacterValue character_ratio(const CharacterContext& ctx, const Eigen::VectorXd& shifted, const TorusPoint& h) {
  std::vector<const Eigen::VectorXd*> vanishing;
  for (const auto& a : ctx.r1_positive)
    if (std::abs(1.0 - std::exp(cplx(0, -kTwoPi) * a.cast<cplx>().dot(h))) < kSingularFactor) vanishing.push_back(&a);
  if (vanishing.empty())
    return {alternating_sum(ctx.weyl, shifted, h) / alternating_sum(ctx.weyl, ctx.rho_tau, h), false};
  // Leading-order limit: every coset of the stabilizer subgroup W_Phi contributes
  // eps(w) e(<w mu, h>) prod_{b in Phi+} <w mu, b>; the normalization cancels against mu = rho.
  auto leading = [&](const Eigen::VectorXd& mu) {
    cplx s = 0;
    for (std::size_t i = 0; i < ctx.weyl.size(); ++i) {
      Eigen::VectorXd wm = ctx.weyl.elements[i] * mu;
      double p = ctx.weyl.signs[i];
      for (const auto* b : vanishing) p *= wm.dot(*b);
      s += p * std::exp(cplx(0, kTwoPi) * wm.cast<cplx>().dot(h));
    }
    return s;
  };
  return {leading(shifted) / leading(ctx.rho_tau), true};
}

CharacterValue twisted_character(const CharacterContext& ctx, const WeightVector& lambda, const TorusPoint& h) {
  if (!lambda.is_dominant()) throw std::invalid_argument("twisted_character: weight is not dominant");
  if (!ctx.fold.is_tau_invariant(lambda)) return {cplx(0), false};
  CharacterValue v = character_ratio(ctx, ctx.shifted(lambda), h);
  v.value *= static_cast<double>(character_sign(ctx.tag(), lambda));
  return v;
}

CharacterValue classical_character(const RootSystem& r, const WeightVector& lambda, const TorusPoint& h) {
  if (!lambda.is_dominant()) throw std::invalid_argument("classical_character: weight is not dominant");
  std::vector<int> id(static_cast<std::size_t>(r.rank));
  for (int i = 0; i < r.rank; ++i) id[static_cast<std::size_t>(i)] = i;
  CharacterContext ctx(fold(r, make_automorphism(r, id)));
  return character_ratio(ctx, ctx.shifted(lambda), h);
}

Rational twisted_dimension(const FoldedData& fd, const WeightVector& lambda) {
  QVector lr = to_ambient(fd.base, lambda) + fd.rho_tau;
  Rational d = 1;
  for (const auto& a : fd.r1.positive_roots) d *= fd.base.inner(lr, a) / fd.base.inner(fd.rho_tau, a);
  return d;
}

namespace {

std::mutex& sign_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, int>& sign_table() {
  static std::map<std::string, int> t;
  return t;
}

std::string sign_key(const std::string& tag, const WeightVector& lambda) {
  std::string k = tag + ":";
  for (const auto& c : lambda.coords) k += to_string(c) + ",";
  return k;
}

}  // namespace

int character_sign(const std::string& tag, const WeightVector& lambda) {
  std::lock_guard<std::mutex> lock(sign_mutex());
  auto it = sign_table().find(sign_key(tag, lambda));
  return it == sign_table().end() ? 1 : it->second;
}

void set_character_sign(const std::string& tag, const WeightVector& lambda, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("character sign must be +1 or -1");
  std::lock_guard<std::mutex> lock(sign_mutex());
  sign_table()[sign_key(tag, lambda)] = sign;
}

std::vector<WeightVector> invariant_dominant_weights(const FoldedData& fd, std::size_t count) {
  double cap = to_double(fd.base.norm2(fd.base.rho)) + 1;
  for (;;) {
    std::vector<WeightVector> out;
    for (auto& w : dominant_weights_below(fd.base, cap))
      if (fd.is_tau_invariant(w)) out.push_back(std::move(w));
    if (out.size() >= count) {
      out.resize(count);
      return out;
    }
    cap *= 2;
  }
}

RadialCheck radial_laplacian_check(const CharacterContext& ctx, const WeightVector& lambda, int samples,
                                   std::uint64_t seed, double fd_step) {
  if (!lambda.is_dominant() || !ctx.fold.is_tau_invariant(lambda))
    throw std::invalid_argument("radial_laplacian_check: weight must be dominant and tau-invariant");
  const FoldedData& fd = ctx.fold;
  const double kappa = to_double(fd.base.killing_scale);
  const QVector lr = to_ambient(fd.base, lambda) + fd.rho_tau;
  const double mu2 = to_double(fd.base.norm2(lr));
  const double rho2 = to_double(fd.base.norm2(fd.rho_tau));
  const Eigen::VectorXd mu = ctx.shifted(lambda);
  const auto l = mu.size();

  // e^{i<w mu, H>} convention: H = 2 pi h.
  auto value = [&](const Eigen::VectorXd& H) {
    cplx s = 0;
    for (std::size_t i = 0; i < ctx.weyl.size(); ++i)
      s += static_cast<double>(ctx.weyl.signs[i]) * std::exp(cplx(0, (ctx.weyl.elements[i] * mu).dot(H)));
    return s;
  };
  auto laplacian = [&](const Eigen::VectorXd& H) {
    cplx s = 0;
    for (std::size_t i = 0; i < ctx.weyl.size(); ++i) {
      Eigen::VectorXd wm = ctx.weyl.elements[i] * mu;
      s += -kappa * wm.squaredNorm() * static_cast<double>(ctx.weyl.signs[i]) * std::exp(cplx(0, wm.dot(H)));
    }
    return s;
  };

  RadialCheck out;
  out.analytic_eigenvalue = kappa * (mu2 - rho2);
  const double scale = kappa * std::max(mu2, rho2) * static_cast<double>(ctx.weyl.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0, kTwoPi);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd H(l);
    for (Eigen::Index j = 0; j < l; ++j) H(j) = unif(rng);
    const cplx f = value(H);
    const cplx rhs = kappa * (rho2 - mu2) * f;
    const cplx lhs = laplacian(H) + kappa * rho2 * f;
    out.residual = std::max(out.residual, std::abs(lhs - rhs) / scale);
    cplx fd_lap = 0;
    for (Eigen::Index j = 0; j < l; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(l);
      e(j) = fd_step;
      fd_lap += (value(H + e) - 2.0 * f + value(H - e)) / (fd_step * fd_step);
    }
    const cplx fd_lhs = kappa * fd_lap + kappa * rho2 * f;
    out.fd_residual = std::max(out.fd_residual, std::abs(fd_lhs - rhs) / scale);
  }
  return out;
}

cplx twisted_inner_product(const CharacterContext& ctx, const WeightVector& lambda, const WeightVector& mu) {
  const FoldedData& fd = ctx.fold;
  const LatticeBasis lb = m_lattice_basis(fd);
  const std::size_t l = lb.basis.size();
  // Integer frequencies <w nu, b_j> of both alternating sums on the coroot basis.
  auto frequencies = [&](const WeightVector& w) {
    QVector nu = to_ambient(fd.base, w) + fd.rho_tau;
    Eigen::VectorXd nu_l = fd.to_lso(nu);
    std::vector<std::vector<std::int64_t>> f;
    for (const auto& g : ctx.weyl.elements) {
      Eigen::VectorXd wn = g * nu_l;
      std::vector<std::int64_t> row(l);
      for (std::size_t j = 0; j < l; ++j) {
        double p = wn.dot(fd.to_lso(lb.basis[j]));
        row[j] = std::llround(p);
        if (std::abs(p - static_cast<double>(row[j])) > 1e-8)
          throw std::logic_error("weight does not pair integrally with the coroot lattice");
      }
      f.push_back(std::move(row));
    }
    return f;
  };
  const auto fl = frequencies(lambda);
  const auto fm = frequencies(mu);
  std::int64_t fmax = 0;
  for (const auto* f : {&fl, &fm})
    for (const auto& row : *f)
      for (auto v : row) fmax = std::max(fmax, std::abs(v));
  const std::int64_t n = 2 * fmax + 1;

  std::int64_t total = 1;
  for (std::size_t j = 0; j < l; ++j) total *= n;
  cplx acc = 0;
  std::vector<std::int64_t> k(l, 0);
  auto sum_at = [&](const std::vector<std::vector<std::int64_t>>& f) {
    cplx s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      std::int64_t m = 0;
      for (std::size_t j = 0; j < l; ++j) m += f[i][j] * k[j];
      m %= n;
      s += static_cast<double>(ctx.weyl.signs[i]) *
           std::polar(1.0, kTwoPi * static_cast<double>(m) / static_cast<double>(n));
    }
    return s;
  };
  for (std::int64_t idx = 0; idx < total; ++idx) {
    std::int64_t rem = idx;
    for (std::size_t j = 0; j < l; ++j) {
      k[j] = rem % n;
      rem /= n;
    }
    acc += sum_at(fl) * std::conj(sum_at(fm));
  }
  return acc / (static_cast<double>(total) * static_cast<double>(ctx.weyl.size()));
}

}  // namespace twaff

namespace twaff {

std::vector<SignedOrbitElement> signed_orbit(const FoldedData& fd, const QVector& mu) {
  std::map<QVector, int> seen{{mu, 1}};
  std::vector<SignedOrbitElement> out{{mu, 1}};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const auto& a : fd.r1.simple_roots) {
      QVector w = fd.r1.reflect(a, out[head].vector);
      if (seen.emplace(w, -out[head].sign).second) out.push_back({w, -out[head].sign});
    }
  }
  return out;
}

namespace {

struct Quad {
  __float128 re = 0;
  __float128 im = 0;
};

Quad qmul(const Quad& a, const Quad& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

const __float128 kPiQ = acosq(-1);

__float128 qrational(const Rational& q) {
  return static_cast<__float128>(q.numerator()) / static_cast<__float128>(q.denominator());
}

// e(x) = e^{2 pi i x} with the integer part of x removed first.
Quad qe(__float128 x) {
  x -= floorq(x);
  __float128 ang = 2 * kPiQ * x;
  return {cosq(ang), sinq(ang)};
}

}  // namespace

DenominatorComparison compare_denominator_precise(const FoldedData& fd,
                                                  const std::vector<SignedOrbitElement>& rho_orbit,
                                                  const std::vector<double>& coeffs) {
  if (coeffs.size() != fd.fixed_basis.size()) throw std::invalid_argument("coefficient count must equal dim LS0");
  const std::size_t d = fd.base.ambient_dim();
  // F h in quad precision, so that <v, h> = v . (F h).
  std::vector<__float128> h(d, 0), fh(d, 0);
  for (std::size_t j = 0; j < coeffs.size(); ++j)
    for (std::size_t i = 0; i < d; ++i) h[i] += static_cast<__float128>(coeffs[j]) * qrational(fd.fixed_basis[j][i]);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      if (fd.base.form(i, k) != Rational(0)) fh[i] += qrational(fd.base.form(i, k)) * h[k];
  auto pair = [&](const QVector& v) {
    __float128 s = 0;
    for (std::size_t i = 0; i < d; ++i)
      if (v[i] != Rational(0)) s += qrational(v[i]) * fh[i];
    return s;
  };
  Quad alt;
  for (const auto& e : rho_orbit) {
    Quad t = qe(pair(e.vector));
    alt.re += e.sign * t.re;
    alt.im += e.sign * t.im;
  }
  Quad prod = qe(pair(fd.rho_tau));
  for (const auto& a : fd.r1.positive_roots) {
    // 1 - e(-x) = 2 i sin(pi x) e(-x/2), free of cancellation for small x.
    __float128 x = pair(a);
    x -= floorq(x);
    Quad f = qe(-x / 2);
    __float128 s = 2 * sinq(kPiQ * x);
    prod = qmul(prod, Quad{-s * f.im, s * f.re});
  }
  DenominatorComparison out;
  out.alternating = cplx(static_cast<double>(alt.re), static_cast<double>(alt.im));
  out.product = cplx(static_cast<double>(prod.re), static_cast<double>(prod.im));
  __float128 dre = alt.re - prod.re, dim = alt.im - prod.im;
  out.rel_err = static_cast<double>(sqrtq(dre * dre + dim * dim) / sqrtq(prod.re * prod.re + prod.im * prod.im));
  return out;
}

}  // namespace twaff
