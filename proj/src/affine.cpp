#include "twaff/affine.hpp"

#include "twaff/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace twaff {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_a_even_fold(const FoldedData& fd) {
  return fd.r() == 2 && fd.base.type == RootType::A && fd.base.rank % 2 == 0;
}

QVector coroot_of(const RootSystem& base, const QVector& a) {
  return (Rational(2) / base.norm2(a)) * a;
}

// Hermite normal form of an integer generator matrix (rows = generators); returns the
// nonzero rows, upper triangular with positive pivots and reduced entries above them.
std::vector<std::vector<std::int64_t>> hermite_rows(std::vector<std::vector<std::int64_t>> m, std::size_t cols) {
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    for (;;) {
      std::size_t piv = m.size();
      for (std::size_t i = row; i < m.size(); ++i)
        if (m[i][c] != 0 && (piv == m.size() || std::llabs(m[i][c]) < std::llabs(m[piv][c]))) piv = i;
      if (piv == m.size()) break;
      std::swap(m[row], m[piv]);
      bool done = true;
      for (std::size_t i = row + 1; i < m.size(); ++i) {
        if (m[i][c] == 0) continue;
        const std::int64_t q = m[i][c] / m[row][c];
        for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[row][j];
        if (m[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (row < m.size() && m[row][c] != 0) {
      if (m[row][c] < 0)
        for (auto& x : m[row]) x = -x;
      for (std::size_t i = 0; i < row; ++i) {
        std::int64_t q = m[i][c] / m[row][c];
        if (m[i][c] - q * m[row][c] < 0) --q;
        for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[row][j];
      }
      ++row;
    }
  }
  m.resize(row);
  return m;
}

// Bound for sum over lattice points beyond `radius` of exp(-a s^2 + beta s), s = |v - c|.
double gaussian_tail(int l, double vol, double diam, double a, double beta, double radius) {
  if (radius - diam <= beta / (2 * a)) return std::numeric_limits<double>::infinity();
  return lattice_tail_bound(l, vol, diam, [&](double s) { return std::exp(-a * s * s + beta * s); }, radius);
}

// All lattice points B n with |B n - c| <= radius.
template <class F>
std::size_t for_each_in_ball(const Eigen::MatrixXd& basis, const Eigen::VectorXd& c, double radius,
                             std::size_t cap, F&& visit) {
  const int l = static_cast<int>(basis.cols());
  const Eigen::MatrixXd inv = basis.inverse();
  const Eigen::VectorXd mid = inv * c;
  std::vector<long> lo(l), hi(l);
  double box = 1;
  for (int j = 0; j < l; ++j) {
    const double half = radius * inv.row(j).norm();
    lo[j] = static_cast<long>(std::floor(mid(j) - half));
    hi[j] = static_cast<long>(std::ceil(mid(j) + half));
    box *= static_cast<double>(hi[j] - lo[j] + 1);
  }
  if (box > static_cast<double>(cap))
    throw ResourceError("lattice enumeration cap " + std::to_string(cap) + " exceeded (box of " +
                        std::to_string(static_cast<long long>(box)) + " points)");
  std::vector<long> n(lo);
  std::size_t count = 0;
  Eigen::VectorXd v(l);
  for (;;) {
    for (int j = 0; j < l; ++j) v(j) = static_cast<double>(n[j]);
    Eigen::VectorXd p = basis * v;
    if ((p - c).norm() <= radius) {
      visit(p);
      ++count;
    }
    int j = 0;
    while (j < l && ++n[j] > hi[j]) n[j] = lo[j], ++j;
    if (j == l) break;
  }
  return count;
}

double diameter(const Eigen::MatrixXd& basis) {
  double d = 0;
  for (Eigen::Index j = 0; j < basis.cols(); ++j) d += basis.col(j).norm();
  return d;
}

cplx bilinear_square(const Eigen::VectorXcd& x) { return (x.array() * x.array()).sum(); }

}  // namespace

AffineAlgebra::AffineAlgebra(FoldedData fd) : ctx(std::move(fd)) {
  const FoldedData& f = ctx.fold;
  const RootSystem& base = f.base;
  kappa = to_double(base.killing_scale);
  r = f.r();
  l = f.l();
  a0 = f.a0;

  auto positive = [&](const QVector& v) { return base.inner(f.rho_tau, v) > Rational(0); };
  // Finite part of the simple system: roots admitting mode 0.
  std::vector<QVector> finite_pos, mode1;
  for (const auto& fr : f.folded_roots) {
    if (mode_allowed(fr.vector, 0) && positive(fr.vector)) finite_pos.push_back(fr.vector);
    if (mode_allowed(fr.vector, 1)) mode1.push_back(fr.vector);
  }
  auto in = [](const std::vector<QVector>& set, const QVector& v) { return std::find(set.begin(), set.end(), v) != set.end(); };
  std::sort(finite_pos.begin(), finite_pos.end(), [&](const QVector& x, const QVector& y) {
    const Rational hx = base.inner(f.rho_tau, x), hy = base.inner(f.rho_tau, y);
    return hx != hy ? hx < hy : x < y;
  });
  std::vector<QVector> finite_simple;
  for (const auto& a : finite_pos) {
    bool decomposable = false;
    for (const auto& b : finite_pos)
      if (b != a && in(finite_pos, a - b)) decomposable = true;
    if (!decomposable) finite_simple.push_back(a);
  }
  // Mode-1 simple root: (abar, 1) not (b, 0) + (abar - b, 1), nor (abar, 0) + delta.
  std::vector<QVector> zero_candidates;
  for (const auto& a : mode1) {
    if (in(finite_pos, a)) continue;
    bool decomposable = false;
    for (const auto& b : finite_pos)
      if (in(mode1, a - b)) decomposable = true;
    if (!decomposable) zero_candidates.push_back(a);
  }
  if (zero_candidates.size() != 1 || static_cast<int>(finite_simple.size()) != l)
    throw ConsistencyError("affine simple system of " + tag() + " has unexpected size");
  simple_roots.push_back({zero_candidates.front(), 1});
  for (const auto& a : finite_simple) simple_roots.push_back({a, 0});

  // Marks: sum a_i abar_i = 0 with a_0 = 1 (mode of delta is 1).
  auto express = [&](const QVector& v, bool on_coroots) {
    // coefficients c with sum c_j x_j = v, x_j the finite simple roots or their coroots
    QMatrix gram(static_cast<std::size_t>(l), static_cast<std::size_t>(l));
    QVector rhs(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) {
      for (int j = 0; j < l; ++j) {
        const QVector xj = on_coroots ? coroot_of(base, finite_simple[j]) : finite_simple[j];
        gram(i, j) = base.inner(finite_simple[i], xj);
      }
      rhs[i] = base.inner(finite_simple[i], v);
    }
    return gram.inverse() * rhs;
  };
  const QVector root_coeffs = express(-simple_roots[0].finite, false);
  const QVector coroot_coeffs = express(-coroot_of(base, simple_roots[0].finite), true);
  auto to_int_labels = [](Rational first, const QVector& rest) {
    std::vector<Rational> q{first};
    q.insert(q.end(), rest.begin(), rest.end());
    std::int64_t den = 1;
    for (const auto& x : q) den = std::lcm(den, x.denominator());
    std::int64_t gg = 0;
    for (const auto& x : q) gg = std::gcd(gg, (x * Rational(den)).numerator());
    std::vector<int> out;
    for (const auto& x : q) out.push_back(static_cast<int>((x * Rational(den)).numerator() / gg));
    return out;
  };
  marks = to_int_labels(Rational(1), root_coeffs);
  if (marks.front() != 1) throw ConsistencyError("mark of the mode-1 node is not 1");
  comarks = to_int_labels(Rational(1), coroot_coeffs);

  // rho-tilde restricted to LS0: <rho0, abar_i^vee> = 1 for the finite simple roots.
  {
    QMatrix gram(static_cast<std::size_t>(l), static_cast<std::size_t>(l));
    QVector ones(static_cast<std::size_t>(l), Rational(1));
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) gram(i, j) = base.inner(finite_simple[j], coroot_of(base, finite_simple[i]));
    const QVector c = gram.inverse() * ones;
    rho_finite = QVector(base.ambient_dim(), Rational(0));
    for (int j = 0; j < l; ++j) rho_finite = rho_finite + c[j] * finite_simple[j];
  }

  const double s = std::sqrt(kappa);
  const LatticeBasis mb = m_lattice_basis(f);
  m_basis.resize(l, l);
  for (int j = 0; j < l; ++j) m_basis.col(j) = f.to_lso(mb.basis[j]) / s;

  // Translation lattice T_x. The affine reflection in (c abar, n) fixes the wall
  // <abar, x> = -n / (r c); parallel walls at spacing d generate the translation d abar^vee.
  QMatrix mgram(static_cast<std::size_t>(l), static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) mgram(i, j) = base.inner(mb.basis[i], mb.basis[j]);
  const QMatrix mgram_inv = mgram.inverse();
  auto is_folded_root = [&](const QVector& v) {
    for (const auto& fr : f.folded_roots)
      if (fr.vector == v) return true;
    return false;
  };
  std::vector<std::vector<std::int64_t>> gens;
  for (const auto& fr : f.folded_roots) {
    if (!positive(fr.vector) || is_folded_root(Rational(1, 2) * fr.vector)) continue;
    Rational spacing(0);
    bool have_first = false;
    Rational first;
    for (int c = 1; c <= 2; ++c) {
      const QVector root = Rational(c) * fr.vector;
      if (!is_folded_root(root)) continue;
      for (int n = -4 * r; n <= 4 * r; ++n) {
        if (!mode_allowed(root, n)) continue;
        const Rational pos(n, r * c);
        if (!have_first) {
          first = pos;
          have_first = true;
          continue;
        }
        const Rational d = boost::abs(pos - first);
        if (d == Rational(0)) continue;
        spacing = spacing == Rational(0)
                      ? d
                      : Rational(std::gcd(spacing.numerator() * d.denominator(), d.numerator() * spacing.denominator()),
                                 spacing.denominator() * d.denominator());
      }
    }
    const QVector x = spacing * coroot_of(base, fr.vector);
    QVector rhs(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) rhs[i] = base.inner(mb.basis[i], x);
    const QVector c = mgram_inv * rhs;
    std::vector<std::int64_t> row;
    for (const auto& ci : c) {
      if (ci.denominator() != 1) throw ConsistencyError("translation generator outside Q^vee(R^1)");
      row.push_back(ci.numerator());
    }
    gens.push_back(row);
  }
  const auto hnf = hermite_rows(gens, static_cast<std::size_t>(l));
  if (static_cast<int>(hnf.size()) != l) throw ConsistencyError("translation lattice is not of full rank");
  Eigen::MatrixXd coeff(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) coeff(j, i) = static_cast<double>(hnf[i][j]);
  translation_basis = r * m_basis * coeff;
  bool scalar = true;
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      if (hnf[i][j] != (i == j ? hnf[0][0] : 0)) scalar = false;
  translation_scale = scalar ? static_cast<double>(r * hnf[0][0]) : 0.0;
}

bool AffineAlgebra::mode_allowed(const QVector& abar, int n) const {
  const FoldedData& f = ctx.fold;
  for (const auto& fr : f.folded_roots) {
    if (fr.vector != abar) continue;
    if (fr.multiplicity > 1) return true;
    // tau acts on a fixed root space by -1 exactly for A_{2n}, where such roots have even height.
    if (is_a_even_fold(f)) return ((n % 2) + 2) % 2 == 1;
    return ((n % r) + r) % r == 0;
  }
  return false;
}

Eigen::VectorXd AffineAlgebra::weight_rframe(const QVector& ambient_weight) const {
  return ctx.fold.to_lso(ambient_weight) * std::sqrt(kappa);
}

Eigen::VectorXd AffineAlgebra::point_rframe(const Eigen::VectorXd& lso_point) const {
  return lso_point / std::sqrt(kappa);
}

SeriesValue lattice_theta_sum(const WeylGroupTable& w, const Eigen::MatrixXd& basis, const AffinePoint& p,
                              const SeriesOptions& opt) {
  if (!(p.t > 0)) throw std::invalid_argument("lattice_theta_sum: t must be positive");
  const int l = static_cast<int>(basis.cols());
  const double vol = std::abs(basis.determinant());
  const double diam = diameter(basis);
  const double a = 2 * kPi * kPi / p.t;
  std::vector<Eigen::VectorXcd> xs;
  std::vector<Eigen::VectorXd> centers;
  double amp_sum = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    Eigen::VectorXcd x = p.h - w.elements[i].cast<cplx>() * p.k;
    // Re ||2 pi i g + x||^2 = ||Re x||^2 - 4 pi^2 ||g - c||^2 with c = -Im x / 2 pi.
    centers.push_back(-x.imag() / (2 * kPi));
    amp_sum += std::exp(x.real().squaredNorm() / (2 * p.t));
    xs.push_back(std::move(x));
  }
  double radius = std::sqrt(std::log(1 / opt.tol) / a) + diam;
  for (;;) {
    SeriesValue out;
    out.radius = radius;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double sgn = w.signs[i];
      out.terms += for_each_in_ball(basis, centers[i], radius, opt.enumeration_cap, [&](const Eigen::VectorXd& g) {
        const Eigen::VectorXcd z = cplx(0, 2 * kPi) * g.cast<cplx>() + xs[i];
        out.value += sgn * std::exp(bilinear_square(z) / (2 * p.t));
      });
      if (out.terms > opt.enumeration_cap)
        throw ResourceError("lattice enumeration cap " + std::to_string(opt.enumeration_cap) + " exceeded");
    }
    out.tail_bound = amp_sum * gaussian_tail(l, vol, diam, a, 0, radius);
    if (out.tail_bound <= opt.tol * std::max(std::abs(out.value), std::numeric_limits<double>::min())) return out;
    if (radius > 1e6) throw ResourceError("lattice_theta_sum: tail bound does not converge");
    radius *= 1.3;
  }
}

SeriesValue dual_character_sum(const AffineAlgebra& alg, const Eigen::MatrixXd& basis, const AffinePoint& p,
                               const SeriesOptions& opt) {
  if (!(p.t > 0)) throw std::invalid_argument("dual_character_sum: t must be positive");
  const int l = static_cast<int>(basis.cols());
  const Eigen::MatrixXd dual = basis.inverse().transpose();
  const double vol_dual = std::abs(dual.determinant());
  const double diam = diameter(dual);
  const double pref = 1 / (std::abs(basis.determinant()) * std::pow(2 * kPi / p.t, l / 2.0));
  const double beta = p.h.real().norm() + p.k.real().norm();
  const auto& weyl = alg.ctx.weyl;
  std::vector<Eigen::VectorXd> simple;
  for (const auto& b : alg.ctx.fold.r1.simple_roots) simple.push_back(alg.ctx.fold.to_lso(b));
  const Eigen::VectorXcd minus_k = -p.k;
  double radius = (beta + std::sqrt(beta * beta + 2 * p.t * std::log(1 / opt.tol))) / p.t + diam;
  for (;;) {
    SeriesValue out;
    out.radius = radius;
    for_each_in_ball(dual, Eigen::VectorXd::Zero(l), radius, opt.enumeration_cap, [&](const Eigen::VectorXd& nu) {
      for (const auto& s : simple)
        if (nu.dot(s) <= 1e-9 * s.norm()) return;
      ++out.terms;
      out.value += alternating_sum_exp(weyl, nu, p.h) * alternating_sum_exp(weyl, nu, minus_k) *
                   std::exp(-p.t * nu.squaredNorm() / 2);
    });
    out.value *= pref;
    // Each strictly dominant point has |W| orbit points of equal norm; |A(nu)| <= |W| e^{|nu| |Re|}.
    out.tail_bound = pref * static_cast<double>(weyl.size()) * gaussian_tail(l, vol_dual, diam, p.t / 2, beta, radius);
    if (out.tail_bound <= opt.tol * std::max(std::abs(out.value), std::numeric_limits<double>::min())) return out;
    if (radius > 1e6) throw ResourceError("dual_character_sum: tail bound does not converge");
    radius *= 1.3;
  }
}

SeriesValue numerator_lattice_side(const AffineAlgebra& alg, const AffinePoint& p, const SeriesOptions& opt) {
  return lattice_theta_sum(alg.ctx.weyl, alg.m_basis, p, opt);
}

SeriesValue numerator_character_side(const AffineAlgebra& alg, const AffinePoint& p, const SeriesOptions& opt) {
  return dual_character_sum(alg, alg.m_basis, p, opt);
}

int level(const AffineAlgebra& alg, const AffineWeight& w) {
  if (w.labels.size() != alg.comarks.size()) throw std::invalid_argument("affine weight needs l+1 labels");
  int s = 0;
  for (std::size_t i = 0; i < w.labels.size(); ++i) s += alg.comarks[i] * w.labels[i];
  return s;
}

NumeratorData numerator_data(const AffineAlgebra& alg, const AffineWeight& lambda, std::complex<double> b,
                             const Eigen::VectorXcd& K) {
  if (lambda.labels.size() != alg.simple_roots.size()) throw std::invalid_argument("affine weight needs l+1 labels");
  for (int m : lambda.labels)
    if (m < 0) throw std::invalid_argument("affine weight labels must be nonnegative");
  if (!(b.imag() < 0)) throw std::domain_error("point lies outside Y(V(Lambda)): need Im b < 0");
  if (std::abs(b.real()) > 1e-12 * std::abs(b)) throw std::domain_error("only Re b = 0 is supported");
  if (K.size() != alg.l) throw std::invalid_argument("K has wrong dimension");
  const RootSystem& base = alg.ctx.fold.base;
  const int l = alg.l;
  // Finite part of Lambda: <lbar, abar_i^vee> = m_i for i >= 1.
  QMatrix gram(static_cast<std::size_t>(l), static_cast<std::size_t>(l));
  QVector rhs(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) {
    const QVector cv = coroot_of(base, alg.simple_roots[i + 1].finite);
    for (int j = 0; j < l; ++j) gram(i, j) = base.inner(alg.simple_roots[j + 1].finite, cv);
    rhs[i] = Rational(lambda.labels[i + 1]);
  }
  const QVector c = gram.inverse() * rhs;
  QVector nu = alg.rho_finite;
  for (int j = 0; j < l; ++j) nu = nu + c[j] * alg.simple_roots[j + 1].finite;
  // <Lambda + rho, C> = -i kc with kc > 0, read off from the mode-1 coroot.
  const QVector& a0bar = alg.simple_roots[0].finite;
  const Rational pair0 = base.inner(nu, coroot_of(base, a0bar));
  const double kc =
      to_double(Rational(lambda.labels[0] + 1) - pair0) * alg.kappa * to_double(base.norm2(a0bar)) / (4 * kPi);
  if (!(kc > 0)) throw ConsistencyError("nonpositive level pairing");
  const double beta = -b.imag();
  NumeratorData d;
  d.point.t = 1 / (kc * beta);
  d.point.h = cplx(0, 1) * (alg.weight_rframe(nu) / kc).cast<cplx>();
  d.point.k = cplx(0, 1) * K / (std::sqrt(alg.kappa) * beta);
  d.log_prefactor = -(bilinear_square(d.point.h) + bilinear_square(d.point.k)) / (2 * d.point.t);
  if (alg.translation_scale != 0) {
    const double s = alg.translation_scale;
    d.scaled_point = {d.point.t / (s * s), d.point.h / s, d.point.k / s};
  }
  return d;
}

std::complex<double> kac_numerator(const AffineAlgebra& alg, const AffineWeight& lambda, std::complex<double> b,
                                   const Eigen::VectorXcd& K, const SeriesOptions& opt) {
  const NumeratorData d = numerator_data(alg, lambda, b, K);
  return std::exp(d.log_prefactor) * lattice_theta_sum(alg.ctx.weyl, alg.translation_basis, d.point, opt).value;
}

std::complex<double> character_value(const AffineAlgebra& alg, const AffineWeight& lambda, std::complex<double> b,
                                     const Eigen::VectorXcd& K, const SeriesOptions& opt) {
  const NumeratorData num = numerator_data(alg, lambda, b, K);
  const NumeratorData den = numerator_data(alg, AffineWeight{std::vector<int>(lambda.labels.size(), 0)}, b, K);
  const cplx sn = lattice_theta_sum(alg.ctx.weyl, alg.translation_basis, num.point, opt).value;
  const cplx sd = lattice_theta_sum(alg.ctx.weyl, alg.translation_basis, den.point, opt).value;
  if (sd == cplx(0)) throw ConsistencyError("denominator vanishes");
  return std::exp(num.log_prefactor - den.log_prefactor) * sn / sd;
}

AffineCartanElement lattice_action(const FoldedData& fd, const QVector& gamma, const AffineCartanElement& x) {
  const RootSystem& base = fd.base;
  const Rational inv = Rational(1) / base.killing_scale;
  AffineCartanElement y;
  y.h = x.h - x.b * gamma;
  y.a = x.a + inv * base.inner(gamma, x.h) - x.b / Rational(2) * inv * base.inner(gamma, gamma);
  y.b = x.b;
  return y;
}

}  // namespace twaff
