#include "twaff/grouprep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace twaff {

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix unit(int n, int i, int j) {
  CMatrix e = CMatrix::Zero(n, n);
  e(i, j) = 1;
  return e;
}

// vec(A X B) = (B^T kron A) vec(X), column-major vec.
CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Null space of the stacked homogeneous system sum_k |M_k v|^2 = 0.
std::vector<Eigen::VectorXcd> null_space(const CMatrix& gram, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<Eigen::VectorXcd> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) <= rel_tol * top) out.push_back(es.eigenvectors().col(i));
  return out;
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> s(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      out.push_back(s);
      return;
    }
    for (int i = start; i < n; ++i) {
      s[static_cast<std::size_t>(depth)] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

cplx det_small(const CMatrix& a) {
  switch (a.rows()) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    case 3:
      return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
             a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    default:
      return a.partialPivLu().determinant();
  }
}

// Coordinates of a traceless matrix on the adjoint basis: off-diagonal units, then H_k.
struct AdjointBasis {
  int n;
  std::vector<std::pair<int, int>> off;
  int dim() const { return static_cast<int>(off.size()) + n - 1; }
  CMatrix element(int b) const {
    if (b < static_cast<int>(off.size())) return unit(n, off[b].first, off[b].second);
    const int k = b - static_cast<int>(off.size());
    return unit(n, k, k) - unit(n, k + 1, k + 1);
  }
  Eigen::VectorXcd coords(const CMatrix& y) const {
    Eigen::VectorXcd c(dim());
    for (std::size_t b = 0; b < off.size(); ++b) c(static_cast<Eigen::Index>(b)) = y(off[b].first, off[b].second);
    cplx run = 0;
    for (int k = 0; k + 1 < n; ++k) {
      run += y(k, k);
      c(static_cast<Eigen::Index>(off.size()) + k) = run;
    }
    return c;
  }
};

AdjointBasis adjoint_basis(int n) {
  AdjointBasis b{n, {}};
  b.off.emplace_back(0, n - 1);  // highest root first
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !(i == 0 && j == n - 1)) b.off.emplace_back(i, j);
  return b;
}

}  // namespace

CMatrix SUnModel::tau(const CMatrix& g) const {
  if (r == 1) return g;
  return J * g.conjugate() * J.adjoint();
}

CMatrix SUnModel::tau_algebra(const CMatrix& x) const {
  if (r == 1) return x;
  return -J * x.transpose() * J.adjoint();
}

CMatrix SUnModel::torus(const Eigen::VectorXd& z) const {
  const Eigen::VectorXd x = fold.from_lso(z);
  CMatrix d = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::exp(cplx(0, 2 * kPi * x(i)));
  return d;
}

CMatrix SUnModel::simple_e(int i) const { return unit(n, i, i + 1); }
CMatrix SUnModel::simple_f(int i) const { return unit(n, i + 1, i); }

int SUnModel::root_index(int a, int b) const {
  for (std::size_t k = 0; k < chevalley.size(); ++k)
    if (chevalley[k].i == a && chevalley[k].j == b) return static_cast<int>(k);
  throw std::invalid_argument("not a positive root");
}

int SUnModel::pinning_sign(int index) const {
  if (r == 1 || n % 2 == 0) return 1;
  const int ht = chevalley[static_cast<std::size_t>(index)].j - chevalley[static_cast<std::size_t>(index)].i;
  return ht % 2 == 0 ? -1 : 1;
}

SUnModel make_sun_model(int n, int r) {
  if (n < 2) throw std::invalid_argument("SU(n) needs n >= 2");
  if (r != 1 && r != 2) throw std::invalid_argument("SU(n) admits only r = 1 or r = 2");
  if (r == 2 && n < 3) throw std::invalid_argument("SU(2) has no diagram automorphism");
  SUnModel m;
  m.n = n;
  m.r = r;
  m.fold = fold(RootType::A, n - 1, r);
  m.J = CMatrix::Identity(n, n);
  if (r == 2) {
    // -J e_i^T = e_{tau i} J and -J f_i^T = f_{tau i} J on vec(J), with tau(i) = n - 2 - i.
    const CMatrix id = CMatrix::Identity(n, n);
    CMatrix gram = CMatrix::Zero(n * n, n * n);
    for (int i = 0; i + 1 < n; ++i) {
      const int ti = n - 2 - i;
      const CMatrix eq = -kron(unit(n, i + 1, i).transpose(), id) - kron(id, unit(n, ti, ti + 1));
      const CMatrix fq = -kron(unit(n, i, i + 1).transpose(), id) - kron(id, unit(n, ti + 1, ti));
      gram += eq.adjoint() * eq + fq.adjoint() * fq;
    }
    const auto ns = null_space(gram, 1e-10);
    if (ns.size() != 1) throw ConsistencyError("pinning equations for J do not have a 1-dimensional solution");
    CMatrix j = Eigen::Map<const CMatrix>(ns.front().data(), n, n);
    Eigen::Index bi = 0, bj = 0;
    j.cwiseAbs().maxCoeff(&bi, &bj);
    j /= j(bi, bj);
    for (Eigen::Index a = 0; a < j.size(); ++a) j.data()[a] = cplx(std::round(j.data()[a].real()), 0);
    m.J = j;
  }
  // Stored Chevalley basis: E_ij, except that for A_{2n-1} the partner of a non-fixed root is
  // defined as the image of the lexicographically smaller one.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) m.chevalley.push_back({i, j, unit(n, i, j)});
  if (r == 2 && n % 2 == 0) {
    for (auto& rv : m.chevalley) {
      const int ti = n - 1 - rv.j, tj = n - 1 - rv.i;
      if (std::make_pair(ti, tj) > std::make_pair(rv.i, rv.j)) {
        auto& partner = m.chevalley[static_cast<std::size_t>(m.root_index(ti, tj))];
        partner.e = m.tau_algebra(rv.e);
      }
    }
  }
  return m;
}

double pinning_residual(const SUnModel& m) {
  double worst = 0;
  for (std::size_t k = 0; k < m.chevalley.size(); ++k) {
    const auto& rv = m.chevalley[k];
    const int ti = m.r == 1 ? rv.i : m.n - 1 - rv.j;
    const int tj = m.r == 1 ? rv.j : m.n - 1 - rv.i;
    const CMatrix target = double(m.pinning_sign(static_cast<int>(k))) *
                           m.chevalley[static_cast<std::size_t>(m.root_index(ti, tj))].e;
    worst = std::max(worst, (m.tau_algebra(rv.e) - target).cwiseAbs().maxCoeff());
  }
  return worst;
}

RepModel make_rep(const SUnModel& m, RepKind kind, int k) {
  const int n = m.n;
  RepModel rep;
  rep.kind = kind;
  rep.k = k;
  QVector coords(static_cast<std::size_t>(n - 1), Rational(0));
  switch (kind) {
    case RepKind::Defining: {
      rep.dim = n;
      coords[0] = 1;
      rep.rho = [](const CMatrix& g) { return g; };
      rep.drho = [](const CMatrix& x) { return x; };
      break;
    }
    case RepKind::Exterior: {
      if (k < 1 || k >= n) throw std::invalid_argument("exterior degree must lie in [1, n-1]");
      auto sets = subsets(n, k);
      rep.dim = static_cast<int>(sets.size());
      coords[static_cast<std::size_t>(k - 1)] = 1;
      rep.rho = [sets](const CMatrix& g) {
        const auto d = static_cast<Eigen::Index>(sets.size());
        CMatrix out(d, d);
        const auto kk = static_cast<Eigen::Index>(sets.front().size());
        CMatrix minor(kk, kk);
        for (Eigen::Index a = 0; a < d; ++a)
          for (Eigen::Index b = 0; b < d; ++b) {
            for (Eigen::Index p = 0; p < kk; ++p)
              for (Eigen::Index q = 0; q < kk; ++q) minor(p, q) = g(sets[a][p], sets[b][q]);
            out(a, b) = det_small(minor);
          }
        return out;
      };
      rep.drho = [sets, n](const CMatrix& x) {
        const auto d = static_cast<Eigen::Index>(sets.size());
        CMatrix out = CMatrix::Zero(d, d);
        for (Eigen::Index b = 0; b < d; ++b) {
          for (std::size_t pos = 0; pos < sets[b].size(); ++pos) {
            for (int i = 0; i < n; ++i) {
              if (x(i, sets[b][pos]) == cplx(0)) continue;
              std::vector<int> s = sets[b];
              s[pos] = i;
              // sign of the sorting permutation; repeated index kills the term
              int sign = 1;
              bool repeated = false;
              for (std::size_t p = 0; p < s.size(); ++p)
                for (std::size_t q = p + 1; q < s.size(); ++q) {
                  if (s[p] == s[q]) repeated = true;
                  if (s[p] > s[q]) sign = -sign;
                }
              if (repeated) continue;
              std::sort(s.begin(), s.end());
              const auto a = std::find(sets.begin(), sets.end(), s) - sets.begin();
              out(a, b) += double(sign) * x(i, sets[b][pos]);
            }
          }
        }
        return out;
      };
      break;
    }
    case RepKind::Adjoint: {
      const AdjointBasis basis = adjoint_basis(n);
      rep.dim = basis.dim();
      if (n == 2)
        coords[0] = 2;
      else
        coords[0] = 1, coords[static_cast<std::size_t>(n - 2)] = 1;
      rep.rho = [basis](const CMatrix& g) {
        CMatrix out(basis.dim(), basis.dim());
        const CMatrix gi = g.inverse();
        for (int b = 0; b < basis.dim(); ++b) out.col(b) = basis.coords(g * basis.element(b) * gi);
        return out;
      };
      rep.drho = [basis](const CMatrix& x) {
        CMatrix out(basis.dim(), basis.dim());
        for (int b = 0; b < basis.dim(); ++b) {
          const CMatrix y = basis.element(b);
          out.col(b) = basis.coords(x * y - y * x);
        }
        return out;
      };
      if (m.r == 2) {
        const Eigen::VectorXcd img = basis.coords(m.tau_algebra(basis.element(0)));
        rep.pinned_highest_sign = img(0).real() > 0 ? 1 : -1;
      }
      break;
    }
  }
  rep.lambda = WeightVector{coords};
  rep.highest_index = 0;
  rep.T = CMatrix::Identity(rep.dim, rep.dim);
  return rep;
}

CMatrix solve_intertwiner(const SUnModel& m, const RepModel& rep) {
  if (!m.fold.is_tau_invariant(rep.lambda))
    throw std::invalid_argument("highest weight is not tau-invariant; no intertwiner exists");
  const int d = rep.dim;
  if (m.r == 1) return CMatrix::Identity(d, d);
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix gram = CMatrix::Zero(d * d, d * d);
  for (int i = 0; i + 1 < m.n; ++i) {
    for (const CMatrix& x : {m.simple_e(i), m.simple_f(i)}) {
      const CMatrix a = rep.drho(x), b = rep.drho(m.tau_algebra(x));
      const CMatrix eq = kron(a.transpose(), id) - kron(id, b);
      gram += eq.adjoint() * eq;
    }
  }
  const auto ns = null_space(gram, 1e-10);
  if (ns.size() != 1)
    throw ConsistencyError("intertwiner null space has dimension " + std::to_string(ns.size()) + ", expected 1");
  CMatrix t = Eigen::Map<const CMatrix>(ns.front().data(), d, d);
  const CMatrix tr = t * t;  // r = 2
  const cplx c = tr(0, 0);
  if ((tr - c * id).cwiseAbs().maxCoeff() > 1e-8 * std::abs(c)) throw ConsistencyError("T^r is not scalar");
  t /= std::sqrt(c);
  const cplx mu = t(rep.highest_index, rep.highest_index);
  if (std::abs(std::abs(mu) - 1) > 1e-8) throw ConsistencyError("highest weight vector is not an eigenvector of T");
  t /= mu;
  return t;
}

CMatrix pinned_adjoint_lift(const SUnModel& m) {
  const AdjointBasis basis = adjoint_basis(m.n);
  CMatrix out(basis.dim(), basis.dim());
  for (int b = 0; b < basis.dim(); ++b) out.col(b) = basis.coords(m.tau_algebra(basis.element(b)));
  return out;
}

CMatrix haar_sample(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix z(n, n);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = cplx(nd(rng), nd(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& rr = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const cplx d = rr(j, j);
    q.col(j) *= d / std::abs(d);
  }
  const cplx det = q.determinant();
  q *= std::pow(det, -1.0 / n);
  return q;
}

cplx sun_character_eigen(const std::vector<int>& a, const Eigen::VectorXcd& x) {
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(a.size()) != n - 1) throw std::invalid_argument("weight has wrong rank");
  std::vector<int> part(static_cast<std::size_t>(n), 0);
  for (int j = n - 2; j >= 0; --j) part[j] = part[j + 1] + a[j];
  auto bialternant = [&](const Eigen::VectorXcd& y) {
    CMatrix num(n, n), den(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        num(i, j) = std::pow(y(i), part[j] + n - 1 - j);
        den(i, j) = std::pow(y(i), n - 1 - j);
      }
    return std::make_pair(det_small(num), det_small(den));
  };
  auto [num, den] = bialternant(x);
  if (std::abs(den) > 1e-9) return num / den;
  // Coincident eigenvalues: symmetric average of two nearby regular points, error O(eps^2).
  const double eps = 1e-4;
  cplx sum = 0;
  for (double s : {1.0, -1.0}) {
    Eigen::VectorXcd y = x;
    for (int i = 0; i < n; ++i) y(i) *= std::exp(cplx(0, s * eps * (i + 1) * (i + 2)));
    auto [nn, dd] = bialternant(y);
    sum += nn / dd;
  }
  return sum / 2.0;
}

cplx sun_character(const std::vector<int>& a, const CMatrix& g) {
  Eigen::ComplexEigenSolver<CMatrix> es(g, false);
  return sun_character_eigen(a, es.eigenvalues());
}

HeatKernel::HeatKernel(int n, double exponent_scale, double tol) : n_(n) {
  if (!(exponent_scale > 0)) throw std::invalid_argument("heat kernel needs s t T > 0");
  const RootSystem base = build_root_system(RootType::A, n - 1);
  const double kappa = to_double(base.killing_scale);
  const double rho2 = to_double(base.norm2(base.rho));
  const double a = exponent_scale * kappa / 2;
  // d(l) <= C |l+rho|^N with C = prod |a| / <rho, a>.
  const int npos = static_cast<int>(base.positive_roots.size());
  double c = 1;
  for (const auto& al : base.positive_roots) c *= std::sqrt(to_double(base.norm2(al))) / to_double(base.inner(base.rho, al));
  Eigen::MatrixXd fw(base.ambient_dim(), n - 1);
  for (int i = 0; i < n - 1; ++i) {
    const auto v = to_double(base.fundamental_weights[static_cast<std::size_t>(i)]);
    for (std::size_t k = 0; k < v.size(); ++k) fw(static_cast<Eigen::Index>(k), i) = v[k];
  }
  const double vol = std::sqrt((fw.transpose() * fw).determinant());
  double diam = 0;
  for (int i = 0; i < n - 1; ++i) diam += fw.col(i).norm();
  auto f = [&](double s) { return c * c * std::pow(s, 2 * npos) * std::exp(-a * (s * s - rho2)); };
  double radius = std::max(std::sqrt(2.0 * npos / a) + diam, std::sqrt(rho2) + diam) + 1;
  for (;;) {
    tail_ = lattice_tail_bound(n - 1, vol, diam, f, radius);
    if (tail_ <= tol) break;
    radius *= 1.2;
    if (radius > 1e4) throw ResourceError("heat kernel tail bound stuck at " + std::to_string(tail_));
  }
  for (const auto& w : dominant_weights_below(base, radius * radius)) {
    std::vector<int> fc;
    for (const auto& q : w.coords) fc.push_back(static_cast<int>(q.numerator()));
    const double l2 = to_double(base.norm2(base.rho + to_ambient(base, w)));
    std::vector<int> ex(static_cast<std::size_t>(n), 0);
    for (int j = n - 2; j >= 0; --j) ex[static_cast<std::size_t>(j)] = ex[static_cast<std::size_t>(j + 1)] + fc[static_cast<std::size_t>(j)];
    for (int j = 0; j < n; ++j) ex[static_cast<std::size_t>(j)] += n - 1 - j;
    max_exponent_ = std::max(max_exponent_, ex[0]);
    weights_.push_back(fc);
    exponents_.push_back(ex);
    coeff_.push_back(to_double(weyl_dimension(base, w)) * std::exp(-a * (l2 - rho2)));
  }
}

double HeatKernel::evaluate_regular(const Eigen::VectorXcd& x) const {
  const int n = n_;
  // pw(i, p) = x_i^p; every bialternant entry is a table lookup.
  CMatrix pw(n, max_exponent_ + 1);
  for (int i = 0; i < n; ++i) {
    pw(i, 0) = 1;
    for (int p = 1; p <= max_exponent_; ++p) pw(i, p) = pw(i, p - 1) * x(i);
  }
  CMatrix den(n, n), num(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) den(i, j) = pw(i, n - 1 - j);
  const cplx vd = det_small(den);
  double s = 0;
  for (std::size_t w = 0; w < exponents_.size(); ++w) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) num(i, j) = pw(i, exponents_[w][static_cast<std::size_t>(j)]);
    s += coeff_[w] * (det_small(num) / vd).real();
  }
  return s;
}

double HeatKernel::evaluate_eigen(const Eigen::VectorXcd& x) const {
  const int n = n_;
  cplx vd = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) vd *= x(i) - x(j);
  if (std::abs(vd) > 1e-9) return evaluate_regular(x);
  const double eps = 1e-4;
  double sum = 0;
  for (double sg : {1.0, -1.0}) {
    Eigen::VectorXcd y = x;
    for (int i = 0; i < n; ++i) y(i) *= std::exp(cplx(0, sg * eps * (i + 1) * (i + 2)));
    sum += evaluate_regular(y);
  }
  return sum / 2;
}

double HeatKernel::operator()(const CMatrix& g) const {
  Eigen::ComplexEigenSolver<CMatrix> es(g, false);
  return evaluate_eigen(es.eigenvalues());
}

WeylIntegralRecord weyl_integral_check(const SUnModel& m, const std::function<double(const CMatrix&)>& f,
                                       std::size_t n_mc, int grid, int max_frequency, std::uint64_t seed,
                                       int threads) {
  if (grid < 2 * max_frequency + 1)
    throw std::invalid_argument("grid of " + std::to_string(grid) + " points per axis cannot resolve frequency " +
                                std::to_string(max_frequency));
  WeylIntegralRecord rec;
  rec.mc = monte_carlo(n_mc, seed, threads, [&](std::mt19937_64& rng) { return f(haar_sample(m.n, rng)); });
  const CharacterContext ctx(m.fold);
  const LatticeBasis mb = m_lattice_basis(m.fold);
  const int l = m.fold.l();
  std::vector<Eigen::VectorXd> basis;
  for (const auto& b : mb.basis) basis.push_back(m.fold.to_lso(b));
  std::size_t total = 1;
  for (int j = 0; j < l; ++j) total *= static_cast<std::size_t>(grid);
  double acc = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(l);
    std::size_t rem = idx;
    for (int j = 0; j < l; ++j) {
      z += (static_cast<double>(rem % static_cast<std::size_t>(grid)) / grid) * basis[static_cast<std::size_t>(j)];
      rem /= static_cast<std::size_t>(grid);
    }
    const cplx dlt = alternating_sum(ctx.weyl, ctx.rho_tau, z.cast<cplx>());
    acc += f(m.torus(z)) * std::norm(dlt);
  }
  rec.torus_value = acc / static_cast<double>(total) / static_cast<double>(ctx.weyl.size());
  return rec;
}

int default_strata(const SUnModel& m) { return m.r == 1 ? 1 : 8; }

MonteCarloEstimate heatprop_group_side(const SUnModel& m, const AffineAlgebra& alg, const AffinePoint& p,
                                       std::size_t n_mc, std::uint64_t seed, double tol, int threads,
                                       double* prefactor, int strata) {
  if (strata <= 0) strata = default_strata(m);
  if (alg.tag() != algebra_tag(m.fold)) throw std::invalid_argument("algebra does not match the group model");
  if (p.h.real().norm() > 1e-12 || p.k.real().norm() > 1e-12)
    throw std::invalid_argument("heat-kernel route needs imaginary h and k");
  const double s = std::sqrt(alg.kappa);
  const Eigen::VectorXd zh = s * p.h.imag() / (2 * kPi), zk = s * p.k.imag() / (2 * kPi);
  const CMatrix g1 = m.torus(zh), g2inv = m.torus(-zk);
  // s = t / T^2 with T = 1/r, evaluated at time T: s t T = t.
  const HeatKernel hk(m.n, p.t, tol);
  const int l = alg.l;
  const Eigen::VectorXd rho_rf = alg.ctx.rho_tau * s;
  const cplx dh = alternating_sum_exp(alg.ctx.weyl, rho_rf, p.h);
  const cplx dk = alternating_sum_exp(alg.ctx.weyl, rho_rf, -p.k);
  const double vol = std::abs(alg.m_basis.determinant());
  const cplx pref = dh * dk * std::exp(-p.t * rho_rf.squaredNorm() / 2) / (vol * std::pow(2 * kPi / p.t, l / 2.0));
  if (prefactor) *prefactor = pref.real();
  // a(phi) = exp(i phi v), v = (n-2, -2, ..., -2, n-2): traceless, and a^{-1} tau(a) = a^{-2} is nontrivial.
  Eigen::VectorXd v = Eigen::VectorXd::Constant(m.n, -2.0);
  v(0) = v(m.n - 1) = m.n - 2;
  return monte_carlo(n_mc, seed, threads, [&](std::mt19937_64& rng) {
    const CMatrix g0 = haar_sample(m.n, rng);
    const double offset = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double acc = 0;
    for (int j = 0; j < strata; ++j) {
      const double phi = 2 * kPi * (offset + static_cast<double>(j)) / strata;
      CMatrix g = g0;
      for (int i = 0; i < m.n; ++i) g.row(i) *= std::exp(cplx(0, phi * v(i)));
      acc += hk.twisted(g1 * m.tau(g) * g2inv * g.adjoint());
    }
    return acc / strata;
  });
}

HeatPropRecord heatprop_check(const SUnModel& m, const AffineAlgebra& alg, const AffinePoint& p, std::size_t n_mc,
                              std::uint64_t seed, double tol, int threads, int strata) {
  HeatPropRecord rec;
  rec.seed = seed;
  rec.strata = strata > 0 ? strata : default_strata(m);
  rec.lhs = numerator_lattice_side(alg, p, SeriesOptions{tol}).value;
  const MonteCarloEstimate mc = heatprop_group_side(m, alg, p, n_mc, seed, tol, threads, &rec.prefactor, rec.strata);
  rec.mc_mean = mc.mean;
  rec.rhs = rec.prefactor * mc.mean;
  rec.sigma = std::abs(rec.prefactor) * mc.sigma;
  rec.rel_err = std::abs(rec.lhs - rec.rhs) / std::abs(rec.lhs);
  return rec;
}

ConvolutionRecord twisted_convolution_check(const SUnModel& m, const RepModel& rep, const CMatrix& g1,
                                            const CMatrix& g2, std::size_t n_mc, std::uint64_t seed, int threads) {
  ConvolutionRecord rec;
  const CMatrix g2inv = g2.adjoint();
  const double d = rep.dim;
  auto est = monte_carlo_vector(n_mc, seed, threads, 2, [&](std::mt19937_64& rng, double* out) {
    const CMatrix g = haar_sample(m.n, rng);
    const cplx v = d * rep.rho(g1 * m.tau(g) * g2inv * g.adjoint()).trace();
    out[0] = v.real();
    out[1] = v.imag();
  });
  rec.lhs_re = est[0];
  rec.lhs_im = est[1];
  rec.rhs = (rep.rho(g1) * rep.T).trace() * (rep.T.inverse() * rep.rho(g2inv)).trace();
  return rec;
}

Calibration calibrate_sign(const SUnModel& m, const RepModel& rep, int points, std::uint64_t seed) {
  const CharacterContext ctx(m.fold);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> ours, traces;
  for (int i = 0; i < points; ++i) {
    Eigen::VectorXd z(m.fold.l());
    for (int j = 0; j < z.size(); ++j) z(j) = u(rng);
    ours.push_back(character_ratio(ctx, ctx.shifted(rep.lambda), z.cast<cplx>()).value);
    traces.push_back((rep.rho(m.torus(z)) * rep.T).trace());
  }
  Calibration best{1, 1e300};
  for (int s : {1, -1}) {
    double err = 0;
    for (std::size_t i = 0; i < ours.size(); ++i) err = std::max(err, std::abs(ours[i] - double(s) * traces[i]));
    if (err < best.max_err) best = {s, err};
  }
  set_character_sign(ctx.tag(), rep.lambda, best.sign);
  return best;
}

}  // namespace twaff
