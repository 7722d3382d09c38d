#include "twaff/folding.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace twaff {

namespace {

bool is_a_even(const RootSystem& base, int r) { return base.type == RootType::A && base.rank % 2 == 0 && r == 2; }

// Type of an irreducible root system from root counts and length classes.
// The rank-2 ratio-2 case is B2 = C2; `prefer_c` selects the tag.
RootType classify(const RootSystem& rs, bool prefer_c) {
  auto lengths = rs.squared_lengths();
  const auto l = static_cast<std::size_t>(rs.rank);
  if (lengths.size() == 3) return RootType::BC;
  if (lengths.size() == 1) {
    if (rs.roots.size() == l * (l + 1)) return RootType::A;
    if (rs.roots.size() == 72 && l == 6) return RootType::E6;
    return RootType::D;
  }
  Rational ratio = lengths[1] / lengths[0];
  if (ratio == Rational(3)) return RootType::G2;
  if (l == 4 && rs.roots.size() == 48) return RootType::F4;
  std::size_t n_long = 0;
  for (const auto& a : rs.roots)
    if (rs.norm2(a) == lengths[1]) ++n_long;
  if (l == 2) return prefer_c ? RootType::C : RootType::B;
  return n_long == 2 * l ? RootType::C : RootType::B;
}

RootType dual_type(RootType t) {
  if (t == RootType::B) return RootType::C;
  if (t == RootType::C) return RootType::B;
  return t;
}

}  // namespace

std::string to_string(LengthClass c) {
  switch (c) {
    case LengthClass::Long: return "long";
    case LengthClass::Middle: return "middle";
    case LengthClass::Short: return "short";
  }
  return "?";
}

DiagramAutomorphism make_automorphism(const RootSystem& base, std::vector<int> perm) {
  const int n = base.rank;
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("automorphism has wrong length");
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < n; ++i)
    if (sorted[static_cast<std::size_t>(i)] != i) throw std::invalid_argument("automorphism is not a permutation");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (base.cartan(i, j) != base.cartan(perm[i], perm[j]))
        throw std::invalid_argument("permutation is not a diagram symmetry of " + base.name());
  std::vector<int> cur = perm;
  int order = 1;
  auto is_id = [](const std::vector<int>& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
      if (p[i] != static_cast<int>(i)) return false;
    return true;
  };
  while (!is_id(cur)) {
    std::vector<int> next(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) next[i] = perm[static_cast<std::size_t>(cur[i])];
    cur = std::move(next);
    ++order;
  }
  return {std::move(perm), order};
}

DiagramAutomorphism standard_automorphism(const RootSystem& base, int r) {
  const int n = base.rank;
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  if (r == 1) return make_automorphism(base, perm);
  if (r == 2 && base.type == RootType::A && n >= 2) {
    for (int i = 0; i < n; ++i) perm[i] = n - 1 - i;
  } else if (r == 2 && base.type == RootType::D) {
    std::swap(perm[n - 2], perm[n - 1]);
  } else if (r == 3 && base.type == RootType::D && n == 4) {
    perm = {2, 1, 3, 0};
  } else if (r == 2 && base.type == RootType::E6) {
    perm = {5, 1, 4, 3, 2, 0};
  } else {
    throw std::invalid_argument("no diagram automorphism of order " + std::to_string(r) + " on " + base.name());
  }
  return make_automorphism(base, perm);
}

QVector FoldedData::tau(const QVector& v) const {
  QVector c = base.simple_coordinates(v);
  QVector out(base.ambient_dim(), Rational(0));
  for (std::size_t i = 0; i < c.size(); ++i)
    out = out + c[i] * base.simple_roots[static_cast<std::size_t>(autom.perm[i])];
  return out;
}

QVector FoldedData::project(const QVector& v) const {
  QVector sum = v;
  QVector cur = v;
  for (int i = 1; i < autom.order; ++i) {
    cur = tau(cur);
    sum = sum + cur;
  }
  return Rational(1, autom.order) * sum;
}

Eigen::VectorXd FoldedData::to_lso(const QVector& v) const {
  std::vector<double> d = to_double(v);
  return to_lso(Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size())));
}

Eigen::VectorXd FoldedData::to_lso(const Eigen::VectorXd& v) const {
  const auto dim = static_cast<Eigen::Index>(base.ambient_dim());
  Eigen::MatrixXd f(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) f(i, j) = to_double(base.form(i, j));
  return lso * (f * v);
}

Eigen::VectorXd FoldedData::from_lso(const Eigen::VectorXd& coords) const { return lso.transpose() * coords; }

QMatrix FoldedData::fixed_gram() const {
  QMatrix g(fixed_basis.size(), fixed_basis.size());
  for (std::size_t i = 0; i < fixed_basis.size(); ++i)
    for (std::size_t j = 0; j < fixed_basis.size(); ++j) g(i, j) = base.inner(fixed_basis[i], fixed_basis[j]);
  return g;
}

bool FoldedData::is_tau_invariant(const WeightVector& w) const {
  for (std::size_t i = 0; i < w.coords.size(); ++i)
    if (w.coords[i] != w.coords[static_cast<std::size_t>(autom.perm[i])]) return false;
  return true;
}

FoldedData fold(const RootSystem& base, const DiagramAutomorphism& autom) {
  if (static_cast<int>(autom.perm.size()) != base.rank) throw std::invalid_argument("automorphism rank mismatch");
  make_automorphism(base, autom.perm);
  FoldedData fd;
  fd.base = base;
  fd.autom = autom;
  const int r = autom.order;
  const bool a_even = is_a_even(base, r);
  fd.a0 = a_even ? 2 : 1;

  std::vector<bool> used(static_cast<std::size_t>(base.rank), false);
  for (int i = 0; i < base.rank; ++i) {
    if (used[i]) continue;
    QVector sum(base.ambient_dim(), Rational(0));
    for (int j = i; !used[j]; j = autom.perm[j]) {
      used[j] = true;
      sum = sum + base.simple_roots[j];
    }
    fd.fixed_basis.push_back(sum);
  }
  fd.dim_T_mod_S0 = base.rank - fd.l();

  // Form-orthonormal basis of LS0.
  const auto dim = static_cast<Eigen::Index>(base.ambient_dim());
  const auto l = static_cast<Eigen::Index>(fd.l());
  Eigen::MatrixXd f(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) f(i, j) = to_double(base.form(i, j));
  fd.lso.resize(l, dim);
  for (Eigen::Index k = 0; k < l; ++k) {
    std::vector<double> b = to_double(fd.fixed_basis[static_cast<std::size_t>(k)]);
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(b.data(), dim);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < k; ++j) v -= (fd.lso.row(j).dot(f * v)) * fd.lso.row(j).transpose();
    fd.lso.row(k) = v.transpose() / std::sqrt(v.dot(f * v));
  }

  std::map<QVector, FoldedRoot> restricted;
  for (const auto& a : base.roots) {
    QVector bar = fd.project(a);
    QVector ta = fd.tau(a);
    LengthClass cls = LengthClass::Short;
    if (ta == a)
      cls = LengthClass::Long;
    else if (a_even && base.inner(a, ta) == Rational(0))
      cls = LengthClass::Middle;
    auto [it, fresh] = restricted.try_emplace(bar, FoldedRoot{bar, 0, cls});
    if (!fresh && it->second.length_class != cls)
      throw std::logic_error("inconsistent length class for a restricted root");
    ++it->second.multiplicity;
  }
  std::vector<QVector> rtau_roots;
  std::vector<QVector> r1_roots;
  for (const auto& [v, fr] : restricted) {
    fd.folded_roots.push_back(fr);
    rtau_roots.push_back(v);
    if (a_even) {
      if (fr.length_class != LengthClass::Short) r1_roots.push_back(Rational(2) * v);
    } else {
      r1_roots.push_back((Rational(2) / base.norm2(v)) * v);
    }
  }
  fd.r_tau = root_system_from_roots(RootType::A, fd.l(), rtau_roots, base.form, base.killing_scale, base.rho);
  fd.r1 = root_system_from_roots(RootType::A, fd.l(), r1_roots, base.form, base.killing_scale, base.rho);

  const bool prefer_c = base.type == RootType::A;
  if (r == 1) {
    fd.r_tau.type = base.type;
    fd.r1.type = dual_type(base.type);
  } else {
    fd.r_tau.type = a_even ? RootType::BC : classify(fd.r_tau, prefer_c);
    fd.r1.type = a_even ? RootType::C : dual_type(fd.r_tau.type);
  }
  // rho is tau-fixed; for twisted folds it equals the Weyl vector of R^1.
  fd.rho_tau = base.rho;
  return fd;
}

FoldedData fold(RootType type, int rank, int r) {
  RootSystem base = build_root_system(type, rank);
  return fold(base, standard_automorphism(base, r));
}

WeylOrders weyl_group_orders(const FoldedData& fd) {
  WeylOrders out;
  out.order_W_tau = fd.r1.weyl_order();
  switch (fd.r()) {
    case 1: out.order_W_S = out.order_W_tau; break;
    case 2: out.order_W_S = (std::size_t{1} << fd.dim_T_mod_S0) * out.order_W_tau; break;
    default: out.order_W_S = 3 * out.order_W_tau; break;
  }
  return out;
}

LatticeBasis m_lattice_basis(const FoldedData& fd) {
  LatticeBasis lb;
  for (const auto& a : fd.r1.simple_roots) lb.basis.push_back(fd.r1.coroot(a));
  QMatrix g(lb.basis.size(), lb.basis.size());
  for (std::size_t i = 0; i < lb.basis.size(); ++i)
    for (std::size_t j = 0; j < lb.basis.size(); ++j) g(i, j) = fd.base.inner(lb.basis[i], lb.basis[j]);
  lb.gram_det = g.determinant();
  return lb;
}

FoldedData fold_from_tag(const std::string& tag) {
  auto caret = tag.find('^');
  std::string head = tag.substr(0, caret);
  int r = 1;
  if (caret != std::string::npos) {
    std::string tail = tag.substr(caret + 1);
    if (!tail.empty() && tail.front() == '(' && tail.back() == ')') tail = tail.substr(1, tail.size() - 2);
    if (tail.empty() || !std::all_of(tail.begin(), tail.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw std::invalid_argument("malformed algebra tag '" + tag + "'");
    r = std::stoi(tail);
  }
  auto [type, rank] = parse_type_name(head);
  return fold(type, rank, r);
}

std::string algebra_tag(const FoldedData& fd) {
  return fd.r() == 1 ? fd.base.name() : fd.base.name() + "^" + std::to_string(fd.r());
}

}  // namespace twaff
