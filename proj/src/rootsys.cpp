#include "twaff/rootsys.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace twaff {

namespace {

QVector unit(std::size_t dim, std::size_t i, Rational s = 1) {
  QVector v(dim, Rational(0));
  v[i] = s;
  return v;
}

QMatrix scaled_identity(std::size_t dim, Rational s) {
  QMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = s;
  return m;
}

// Orbit of the simple roots under the group they generate.
std::vector<QVector> reflection_closure(const std::vector<QVector>& simple, const QMatrix& form) {
  std::set<QVector> seen(simple.begin(), simple.end());
  std::vector<QVector> frontier(simple.begin(), simple.end());
  while (!frontier.empty()) {
    std::vector<QVector> next;
    for (const auto& v : frontier) {
      for (const auto& a : simple) {
        Rational c = 2 * bilinear(form, v, a) / bilinear(form, a, a);
        QVector w = v - c * a;
        if (seen.insert(w).second) next.push_back(std::move(w));
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

Rational cartan_entry(const QMatrix& form, const QVector& a, const QVector& b) {
  return 2 * bilinear(form, a, b) / bilinear(form, b, b);
}

void finish(RootSystem& rs) {
  const std::size_t n = rs.simple_roots.size();
  rs.rank = static_cast<int>(n);
  rs.cartan = QMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rs.cartan(i, j) = cartan_entry(rs.form, rs.simple_roots[i], rs.simple_roots[j]);

  rs.positive_roots.clear();
  for (const auto& a : rs.roots) {
    QVector c = rs.simple_coordinates(a);
    bool nonneg = std::all_of(c.begin(), c.end(), [](const Rational& q) { return q >= 0; });
    if (nonneg) rs.positive_roots.push_back(a);
  }
  std::stable_sort(rs.positive_roots.begin(), rs.positive_roots.end(),
                   [&](const QVector& a, const QVector& b) { return rs.height(a) < rs.height(b); });

  rs.rho = QVector(rs.ambient_dim(), Rational(0));
  for (const auto& a : rs.positive_roots) rs.rho = rs.rho + a;
  rs.rho = Rational(1, 2) * rs.rho;

  // omega_i = sum_k (A^{-1})_{ik} a_k
  QMatrix inv = rs.cartan.inverse();
  rs.fundamental_weights.assign(n, QVector(rs.ambient_dim(), Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      rs.fundamental_weights[i] = rs.fundamental_weights[i] + inv(i, k) * rs.simple_roots[k];
}

}  // namespace

std::string type_letter(RootType type) {
  switch (type) {
    case RootType::A: return "A";
    case RootType::B: return "B";
    case RootType::C: return "C";
    case RootType::D: return "D";
    case RootType::E6: return "E";
    case RootType::F4: return "F";
    case RootType::G2: return "G";
    case RootType::BC: return "BC";
  }
  return "?";
}

std::string type_name(RootType type, int rank) { return type_letter(type) + std::to_string(rank); }

std::pair<RootType, int> parse_type_name(const std::string& name) {
  std::size_t pos = 0;
  while (pos < name.size() && std::isalpha(static_cast<unsigned char>(name[pos]))) ++pos;
  std::string letters = name.substr(0, pos);
  std::string digits = name.substr(pos);
  if (letters.empty() || digits.empty() ||
      !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw std::invalid_argument("malformed root system name '" + name + "'");
  int rank = std::stoi(digits);
  static const std::map<std::string, RootType> table = {
      {"A", RootType::A}, {"B", RootType::B}, {"C", RootType::C},  {"D", RootType::D},
      {"E", RootType::E6}, {"F", RootType::F4}, {"G", RootType::G2}, {"BC", RootType::BC}};
  auto it = table.find(letters);
  if (it == table.end()) throw std::invalid_argument("unknown root system type '" + letters + "'");
  return {it->second, rank};
}

bool RootSystem::is_root(const QVector& v) const { return std::binary_search(roots.begin(), roots.end(), v); }

QVector RootSystem::coroot(const QVector& a) const {
  if (!is_root(a)) throw std::invalid_argument("vector is not a root of " + name());
  return (Rational(2) / norm2(a)) * a;
}

QVector RootSystem::reflect(const QVector& a, const QVector& v) const {
  return v - (2 * inner(v, a) / norm2(a)) * a;
}

QVector RootSystem::simple_coordinates(const QVector& v) const {
  const std::size_t n = simple_roots.size();
  QMatrix gram(n, n);
  QVector rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = inner(v, simple_roots[i]);
    for (std::size_t j = 0; j < n; ++j) gram(i, j) = inner(simple_roots[i], simple_roots[j]);
  }
  return solve(gram, rhs);
}

Rational RootSystem::height(const QVector& root) const {
  Rational h = 0;
  for (const auto& c : simple_coordinates(root)) h += c;
  return h;
}

QVector RootSystem::highest_root() const {
  // For BC the reduced part relevant here is the set of non-divisible roots.
  QVector best;
  Rational best_h = -1;
  for (const auto& a : positive_roots) {
    if (type == RootType::BC && is_root(Rational(1, 2) * a)) continue;
    Rational h = height(a);
    if (h > best_h) {
      best_h = h;
      best = a;
    }
  }
  return best;
}

std::vector<Rational> RootSystem::squared_lengths() const {
  std::set<Rational> s;
  for (const auto& a : roots) s.insert(norm2(a));
  return {s.begin(), s.end()};
}

std::size_t RootSystem::weyl_order() const {
  std::set<QVector> seen{rho};
  std::vector<QVector> frontier{rho};
  while (!frontier.empty()) {
    std::vector<QVector> next;
    for (const auto& v : frontier)
      for (const auto& a : simple_roots) {
        QVector w = reflect(a, v);
        if (seen.insert(w).second) next.push_back(std::move(w));
      }
    frontier = std::move(next);
  }
  return seen.size();
}

std::size_t classical_weyl_order(RootType type, int n) {
  auto fact = [](int k) {
    std::size_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::size_t>(i);
    return f;
  };
  switch (type) {
    case RootType::A: return fact(n + 1);
    case RootType::B:
    case RootType::C:
    case RootType::BC: return (std::size_t{1} << n) * fact(n);
    case RootType::D: return (std::size_t{1} << (n - 1)) * fact(n);
    case RootType::E6: return 51840;
    case RootType::F4: return 1152;
    case RootType::G2: return 12;
  }
  return 0;
}

std::size_t classical_root_count(RootType type, int n) {
  const auto m = static_cast<std::size_t>(n);
  switch (type) {
    case RootType::A: return m * (m + 1);
    case RootType::B:
    case RootType::C: return 2 * m * m;
    case RootType::BC: return 2 * m * m + 2 * m;
    case RootType::D: return 2 * m * (m - 1);
    case RootType::E6: return 72;
    case RootType::F4: return 48;
    case RootType::G2: return 12;
  }
  return 0;
}

RootSystem build_root_system(RootType type, int n) {
  auto reject = [&](const std::string& why) {
    throw std::invalid_argument("invalid root system " + type_name(type, n) + ": " + why);
  };
  RootSystem rs;
  rs.type = type;
  std::vector<QVector>& s = rs.simple_roots;
  int dual_coxeter = 0;
  switch (type) {
    case RootType::A: {
      if (n < 1) reject("A requires rank >= 1");
      const std::size_t d = static_cast<std::size_t>(n) + 1;
      rs.form = scaled_identity(d, 1);
      for (std::size_t i = 0; i + 1 < d; ++i) s.push_back(unit(d, i) - unit(d, i + 1));
      dual_coxeter = n + 1;
      break;
    }
    case RootType::B:
    case RootType::C:
    case RootType::BC: {
      if (n < (type == RootType::BC ? 1 : 2)) reject("rank too small");
      const auto d = static_cast<std::size_t>(n);
      rs.form = scaled_identity(d, type == RootType::C ? Rational(1, 2) : Rational(1));
      for (std::size_t i = 0; i + 1 < d; ++i) s.push_back(unit(d, i) - unit(d, i + 1));
      s.push_back(unit(d, d - 1, type == RootType::C ? 2 : 1));
      dual_coxeter = type == RootType::B ? 2 * n - 1 : (type == RootType::C ? n + 1 : 2 * n + 1);
      break;
    }
    case RootType::D: {
      if (n < 3) reject("D requires rank >= 3");
      const auto d = static_cast<std::size_t>(n);
      rs.form = scaled_identity(d, 1);
      for (std::size_t i = 0; i + 1 < d; ++i) s.push_back(unit(d, i) - unit(d, i + 1));
      s.push_back(unit(d, d - 2) + unit(d, d - 1));
      dual_coxeter = 2 * n - 2;
      break;
    }
    case RootType::E6: {
      if (n != 6) reject("E6 requires rank 6");
      const std::size_t d = 8;
      rs.form = scaled_identity(d, 1);
      QVector a1(d, Rational(-1, 2));
      a1[0] = Rational(1, 2);
      a1[7] = Rational(1, 2);
      s.push_back(a1);
      s.push_back(unit(d, 0) + unit(d, 1));
      for (std::size_t i = 1; i <= 4; ++i) s.push_back(unit(d, i) - unit(d, i - 1));
      dual_coxeter = 12;
      break;
    }
    case RootType::F4: {
      if (n != 4) reject("F4 requires rank 4");
      const std::size_t d = 4;
      rs.form = scaled_identity(d, 1);
      s.push_back(unit(d, 1) - unit(d, 2));
      s.push_back(unit(d, 2) - unit(d, 3));
      s.push_back(unit(d, 3));
      s.push_back(QVector{Rational(1, 2), Rational(-1, 2), Rational(-1, 2), Rational(-1, 2)});
      dual_coxeter = 9;
      break;
    }
    case RootType::G2: {
      if (n != 2) reject("G2 requires rank 2");
      const std::size_t d = 3;
      rs.form = scaled_identity(d, Rational(1, 3));
      s.push_back(QVector{1, -1, 0});
      s.push_back(QVector{-2, 1, 1});
      dual_coxeter = 4;
      break;
    }
  }
  rs.roots = reflection_closure(s, rs.form);
  if (type == RootType::BC) {
    std::vector<QVector> doubled;
    for (const auto& a : rs.roots)
      if (rs.norm2(a) == Rational(1)) doubled.push_back(Rational(2) * a);
    rs.roots.insert(rs.roots.end(), doubled.begin(), doubled.end());
    std::sort(rs.roots.begin(), rs.roots.end());
  }
  rs.killing_scale = Rational(1, 2 * dual_coxeter);
  finish(rs);
  return rs;
}

RootSystem root_system_from_roots(RootType type, int rank, std::vector<QVector> roots, QMatrix form,
                                  Rational killing_scale, const std::optional<QVector>& positive_direction) {
  if (roots.empty()) throw std::invalid_argument("empty root set");
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  const std::size_t d = roots.front().size();

  QVector functional(d);
  if (positive_direction) {
    functional = form * *positive_direction;
    for (const auto& a : roots) {
      Rational v = 0;
      for (std::size_t i = 0; i < d; ++i) v += functional[i] * a[i];
      if (v == Rational(0)) throw std::invalid_argument("positive direction is singular on the root set");
    }
  }
  for (std::int64_t base = 7; !positive_direction; base += 2) {
    std::int64_t p = 1;
    for (std::size_t i = 0; i < d; ++i, p *= base) functional[i] = Rational(p, 1) + Rational(1, 2 * base + 1);
    bool regular = std::none_of(roots.begin(), roots.end(), [&](const QVector& a) {
      Rational v = 0;
      for (std::size_t i = 0; i < d; ++i) v += functional[i] * a[i];
      return v == Rational(0);
    });
    if (regular) break;
    if (base > 101) throw std::domain_error("no regular functional found");
  }
  auto value = [&](const QVector& a) {
    Rational v = 0;
    for (std::size_t i = 0; i < d; ++i) v += functional[i] * a[i];
    return v;
  };
  std::vector<QVector> positive;
  for (const auto& a : roots)
    if (value(a) > 0) positive.push_back(a);
  std::set<QVector> pos_set(positive.begin(), positive.end());
  std::vector<QVector> simple;
  for (const auto& a : positive) {
    bool decomposable = std::any_of(positive.begin(), positive.end(),
                                    [&](const QVector& b) { return b != a && pos_set.count(a - b) > 0; });
    if (!decomposable) simple.push_back(a);
  }
  std::sort(simple.begin(), simple.end(), [&](const QVector& a, const QVector& b) { return value(a) < value(b); });
  if (static_cast<int>(simple.size()) != rank)
    throw std::domain_error("root set has " + std::to_string(simple.size()) + " simple roots, expected rank " +
                            std::to_string(rank));

  RootSystem rs;
  rs.type = type;
  rs.form = std::move(form);
  rs.roots = std::move(roots);
  rs.simple_roots = std::move(simple);
  rs.killing_scale = killing_scale;
  finish(rs);
  return rs;
}

QVector dual_root(const RootSystem& r, const QVector& a) { return r.coroot(a); }

bool WeightVector::is_dominant() const {
  return std::all_of(coords.begin(), coords.end(), [](const Rational& c) { return c >= 0; });
}

QVector to_ambient(const RootSystem& r, const WeightVector& w) {
  if (w.coords.size() != r.simple_roots.size())
    throw std::invalid_argument("weight has " + std::to_string(w.coords.size()) + " coordinates, rank is " +
                                std::to_string(r.rank));
  QVector v(r.ambient_dim(), Rational(0));
  for (std::size_t i = 0; i < w.coords.size(); ++i) v = v + w.coords[i] * r.fundamental_weights[i];
  return v;
}

WeightVector to_weight(const RootSystem& r, const QVector& ambient) {
  WeightVector w;
  for (const auto& a : r.simple_roots) w.coords.push_back(2 * r.inner(ambient, a) / r.norm2(a));
  return w;
}

std::vector<WeightVector> dominant_weights_below(const RootSystem& r, double norm_cap) {
  const std::size_t n = r.simple_roots.size();
  std::vector<std::pair<Rational, WeightVector>> found;
  QVector coords(n, Rational(0));
  auto norm_of = [&](const QVector& c) {
    QVector v = r.rho + to_ambient(r, WeightVector{c});
    return r.norm2(v);
  };
  // The norm is increasing in every coordinate, so each axis can stop at the first overshoot.
  auto fits = [&](const Rational& q) { return to_double(q) <= norm_cap * (1 + 1e-14) + 1e-14; };
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      Rational q = norm_of(coords);
      if (fits(q)) found.emplace_back(q, WeightVector{coords});
      return;
    }
    for (std::int64_t c = 0;; ++c) {
      coords[i] = c;
      if (!fits(norm_of(coords))) break;
      self(self, i + 1);
    }
    coords[i] = 0;
  };
  recurse(recurse, 0);
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second.coords < b.second.coords;
  });
  std::vector<WeightVector> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(std::move(f.second));
  return out;
}

Rational weyl_dimension(const RootSystem& r, const WeightVector& w) {
  QVector lr = to_ambient(r, w) + r.rho;
  Rational d = 1;
  for (const auto& a : r.positive_roots) {
    if (r.type == RootType::BC && r.is_root(Rational(1, 2) * a)) continue;
    d *= r.inner(lr, a) / r.inner(r.rho, a);
  }
  return d;
}

}  // namespace twaff
