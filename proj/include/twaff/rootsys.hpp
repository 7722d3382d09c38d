#pragma once

#include "twaff/exact.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twaff {

enum class RootType { A, B, C, D, E6, F4, G2, BC };

std::string type_letter(RootType type);
/// "A3", "BC2", "E6" ...
std::string type_name(RootType type, int rank);
/// Inverse of type_name; throws std::invalid_argument.
std::pair<RootType, int> parse_type_name(const std::string& name);

/// A finite root system realized in an ambient coordinate space.
///
/// Roots are exact rational vectors; `form` is the Gram matrix of the
/// invariant form <.,.> on ambient coordinates. Reduced types are normalized
/// so long roots have <a,a> = 2. BC_n uses squared lengths 1, 2, 4.
struct RootSystem {
  RootType type = RootType::A;
  int rank = 0;
  QMatrix form;
  std::vector<QVector> roots;
  std::vector<QVector> positive_roots;
  std::vector<QVector> simple_roots;
  QVector rho;
  std::vector<QVector> fundamental_weights;
  /// (.,.)_Killing = killing_scale * <.,.> on weights.
  Rational killing_scale;
  /// cartan(i,j) = <a_i, a_j^vee>.
  QMatrix cartan;

  std::size_t ambient_dim() const { return form.rows(); }
  std::string name() const { return type_name(type, rank); }

  Rational inner(const QVector& a, const QVector& b) const { return bilinear(form, a, b); }
  Rational norm2(const QVector& a) const { return inner(a, a); }
  bool is_root(const QVector& v) const;
  bool is_reduced() const { return type != RootType::BC; }

  /// 2 a / <a,a>; throws std::invalid_argument if a is not a root.
  QVector coroot(const QVector& a) const;
  /// s_a(v) = v - <v, a^vee> a for any vector a with <a,a> != 0.
  QVector reflect(const QVector& a, const QVector& v) const;
  /// Coefficients of v (in the root span) on the simple roots.
  QVector simple_coordinates(const QVector& v) const;
  /// Sum of simple coordinates.
  Rational height(const QVector& root) const;
  /// Highest root (the unique maximal positive root of the reduced part).
  QVector highest_root() const;
  /// Sorted distinct squared root lengths.
  std::vector<Rational> squared_lengths() const;

  /// |W| by orbit-stabilizer on the regular vector rho.
  std::size_t weyl_order() const;
};

/// Construct A_n (n>=1), B_n (n>=2), C_n (n>=2), D_n (n>=3), E6, F4, G2, BC_n (n>=1).
/// Throws std::invalid_argument for an invalid (type, rank) pair.
RootSystem build_root_system(RootType type, int rank);

/// Build a root system from an explicit closed root set. Positive roots come
/// from a generic linear functional and simple roots are the indecomposable
/// positive ones (ordered by the functional). When positive_direction is
/// given, the functional is <positive_direction, .> and must be regular.
RootSystem root_system_from_roots(RootType type, int rank, std::vector<QVector> roots, QMatrix form,
                                  Rational killing_scale,
                                  const std::optional<QVector>& positive_direction = std::nullopt);

/// Classical |W| for a type.
std::size_t classical_weyl_order(RootType type, int rank);
/// Classical number of roots for a type.
std::size_t classical_root_count(RootType type, int rank);

/// dual of a root: 2a/<a,a>; throws if a is not a root of R.
QVector dual_root(const RootSystem& r, const QVector& a);

/// A weight in the fundamental-weight basis of a named root system.
struct WeightVector {
  QVector coords;

  bool is_dominant() const;
  bool operator==(const WeightVector&) const = default;
};

QVector to_ambient(const RootSystem& r, const WeightVector& w);
/// Fundamental-weight coordinates <v, a_i^vee>; v must lie in the weight lattice span.
WeightVector to_weight(const RootSystem& r, const QVector& ambient);

/// Dominant weights with <l+rho, l+rho> <= norm_cap, sorted by that norm
/// then lexicographically on coordinates.
std::vector<WeightVector> dominant_weights_below(const RootSystem& r, double norm_cap);

/// Weyl dimension formula prod_{a>0} <l+rho, a^vee> / <rho, a^vee>.
Rational weyl_dimension(const RootSystem& r, const WeightVector& w);

}  // namespace twaff
