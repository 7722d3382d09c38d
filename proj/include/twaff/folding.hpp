#pragma once

#include "twaff/rootsys.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace twaff {

/// A permutation of simple-root indices preserving the Cartan matrix.
struct DiagramAutomorphism {
  std::vector<int> perm;
  int order = 1;
};

/// Validates perm against the Cartan matrix and computes its exact order.
/// Throws std::invalid_argument when perm is not a diagram symmetry.
DiagramAutomorphism make_automorphism(const RootSystem& base, std::vector<int> perm);
/// Canonical automorphism of order r: A_n flip, D_n flip of the fork, D4 cycle 1->3->4->1, E6 flip.
DiagramAutomorphism standard_automorphism(const RootSystem& base, int r);

enum class LengthClass { Long, Middle, Short };
std::string to_string(LengthClass c);

struct FoldedRoot {
  QVector vector;  // ambient coordinates, lies in LS0
  int multiplicity = 0;
  LengthClass length_class = LengthClass::Long;
};

/// Folded data of (R, tau). R^tau and R^1 are stored as root systems inside the
/// ambient space of the base, carrying the base form restricted to LS0.
struct FoldedData {
  RootSystem base;
  DiagramAutomorphism autom;
  /// Exact basis of LS0: tau-orbit sums of simple roots.
  std::vector<QVector> fixed_basis;
  /// Rows are a form-orthonormal basis of LS0 in ambient coordinates.
  Eigen::MatrixXd lso;
  std::vector<FoldedRoot> folded_roots;
  RootSystem r_tau;
  RootSystem r1;
  QVector rho_tau;
  int dim_T_mod_S0 = 0;
  int a0 = 1;

  int r() const { return autom.order; }
  int l() const { return static_cast<int>(fixed_basis.size()); }
  std::string folded_type() const { return r_tau.name(); }
  std::string r1_type() const { return r1.name(); }

  /// tau on the rational span of the roots.
  QVector tau(const QVector& v) const;
  /// Orthogonal projection (1/r) sum tau^i v onto LS0.
  QVector project(const QVector& v) const;
  /// Coordinates of an ambient vector of LS0 in the orthonormal basis.
  Eigen::VectorXd to_lso(const QVector& v) const;
  Eigen::VectorXd to_lso(const Eigen::VectorXd& v) const;
  Eigen::VectorXd from_lso(const Eigen::VectorXd& coords) const;
  /// <.,.> restricted to LS0 in orthonormal coordinates is the identity; Gram of fixed_basis.
  QMatrix fixed_gram() const;
  bool is_tau_invariant(const WeightVector& w) const;
};

FoldedData fold(const RootSystem& base, const DiagramAutomorphism& autom);
/// Convenience: fold(build_root_system(type, rank), standard_automorphism(., r)).
FoldedData fold(RootType type, int rank, int r);

struct WeylOrders {
  std::size_t order_W_tau = 0;
  std::size_t order_W_S = 0;
};
WeylOrders weyl_group_orders(const FoldedData& fd);

struct LatticeBasis {
  std::vector<QVector> basis;  // ambient coordinates
  Rational gram_det;           // det of the <.,.> Gram matrix
};
/// Basis of the translation lattice M = Q^vee(R^1): the simple coroots of R^1.
LatticeBasis m_lattice_basis(const FoldedData& fd);

/// Parse "<Type><rank>^<r>", r defaulting to 1; returns the folded data.
FoldedData fold_from_tag(const std::string& tag);
std::string algebra_tag(const FoldedData& fd);

}  // namespace twaff
