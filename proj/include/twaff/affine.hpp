#pragma once

#include "twaff/charform.hpp"
#include "twaff/errors.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace twaff {

/// A real affine root (finite part, loop mode n): H + aC + bD -> <abar, H> + 2 pi i n b.
struct AffineRoot {
  QVector finite;  // ambient coordinates in LS0
  int mode = 0;
};

/// Twisted (or untwisted) affine algebra X_N^(r) in the loop realization with period 1.
///
/// Coordinates: the "r-frame" is the orthonormal frame of (.,.)_r = Killing form on LS0.
/// A weight mu with LS0 coordinates m has r-frame coordinates sqrt(kappa) m; an algebra
/// element with LS0 coordinates x has r-frame coordinates x / sqrt(kappa). Pairings agree.
struct AffineAlgebra {
  explicit AffineAlgebra(FoldedData fd);

  CharacterContext ctx;
  double kappa = 0;
  int r = 1;
  int l = 0;
  int a0 = 1;
  /// Columns: Q^vee(R^1) in the r-frame. The lattice of the Poisson identity.
  Eigen::MatrixXd m_basis;
  /// Columns: the translation lattice of the affine Weyl group in the r-frame
  /// (mode shifts included): r * T_x / sqrt(kappa).
  Eigen::MatrixXd translation_basis;
  /// translation_basis = translation_scale * m_basis when that holds, else 0.
  double translation_scale = 0;

  std::vector<AffineRoot> simple_roots;  // index 0 carries mode 1
  std::vector<int> marks;                // a_i
  std::vector<int> comarks;              // a_i^vee
  QVector rho_finite;                    // finite part of rho-tilde (ambient)
  /// Is mode n allowed for the restricted root abar?
  bool mode_allowed(const QVector& abar, int n) const;

  std::string tag() const { return ctx.tag(); }
  Eigen::VectorXd weight_rframe(const QVector& ambient_weight) const;
  Eigen::VectorXd point_rframe(const Eigen::VectorXd& lso_point) const;
};

/// (t, h, k) in r-frame coordinates; t > 0.
struct AffinePoint {
  double t = 1;
  Eigen::VectorXcd h;
  Eigen::VectorXcd k;
};

struct SeriesValue {
  std::complex<double> value;
  double tail_bound = 0;    // absolute bound on the neglected terms
  std::size_t terms = 0;    // lattice points summed
  double radius = 0;        // truncation radius in the r-frame
};

struct SeriesOptions {
  double tol = 1e-13;                 // tail bound relative to the computed value
  std::size_t enumeration_cap = 20000000;
};

/// sum_{w in W^tau} sum_{g in L} eps(w) exp(||2 pi i g + h - w k||^2 / 2t) for the lattice with
/// basis columns `basis`; bilinear extension of the norm.
SeriesValue lattice_theta_sum(const WeylGroupTable& w, const Eigen::MatrixXd& basis, const AffinePoint& p,
                              const SeriesOptions& opt = {});
/// vol(L)^{-1} (2 pi / t)^{-l/2} sum_{nu in L^*, strictly dominant} A(nu)(h) A(nu)(-k) e^{-t||nu||^2/2}.
SeriesValue dual_character_sum(const AffineAlgebra& alg, const Eigen::MatrixXd& basis, const AffinePoint& p,
                               const SeriesOptions& opt = {});

/// Left side of the Poisson identity over M = Q^vee(R^1), prefactor included.
SeriesValue numerator_lattice_side(const AffineAlgebra& alg, const AffinePoint& p, const SeriesOptions& opt = {});
/// Right side of the Poisson identity: sum over P_+(R^1) of A(l+rho)(h) A(l+rho)(-k) e^{-t||l+rho||^2/2}.
SeriesValue numerator_character_side(const AffineAlgebra& alg, const AffinePoint& p,
                                     const SeriesOptions& opt = {});

/// Highest weight by affine Dynkin labels m_0..m_l (m_0 belongs to the mode-1 simple root).
struct AffineWeight {
  std::vector<int> labels;
};
int level(const AffineAlgebra& alg, const AffineWeight& w);

/// The Kac-Weyl numerator sum_w eps(w) e^{(w(Lambda + rho), bD + K)} expressed through
/// the Poisson data: N = e^{-(||h||^2+||k||^2)/2t} S_T(t, h, k). Also returns (t, h, k).
struct NumeratorData {
  AffinePoint point;          // (t, h, k) on the translation lattice
  AffinePoint scaled_point;   // the same evaluation expressed on M (valid when translation_scale != 0)
  std::complex<double> log_prefactor;  // -(||h||^2 + ||k||^2) / 2t
};
/// b must satisfy Im b < 0 and Re b = 0; K is an algebra element in LS0 coordinates.
NumeratorData numerator_data(const AffineAlgebra& alg, const AffineWeight& lambda, std::complex<double> b,
                             const Eigen::VectorXcd& K);
std::complex<double> kac_numerator(const AffineAlgebra& alg, const AffineWeight& lambda, std::complex<double> b,
                                   const Eigen::VectorXcd& K, const SeriesOptions& opt = {});
/// ch L(Lambda)(bD + K) = numerator(Lambda + rho) / numerator(rho).
std::complex<double> character_value(const AffineAlgebra& alg, const AffineWeight& lambda, std::complex<double> b,
                                     const Eigen::VectorXcd& K, const SeriesOptions& opt = {});

/// Exact action of a lattice vector gamma on an element H + aC + bD of the affine Cartan
/// (H, gamma in LS0 ambient coordinates, form (.,.)_r = kappa^{-1} <.,.> on algebra elements).
struct AffineCartanElement {
  QVector h;
  Rational a;
  Rational b;
  bool operator==(const AffineCartanElement&) const = default;
};
AffineCartanElement lattice_action(const FoldedData& fd, const QVector& gamma, const AffineCartanElement& x);

}  // namespace twaff
