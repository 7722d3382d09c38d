#pragma once

#include "twaff/folding.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace twaff {

using cplx = std::complex<double>;
/// Coordinates of a point of LS0 (or LT) in a fixed orthonormal basis; complex allowed.
using TorusPoint = Eigen::VectorXcd;

/// A finite reflection group given as explicit orthogonal matrices.
struct WeylGroupTable {
  std::vector<Eigen::MatrixXd> elements;
  std::vector<int> signs;  // det(w)

  std::size_t size() const { return elements.size(); }
  int dim() const { return elements.empty() ? 0 : static_cast<int>(elements.front().rows()); }
};

/// Closure of the reflections in the given (Euclidean) root vectors.
WeylGroupTable generate_weyl_group(const std::vector<Eigen::VectorXd>& simple_roots);

/// Evaluation context for W^tau = W(R^1) acting on LS0 in orthonormal coordinates.
/// For r = 1 this is the classical Weyl group acting on the root span.
struct CharacterContext {
  explicit CharacterContext(FoldedData fd);

  FoldedData fold;
  WeylGroupTable weyl;
  std::vector<Eigen::VectorXd> r1_positive;  // orthonormal LS0 coordinates
  Eigen::VectorXd rho_tau;

  /// lambda + rho^tau in LS0 coordinates.
  Eigen::VectorXd shifted(const WeightVector& lambda) const;
  /// Lift of a tau-invariant base weight to LS0 coordinates.
  Eigen::VectorXd weight(const WeightVector& lambda) const;
  std::string tag() const { return algebra_tag(fold); }
};

/// sum_w eps(w) e^{2 pi i <w mu, h>}
cplx alternating_sum(const WeylGroupTable& w, const Eigen::VectorXd& mu, const TorusPoint& h);
/// sum_w eps(w) e^{<w mu, x>} with the complex bilinear pairing (the Poisson-side convention).
cplx alternating_sum_exp(const WeylGroupTable& w, const Eigen::VectorXd& mu, const TorusPoint& x);

/// delta^tau(h) = e(rho^tau) prod_{a in R^1_+} (1 - e(-a)).
cplx denominator(const CharacterContext& ctx, const TorusPoint& h);

/// Exact W(R^1)-orbit of an ambient vector with signs (-1)^{word length}.
/// For a regular vector the orbit is in bijection with W(R^1).
struct SignedOrbitElement {
  QVector vector;
  int sign = 1;
};
std::vector<SignedOrbitElement> signed_orbit(const FoldedData& fd, const QVector& mu);

/// A(rho^tau) and the product formula for delta^tau evaluated in 113-bit arithmetic at
/// h = sum_j coeffs[j] * fixed_basis[j]; both use exact root data.
struct DenominatorComparison {
  cplx alternating;
  cplx product;
  double rel_err = 0;
};
DenominatorComparison compare_denominator_precise(const FoldedData& fd,
                                                  const std::vector<SignedOrbitElement>& rho_orbit,
                                                  const std::vector<double>& coeffs);

struct CharacterValue {
  cplx value;
  bool singular_fallback_used = false;
};

/// Twisted character on S0 tau; zero for weights that are not tau-invariant.
CharacterValue twisted_character(const CharacterContext& ctx, const WeightVector& lambda, const TorusPoint& h);
/// Unsigned ratio A^tau(lambda + rho^tau)/delta^tau with the singular-point limit.
CharacterValue character_ratio(const CharacterContext& ctx, const Eigen::VectorXd& shifted, const TorusPoint& h);
/// Classical Weyl character of R; h is in orthonormal coordinates of the root span.
CharacterValue classical_character(const RootSystem& r, const WeightVector& lambda, const TorusPoint& h);

/// prod_{a in R^1_+} <lambda + rho, a> / <rho, a>, exact.
Rational twisted_dimension(const FoldedData& fd, const WeightVector& lambda);

/// Signs for the twisted characters, keyed by (algebra tag, weight). Thread-safe.
/// Unset entries read as +1.
int character_sign(const std::string& tag, const WeightVector& lambda);
void set_character_sign(const std::string& tag, const WeightVector& lambda, int sign);

/// Dominant tau-invariant base weights sorted by <l+rho, l+rho>, the first `count`.
std::vector<WeightVector> invariant_dominant_weights(const FoldedData& fd, std::size_t count);

struct RadialCheck {
  double analytic_eigenvalue = 0;  // ||l+rho||^2 - ||rho||^2 in the Killing metric
  double residual = 0;             // analytic differentiation, relative
  double fd_residual = 0;          // central differences, relative
};
/// (Delta_S0 + ||rho||^2)(delta chi) = (||rho||^2 - ||l+rho||^2)(delta chi) at `samples` random points.
RadialCheck radial_laplacian_check(const CharacterContext& ctx, const WeightVector& lambda, int samples,
                                   std::uint64_t seed, double fd_step = 1e-3);

/// Uniform grid over a fundamental domain of Q^vee(R^1) fine enough for both frequencies.
/// Returns (1/|W^tau|) * mean over the grid of A(l+rho) conj(A(m+rho)), i.e. <chi_l, chi_m> on G tau.
cplx twisted_inner_product(const CharacterContext& ctx, const WeightVector& lambda, const WeightVector& mu);

}  // namespace twaff
