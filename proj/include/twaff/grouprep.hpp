#pragma once

#include "twaff/affine.hpp"
#include "twaff/numerics.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace twaff {

using CMatrix = Eigen::MatrixXcd;

/// SU(n) with the diagram automorphism of A_{n-1} (r = 2) or the identity (r = 1).
/// The group lift is g -> J conj(g) J^{-1}; its differential on sl(n) is X -> -J X^T J^{-1}.
struct SUnModel {
  int n = 2;
  int r = 1;
  FoldedData fold;
  CMatrix J;  // antidiagonal, entries +-1; identity when r = 1

  /// Positive roots e_i - e_j (i < j) with stored Chevalley vectors e_alpha and f_alpha = e_alpha^T.
  struct RootVector {
    int i = 0, j = 0;
    CMatrix e;
  };
  std::vector<RootVector> chevalley;

  CMatrix tau(const CMatrix& g) const;
  CMatrix tau_algebra(const CMatrix& x) const;
  /// diag(e(x_1), ..., e(x_n)) for the LS0 point z (orthonormal coordinates).
  CMatrix torus(const Eigen::VectorXd& z) const;
  CMatrix simple_e(int i) const;  // E_{i,i+1}, 0-based
  CMatrix simple_f(int i) const;
  /// Index in `chevalley` of the root e_a - e_b.
  int root_index(int a, int b) const;
  /// Expected sign s in tau(e_alpha) = s e_{tau alpha} for the stored basis.
  int pinning_sign(int index) const;
};

/// Builds SU(n) with tau of order r in {1, 2}; J is the normalized null vector of the
/// pinning equations tau(e_i) = e_{tau(i)} on the simple root vectors.
SUnModel make_sun_model(int n, int r);

/// Max deviation of tau(e_alpha) from pinning_sign * e_{tau alpha} over the stored basis.
double pinning_residual(const SUnModel& m);

enum class RepKind { Defining, Exterior, Adjoint };

struct RepModel {
  RepKind kind = RepKind::Defining;
  int k = 1;  // exterior degree
  int dim = 0;
  WeightVector lambda;
  int highest_index = 0;  // basis index of the highest weight vector
  std::function<CMatrix(const CMatrix&)> rho;   // group action
  std::function<CMatrix(const CMatrix&)> drho;  // Lie algebra action on gl(n)
  CMatrix T;                                    // intertwiner, identity when r = 1
  /// Eigenvalue of the pinned lift on the highest weight vector (adjoint only; else 1).
  int pinned_highest_sign = 1;
};

/// Defining, k-th exterior power, or adjoint representation of SU(n); T is not solved yet.
RepModel make_rep(const SUnModel& m, RepKind kind, int k = 1);
/// Null space of T drho(X) = drho(tau X) T over the simple generators; normalized so that
/// T^r = 1 and T fixes the highest weight vector. Throws for tau-noninvariant weights.
CMatrix solve_intertwiner(const SUnModel& m, const RepModel& rep);
/// Pinned lift acting on the adjoint carrier (the algebra automorphism itself).
CMatrix pinned_adjoint_lift(const SUnModel& m);

/// Haar-distributed element of SU(n).
CMatrix haar_sample(int n, std::mt19937_64& rng);

/// Irreducible character of SU(n) with highest weight in fundamental coordinates, by the
/// bialternant formula on the eigenvalues of g.
cplx sun_character(const std::vector<int>& fundamental, const CMatrix& g);
cplx sun_character_eigen(const std::vector<int>& fundamental, const Eigen::VectorXcd& eigenvalues);

/// Heat kernel u_s(g, t) = sum_l d(l) chi_l(g) e^{-(s t T / 2)(|l+rho|^2 - |rho|^2)} on SU(n),
/// norms in the Killing metric. Weights are enumerated once.
class HeatKernel {
 public:
  HeatKernel(int n, double exponent_scale, double tol);  // exponent_scale = s t T
  double operator()(const CMatrix& g) const;
  double evaluate_eigen(const Eigen::VectorXcd& eigenvalues) const;
  /// v_s(g tau, t): the Gtau kernel pulled back to G; same code path as operator().
  double twisted(const CMatrix& g) const { return (*this)(g); }
  std::size_t terms() const { return weights_.size(); }
  double tail_bound() const { return tail_; }

 private:
  int n_;
  double evaluate_regular(const Eigen::VectorXcd& eigenvalues) const;

  std::vector<std::vector<int>> weights_;
  std::vector<std::vector<int>> exponents_;  // l_j + n - 1 - j as a partition
  std::vector<double> coeff_;                // d(l) e^{-...}
  int max_exponent_ = 0;
  double tail_ = 0;
};

struct WeylIntegralRecord {
  MonteCarloEstimate mc;
  double torus_value = 0;
};
/// mean of f(u tau) over Haar u versus (1/|W^tau|) grid quadrature over S0 of f(s tau)|delta(s)|^2.
/// `max_frequency` bounds the weights occurring in f(s tau)|delta|^2 in units of the grid.
WeylIntegralRecord weyl_integral_check(const SUnModel& m, const std::function<double(const CMatrix&)>& f,
                                       std::size_t n_mc, int grid, int max_frequency, std::uint64_t seed,
                                       int threads = 1);

struct HeatPropRecord {
  cplx lhs;
  double rhs = 0;
  double sigma = 0;
  double rel_err = 0;
  double mc_mean = 0;  // E_g[v(g e^h tau(g)^{-1} e^{-k})]
  double prefactor = 0;
  std::uint64_t seed = 0;
  int strata = 1;
};
/// Strata per Haar draw: each draw g is replaced by the average over a(phi_j) g, phi_j a randomly
/// shifted uniform grid on a circle subgroup a(phi) of the torus with a^{-1} tau(a) != 1.
/// Unbiased by left invariance of Haar measure. 0 picks 8 for r = 2 and 1 for r = 1.
int default_strata(const SUnModel& m);

/// lhs = numerator_lattice_side(alg, p); rhs = prefactor * E_g[u(e^h tau(g) e^{-k} g^{-1})].
/// h and k must be imaginary (unitary torus elements).
HeatPropRecord heatprop_check(const SUnModel& m, const AffineAlgebra& alg, const AffinePoint& p, std::size_t n_mc,
                              std::uint64_t seed, double tol = 1e-10, int threads = 1, int strata = 0);
/// The group-integral side alone (used by the end-to-end character assembly).
MonteCarloEstimate heatprop_group_side(const SUnModel& m, const AffineAlgebra& alg, const AffinePoint& p,
                                       std::size_t n_mc, std::uint64_t seed, double tol, int threads,
                                       double* prefactor, int strata = 0);

struct ConvolutionRecord {
  MonteCarloEstimate lhs_re, lhs_im;
  cplx rhs;
};
/// d(l) E_g[chi_l(g1 tau(g) g2^{-1} g^{-1})] against chi(g1 tau) chi(tau^{-1} g2^{-1}).
ConvolutionRecord twisted_convolution_check(const SUnModel& m, const RepModel& rep, const CMatrix& g1,
                                            const CMatrix& g2, std::size_t n_mc, std::uint64_t seed,
                                            int threads = 1);

/// Sign s with twisted_character = s tr(rho(exp h) T), checked at `points` random torus points;
/// returns s and the maximal deviation. Registers s with charform.
struct Calibration {
  int sign = 1;
  double max_err = 0;
};
Calibration calibrate_sign(const SUnModel& m, const RepModel& rep, int points, std::uint64_t seed);

}  // namespace twaff
