#pragma once

#include "twaff/grouprep.hpp"

#include <functional>
#include <vector>

namespace twaff {

/// Basis of su(n) orthonormal for the negative Killing form -2n tr(xy).
std::vector<CMatrix> killing_orthonormal_basis(int n);

/// McKean product path on [0, T], T = 1/r, with 2^m steps.
/// Invariant: points[j + 1] == points[j] * exp(increments[j]).
struct PathSample {
  std::vector<double> times;
  std::vector<CMatrix> points;
  std::vector<CMatrix> increments;
};

/// Increments are Gaussian with covariance s T dt in the Killing-orthonormal basis, the
/// normalization in which the heat equation reads df/dt = (s T / 2) Laplacian f.
class PathSampler {
 public:
  PathSampler(const SUnModel& m, double s, int depth);
  PathSample sample(std::mt19937_64& rng) const;
  /// Streams the path without storing it: visit(j, z_j, dy_j) for every step, then returns z(T).
  CMatrix walk(std::mt19937_64& rng, const std::function<void(int, const CMatrix&, const CMatrix&)>& visit) const;
  CMatrix increment(std::mt19937_64& rng) const;
  int steps() const { return steps_; }
  double horizon() const { return horizon_; }
  double dt() const { return horizon_ / steps_; }
  double s() const { return s_; }
  int n() const { return n_; }

 private:
  int n_;
  double s_;
  int steps_;
  double horizon_;
  double scale_;
  std::vector<CMatrix> basis_;
};

/// exp on su(n); closed form for n = 2.
CMatrix exp_su(const CMatrix& x);

struct ChiSquareRecord {
  double statistic = 0;
  int dof = 0;
  double p_value = 0;
  std::size_t n_paths = 0;
  int depth = 0;
  std::uint64_t seed = 0;
};
/// Histogram of the SU(2) torus angle of z(T) against u_s(theta, T) (2/pi) sin^2 theta.
ChiSquareRecord endpoint_law_check(double s, int depth, std::size_t n_paths, std::uint64_t seed, int threads = 1,
                                   int bins = 40);

struct StochasticRecord {
  double lhs = 0;
  double rhs = 0;
  double sigma = 0;  // standard error of lhs - rhs
  double lhs_sigma = 0;
  double rhs_sigma = 0;
  double rel_err = 0;
  std::size_t n_paths = 0;
  int depth = 0;
  std::uint64_t seed = 0;
};

/// A smooth path g with g(0) = e and its derivative.
struct SmoothPath {
  std::function<CMatrix(double)> g;
  std::function<CMatrix(double)> dg;
};
SmoothPath exponential_path(const CMatrix& y);

/// E[F(z)] against E[F(z g) exp(-(1/s)(g' g^{-1}, z^{-1} z') - (1/2s)(g^{-1} g', g^{-1} g'))], with the
/// pairing summed over the generating increments. Both means use the same paths.
StochasticRecord quasi_invariance_check(const SUnModel& m, double s, int depth, const SmoothPath& g,
                                        const std::function<double(const CMatrix&)>& endpoint_functional,
                                        std::size_t n_paths, std::uint64_t seed, int threads = 1);

/// Test functions of the form c0 + Re tr(A Z).
struct LinearClassTest {
  double c0 = 0;
  CMatrix a;
  double operator()(const CMatrix& z) const { return c0 + (a * z).trace().real(); }
};
/// e^{-|Y|^2/2s} E[f(z(T)) e^{(1/s)(z^{-1} z', Y)}] by path Monte Carlo against
/// the integral of f(Z) u_s(Z g(T)^{-1}, T) over SU(2) by rank-one quadrature, g(t) = exp(tY).
StochasticRecord smoothed_berechnung_check(const CMatrix& y, double s, int depth, const LinearClassTest& f,
                                           std::size_t n_paths, std::uint64_t seed, int threads = 1);

struct RefinementRecord {
  double median_gap_coarse = 0;  // depths (m0, m0 + 1)
  double median_gap_fine = 0;    // depths (m1, m1 + 1)
};
/// Couples depth m and m + 1 by summing paired fine increments; median operator-norm endpoint gap.
RefinementRecord refinement_check(const SUnModel& m, double s, int m0, int m1, std::size_t n_paths, std::uint64_t seed);

}  // namespace twaff
