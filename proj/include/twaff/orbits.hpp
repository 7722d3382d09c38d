#pragma once

#include "twaff/grouprep.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace twaff {

/// x(.) + aC + bD with x sampled at t_j = j / (r N), j = 0..N.
/// Invariants: samples anti-Hermitian and traceless; samples[N] == tau(samples[0]); b != 0.
struct TwistedLoop {
  std::shared_ptr<const SUnModel> model;
  std::vector<CMatrix> samples;
  double a = 0;
  double b = 1;

  int intervals() const { return static_cast<int>(samples.size()) - 1; }
  double period() const { return 1.0 / model->r; }
  double spacing() const { return period() / intervals(); }
};

/// Validates the samples and re-pins the seam x(1/r) := tau(x(0)).
/// Throws std::invalid_argument on a broken invariant.
TwistedLoop make_loop(std::shared_ptr<const SUnModel> model, std::vector<CMatrix> samples, double a, double b,
                      double seam_tol = 1e-8);
/// x(t) == x0 on every node.
TwistedLoop constant_loop(std::shared_ptr<const SUnModel> model, const CMatrix& x0, int intervals, double a, double b);
/// Torus embedding of LS0: z -> diag(2 pi i from_lso(z)), so exp of it is model.torus(z).
CMatrix torus_algebra(const SUnModel& m, const Eigen::VectorXd& z);

/// Killing form 2n tr(xy) on sl(n).
double killing(const CMatrix& x, const CMatrix& y);
/// Loop pairing: the integral over [0, 1] of the Killing form, by the periodic trapezoid rule.
double loop_pairing(const std::vector<CMatrix>& x, const std::vector<CMatrix>& y);

struct Shell {
  double a = 0;  // 2 a1 b1 + (x, x)
  double b = 0;
};
Shell shell_invariant(const TwistedLoop& loop);

/// Group-valued twisted-periodic path on the loop grid; derivative empty means
/// fourth-order central differences with the twisted extension.
struct GaugePath {
  std::vector<CMatrix> samples;
  std::vector<CMatrix> derivative;
};
/// g(t) = exp(Y(t)) with Y a random twisted-periodic trigonometric polynomial; derivatives exact.
GaugePath random_gauge(const SUnModel& m, int intervals, int modes, double amplitude, std::mt19937_64& rng);

/// g x g^{-1} - b g' g^{-1}, a + (g^{-1} g', x) - (b/2)(g' g^{-1}, g' g^{-1}), b unchanged.
TwistedLoop gauge_action(const GaugePath& g, const TwistedLoop& loop, double periodicity_tol = 1e-8);

struct FundamentalSolution {
  std::vector<CMatrix> z;  // on the loop grid
  int steps = 0;           // integrator steps over [0, 1/r]
  double refinement_gap = 0;
};
struct IntegratorOptions {
  double tol = 1e-8;
  int max_steps = 1 << 18;
  int interpolation_points = 6;
};
/// z' = z x / b, z(0) = 1, by a commutator-free fourth-order Lie-group method with unitary reprojection.
/// Step doubling until two refinements differ by less than tol in operator norm on every node.
FundamentalSolution fundamental_solution(const TwistedLoop& loop, const IntegratorOptions& opt = {});
CMatrix monodromy(const TwistedLoop& loop, const IntegratorOptions& opt = {});

/// One CF4 solve of z' = z A(t) on [0, t_end] with fixed steps; intermediate nodes every `stride` steps.
std::vector<CMatrix> cf4_integrate(const std::function<CMatrix(double)>& a, double t_end, int steps, int stride);

/// Polar factor of z: the nearest unitary matrix.
CMatrix unitary_projection(const CMatrix& z);

struct AlcoveClass {
  Eigen::VectorXd coords;         // LS0 orthonormal coordinates
  std::vector<bool> on_wall;      // per positive root of R^1: <a, z> in {0, 1}
  double residual = 0;            // worst twisted-character mismatch of the chosen candidate
  std::vector<double> character_checks;
};

/// Fundamental alcove of the affine Weyl group of R^1: 0 <= <a, z> <= 1 for all positive a.
bool in_alcove(const CharacterContext& ctx, const Eigen::VectorXd& z, double tol = 1e-12);
/// Folds z into the alcove by affine reflections.
Eigen::VectorXd fold_to_alcove(const CharacterContext& ctx, Eigen::VectorXd z);

/// Classifies the twisted class of M tau into the alcove.
class Classifier {
 public:
  explicit Classifier(std::shared_ptr<const SUnModel> model, double tol = 1e-6);
  AlcoveClass classify_monodromy(const CMatrix& m) const;
  AlcoveClass classify(const TwistedLoop& loop, const IntegratorOptions& opt = {}) const;
  const CharacterContext& context() const { return ctx_; }
  /// Constant loop whose class is the alcove point z: x0 = r b (torus embedding of z).
  TwistedLoop construct(const Eigen::VectorXd& z, int intervals, double a, double b) const;

 private:
  std::vector<Eigen::VectorXd> candidates(const CMatrix& m) const;

  std::shared_ptr<const SUnModel> model_;
  CharacterContext ctx_;
  std::vector<RepModel> reps_;
  double tol_;
};

/// classify(gauge(construct(z))) against z over random alcove points and random gauges.
struct RoundTripRecord {
  int trials = 0;
  double max_alcove_err = 0;
  double max_equivariance = 0;  // |M_g - g(0) M tau(g(0))^{-1}| in Frobenius norm
  double max_shell_drift = 0;
  int max_steps = 0;
  std::uint64_t seed = 0;
};
RoundTripRecord orbit_round_trip_check(std::shared_ptr<const SUnModel> model, int trials, int intervals,
                                       std::uint64_t seed, const IntegratorOptions& opt = {});

/// Fixed-step CF4 errors on a gauged constant loop whose monodromy is known in closed form.
struct OrderRecord {
  std::vector<int> steps;
  std::vector<double> errors;
  double min_ratio = 0;  // over consecutive halvings
};
OrderRecord integrator_order_check(const SUnModel& m, const std::vector<int>& steps = {8, 16, 32, 64});

}  // namespace twaff
