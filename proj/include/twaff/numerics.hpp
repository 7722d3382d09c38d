#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace twaff {

/// Upper bound for sum_{v in L, |v - c| > radius} f(|v - c|) over a lattice L of rank l with
/// fundamental cell volume `vol` and cell diameter `diam`. Requires f nonincreasing on
/// [radius - diam, inf); returns +inf when radius <= diam.
double lattice_tail_bound(int l, double vol, double diam, const std::function<double(double)>& f, double radius);

/// Mean and standard error of a sample stream.
struct MonteCarloEstimate {
  double mean = 0;
  double sigma = 0;  // standard error of the mean
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// Runs `n` samples split into fixed chunks; chunk c draws from mt19937_64 seeded by
/// seed_seq{seed, c}. Chunks are distributed over `threads` workers and reduced in chunk
/// order, so the result depends only on (seed, n).
MonteCarloEstimate monte_carlo(std::size_t n, std::uint64_t seed, int threads,
                               const std::function<double(std::mt19937_64&)>& sample);

/// Vector-valued variant: every sample returns `width` numbers; means and errors per component.
std::vector<MonteCarloEstimate> monte_carlo_vector(std::size_t n, std::uint64_t seed, int threads, std::size_t width,
                                                   const std::function<void(std::mt19937_64&, double*)>& sample);

}  // namespace twaff
