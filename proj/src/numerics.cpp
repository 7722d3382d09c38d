#include "twaff/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <limits>
#include <numbers>
#include <thread>

namespace twaff {

double lattice_tail_bound(int l, double vol, double diam, const std::function<double(double)>& f, double radius) {
  // Each excluded point v owns the translate v + P of the centered cell, on which
  // |y - c| <= |v - c| + diam/2, so f(|v - c|) <= f(|y - c| - diam/2) there.
  const double lo = radius - diam;
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  const double area = 2 * std::pow(std::numbers::pi, l / 2.0) / std::tgamma(l / 2.0);
  auto g = [&](double s) { return std::pow(s + diam / 2, l - 1) * f(s); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      g, lo, std::numeric_limits<double>::infinity(), 10, 1e-10);
  return area / vol * integral;
}

namespace {

constexpr std::size_t kChunk = 4096;

}  // namespace

std::vector<MonteCarloEstimate> monte_carlo_vector(std::size_t n, std::uint64_t seed, int threads, std::size_t width,
                                                   const std::function<void(std::mt19937_64&, double*)>& sample) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  // Per chunk: sums and sums of squares.
  std::vector<double> sums(chunks * width * 2, 0.0);
  auto run_chunk = [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<double> buf(width);
    const std::size_t begin = c * kChunk, end = std::min(n, begin + kChunk);
    double* s = &sums[c * width * 2];
    for (std::size_t i = begin; i < end; ++i) {
      sample(rng, buf.data());
      for (std::size_t j = 0; j < width; ++j) {
        s[j] += buf[j];
        s[width + j] += buf[j] * buf[j];
      }
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(chunks)));
  if (workers == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t c = static_cast<std::size_t>(w); c < chunks; c += static_cast<std::size_t>(workers)) run_chunk(c);
      });
    for (auto& t : pool) t.join();
  }
  std::vector<MonteCarloEstimate> out(width);
  for (std::size_t j = 0; j < width; ++j) {
    double s = 0, s2 = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
      s += sums[c * width * 2 + j];
      s2 += sums[c * width * 2 + width + j];
    }
    const double nn = static_cast<double>(n);
    out[j].mean = s / nn;
    const double var = n > 1 ? std::max(0.0, (s2 - s * s / nn) / (nn - 1)) : 0.0;
    out[j].sigma = std::sqrt(var / nn);
    out[j].samples = n;
    out[j].seed = seed;
  }
  return out;
}

MonteCarloEstimate monte_carlo(std::size_t n, std::uint64_t seed, int threads,
                               const std::function<double(std::mt19937_64&)>& sample) {
  return monte_carlo_vector(n, seed, threads, 1, [&](std::mt19937_64& rng, double* out) { out[0] = sample(rng); })[0];
}

}  // namespace twaff
