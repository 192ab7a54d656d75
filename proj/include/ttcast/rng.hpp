#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ttcast {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. Only the mt19937_64 engine comes from the
// standard library; the mappings to distributions are done by hand so results
// do not depend on the standard library's (unspecified) algorithms.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Independent stream derived from (seed, tag); used to keep e.g. incident
  // draws decoupled from per-corridor noise draws.
  static Rng substream(std::uint64_t seed, std::uint64_t tag) {
    return Rng(splitmix64(seed ^ splitmix64(tag ^ 0x5851f42d4c957f2dULL)));
  }

  std::uint64_t bits() { return eng_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); n > 0. Modulo bias is far below any use here.
  std::uint64_t below(std::uint64_t n) { return eng_() % n; }

  // Box-Muller without caching: two engine draws per variate.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  double exponential(double mean) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -mean * std::log(u);
  }

  // Knuth's product method; fine for the small rates used here.
  std::size_t poisson(double lambda) {
    const double limit = std::exp(-lambda);
    double prod = uniform();
    std::size_t n = 0;
    while (prod > limit) {
      prod *= uniform();
      ++n;
    }
    return n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(below(i))]);
    }
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace ttcast
