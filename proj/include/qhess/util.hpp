#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qhess {

using Cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Deterministic pairwise-tree reduction. Used for every mass/energy quadrature so
// that results do not depend on traversal chunking or thread count.
double pairwise_sum(std::span<const double> xs);

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(std::span<const double>(xs.data(), xs.size()));
}

// Global worker count for data-parallel maps (per-point writes only; reductions are
// always the serial pairwise tree above, so outputs are identical for any setting).
void set_thread_count(int t);
int thread_count();

// Splits [0, count) into contiguous chunks and runs body(begin, end) on each, using
// up to thread_count() workers. body must write only to disjoint per-index slots.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body);

inline std::uint64_t factorial_u64(int k) {
  std::uint64_t r = 1;
  for (int i = 2; i <= k; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

inline double factorial(int k) { return static_cast<double>(factorial_u64(k)); }

inline double binomial(int a, int b) {
  if (b < 0 || b > a) return 0.0;
  double r = 1.0;
  for (int i = 0; i < b; ++i) r = r * static_cast<double>(a - i) / static_cast<double>(i + 1);
  return r;
}

// FNV-1a, used to stamp output files with a stable hash of the config bytes.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);
std::uint64_t fnv1a64(const std::string& s);

// Small deterministic generator (splitmix64 core). The distribution transforms are
// spelled out here so streams are reproducible independent of the standard library.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on (0, 1].
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal();  // Box-Muller, one value per call (no cached spare)
};

}  // namespace qhess
