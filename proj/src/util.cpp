#include "qhess/util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

namespace qhess {

namespace {

double pairwise_sum_rec(const double* p, std::size_t len) {
  if (len <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += p[i];
    return s;
  }
  const std::size_t half = len / 2;
  return pairwise_sum_rec(p, half) + pairwise_sum_rec(p + half, len - half);
}

std::atomic<int> g_threads{1};

}  // namespace

double pairwise_sum(std::span<const double> xs) {
  return pairwise_sum_rec(xs.data(), xs.size());
}

void set_thread_count(int t) {
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  g_threads = std::clamp(t, 1, std::max(1, hw > 0 ? hw : 8));
}

int thread_count() { return g_threads.load(); }

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  const int nt = std::min<std::size_t>(thread_count(), std::max<std::size_t>(count, 1));
  if (nt <= 1 || count < 1024) {
    body(0, count);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(nt);
  const std::size_t chunk = (count + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const std::size_t b = std::min(count, static_cast<std::size_t>(t) * chunk);
    const std::size_t e = std::min(count, b + chunk);
    if (b >= e) break;
    workers.emplace_back([&body, b, e] { body(b, e); });
  }
  for (auto& w : workers) w.join();
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(s.data()), s.size()));
}

double Rng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace qhess
