#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace jpe {

using cplx = std::complex<double>;

// SplitMix64 finalizer; the basis of all counter-based sampling in this
// project. Stateless, so any (seed, index) pair is addressable in O(1).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Unbiased-enough map of a 64-bit hash onto [0, n) via the high-word trick.
inline std::size_t bounded(std::uint64_t h, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(h) * n) >> 64);
}

// Uniform double in [0, 1) from a hash.
inline double unit_double(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Deterministic data-parallel loop: each index is processed exactly once and
// writes only to its own slot, so the result is independent of thread count.
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t)>& fn,
                         unsigned threads = 0) {
  if (threads == 0) threads = std::thread::hardware_concurrency();
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace jpe
