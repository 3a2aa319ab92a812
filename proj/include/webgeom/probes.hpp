#pragma once

#include <cstdint>

#include "webgeom/linalg.hpp"
#include "webgeom/rational.hpp"

namespace webgeom {

// Deterministic stream of pseudo-random rationals (splitmix64 core).
// Identical seeds give identical streams on every platform, which is what
// makes probe-based reports reproducible byte for byte.
struct ProbeStream {
  std::uint64_t state;

  explicit ProbeStream(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [lo, hi].
  long long next_int(long long lo, long long hi) {
    return lo + static_cast<long long>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  // Small nonzero rational, handy as a generic coefficient.
  Rat next_coeff() {
    long long num = next_int(-5, 4);
    if (num >= 0) ++num;  // skip 0
    long long den = next_int(1, 4);
    return Rat(num, den);
  }

  // Small rational close to 0, with a small denominator; used as an
  // evaluation probe near the base point.
  Rat next_probe() {
    long long num = next_int(-3, 2);
    if (num >= 0) ++num;
    static const long long dens[] = {7, 8, 9, 11, 13};
    return Rat(num, dens[next_u64() % 5]);
  }

  Vec next_point(int n) {
    Vec p(static_cast<std::size_t>(n));
    for (Rat& c : p) c = next_probe();
    return p;
  }
};

}  // namespace webgeom
