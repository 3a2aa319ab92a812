#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "webgeom/linalg.hpp"
#include "webgeom/rational.hpp"

namespace webgeom::polyq {

// Univariate polynomials over Q as coefficient vectors, ascending degree.

inline Vec trim(Vec p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

inline int deg(const Vec& p) {
  for (std::size_t k = p.size(); k > 0; --k)
    if (!p[k - 1].is_zero()) return static_cast<int>(k) - 1;
  return -1;
}

inline Rat eval(const Vec& p, const Rat& t) {
  Rat r = 0;
  for (std::size_t k = p.size(); k > 0; --k) r = r * t + p[k - 1];
  return r;
}

inline Vec mul(const Vec& a, const Vec& b) {
  if (a.empty() || b.empty()) return {};
  Vec r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return trim(std::move(r));
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r = a;
  r.resize(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return trim(std::move(r));
}

// Monic product of (t - r) over the given roots.
inline Vec from_roots(const Vec& roots) {
  Vec p{Rat(1)};
  for (const Rat& r : roots) p = mul(p, Vec{-r, Rat(1)});
  return p;
}

inline std::pair<Vec, Vec> divmod(Vec num, const Vec& den) {
  int dd = deg(den);
  if (dd < 0) throw std::invalid_argument("polyq::divmod: division by zero polynomial");
  num = trim(std::move(num));
  Vec q;
  int dn = deg(num);
  if (dn >= dd) q.assign(static_cast<std::size_t>(dn - dd) + 1, Rat(0));
  while ((dn = deg(num)) >= dd) {
    Rat f = num[static_cast<std::size_t>(dn)] / den[static_cast<std::size_t>(dd)];
    q[static_cast<std::size_t>(dn - dd)] = f;
    for (int i = 0; i <= dd; ++i)
      num[static_cast<std::size_t>(dn - dd + i)] -= f * den[static_cast<std::size_t>(i)];
    num = trim(std::move(num));
  }
  return {trim(std::move(q)), std::move(num)};
}

// Monic gcd.
inline Vec gcd(Vec a, Vec b) {
  a = trim(std::move(a));
  b = trim(std::move(b));
  while (!b.empty()) {
    Vec r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat lead = a.back();
    for (Rat& c : a) c /= lead;
  }
  return a;
}

struct RationalRoots {
  std::vector<std::pair<Rat, int>> roots;  // (root, multiplicity)
  bool complete = true;  // false when integer factorization gave up
};

namespace detail {
// Trial-division factorization; primes beyond the cap make the result
// incomplete unless the remainder is certified prime by the cap itself.
inline bool factor(Int n, std::vector<std::pair<Int, int>>& out) {
  if (n < 0) n = -n;
  const long long cap = 1000000;
  for (long long p = 2; p <= cap && Int(p) * p <= n; ++p) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      out.emplace_back(Int(p), e);
    }
  }
  if (n > 1) {
    if (n <= Int(cap) * cap) {
      out.emplace_back(n, 1);  // no factor below cap, so prime
    } else {
      return false;
    }
  }
  return true;
}

inline std::vector<Int> divisors(const Int& n, bool& complete) {
  std::vector<std::pair<Int, int>> f;
  if (!factor(n, f)) complete = false;
  std::vector<Int> divs{Int(1)};
  for (const auto& [p, e] : f) {
    std::size_t base = divs.size();
    Int pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  return divs;
}
}  // namespace detail

// All rational roots with multiplicity, by the rational root theorem on the
// primitive integer form of p.
inline RationalRoots rational_roots(Vec p) {
  RationalRoots out;
  p = trim(std::move(p));
  if (p.empty()) return out;
  int v = 0;
  while (v < static_cast<int>(p.size()) && p[static_cast<std::size_t>(v)].is_zero()) ++v;
  if (v > 0) {
    out.roots.emplace_back(Rat(0), v);
    p.erase(p.begin(), p.begin() + v);
  }
  if (deg(p) == 0) return out;
  Int lcm = 1;
  for (const Rat& c : p) lcm = boost::multiprecision::lcm(lcm, denominator(c));
  std::vector<Int> ip;
  for (const Rat& c : p) ip.push_back(numerator(Rat(c * lcm)));
  Int g = 0;
  for (const Int& c : ip) g = boost::multiprecision::gcd(g, c);
  if (g > 1)
    for (Int& c : ip) c /= g;
  std::vector<Int> nums = detail::divisors(ip.front() == 0 ? Int(1) : ip.front(), out.complete);
  std::vector<Int> dens = detail::divisors(ip.back(), out.complete);
  std::vector<Rat> candidates;
  for (const Int& a : nums)
    for (const Int& b : dens) {
      candidates.push_back(Rat(a, b));
      candidates.push_back(Rat(-a, b));
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const Rat& r : candidates) {
    int mult = 0;
    while (deg(p) >= 1 && eval(p, r).is_zero()) {
      p = divmod(p, Vec{-r, Rat(1)}).first;
      ++mult;
    }
    if (mult > 0) out.roots.emplace_back(r, mult);
    if (deg(p) < 1) break;
  }
  return out;
}

}  // namespace webgeom::polyq
