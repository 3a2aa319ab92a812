#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "webgeom/rational.hpp"

namespace webgeom {

// Univariate jet: a power series in one variable kept modulo degree
// order + 1, stored densely by degree.
struct UJet {
  int order = 0;
  std::vector<Rat> c;  // size order + 1

  UJet() : c(1) {}
  explicit UJet(int ord) : order(ord), c(static_cast<std::size_t>(ord) + 1) {
    if (ord < 0) throw std::invalid_argument("UJet: negative order");
  }

  static UJet constant(int ord, const Rat& v) {
    UJet j(ord);
    j.c[0] = v;
    return j;
  }

  static UJet var(int ord) {
    UJet j(ord);
    if (ord >= 1) j.c[1] = 1;
    return j;
  }

  Rat coeff(int k) const { return (k >= 0 && k <= order) ? c[static_cast<std::size_t>(k)] : Rat(0); }

  void set(int k, const Rat& v) {
    if (k < 0 || k > order) throw std::invalid_argument("UJet::set: degree out of range");
    c[static_cast<std::size_t>(k)] = v;
  }

  bool is_zero() const {
    for (const Rat& v : c)
      if (!v.is_zero()) return false;
    return true;
  }

  // order + 1 for the zero jet.
  int valuation() const {
    for (int k = 0; k <= order; ++k)
      if (!c[static_cast<std::size_t>(k)].is_zero()) return k;
    return order + 1;
  }

  UJet truncated(int ord) const {
    UJet j(ord);
    for (int k = 0; k <= std::min(ord, order); ++k) j.c[static_cast<std::size_t>(k)] = coeff(k);
    return j;
  }

  UJet derivative() const {
    if (order == 0) return UJet(0);
    UJet j(order - 1);
    for (int k = 1; k <= order; ++k) j.c[static_cast<std::size_t>(k - 1)] = coeff(k) * k;
    return j;
  }

  Rat eval(const Rat& t) const {
    Rat r = 0;
    for (int k = order; k >= 0; --k) r = r * t + coeff(k);
    return r;
  }

  bool operator==(const UJet& o) const = default;
};

namespace detail {
inline void require_same_order(const UJet& a, const UJet& b) {
  if (a.order != b.order) throw std::invalid_argument("UJet: order mismatch");
}
}  // namespace detail

inline UJet operator+(const UJet& a, const UJet& b) {
  detail::require_same_order(a, b);
  UJet r(a.order);
  for (int k = 0; k <= a.order; ++k) r.c[static_cast<std::size_t>(k)] = a.coeff(k) + b.coeff(k);
  return r;
}

inline UJet operator-(const UJet& a, const UJet& b) {
  detail::require_same_order(a, b);
  UJet r(a.order);
  for (int k = 0; k <= a.order; ++k) r.c[static_cast<std::size_t>(k)] = a.coeff(k) - b.coeff(k);
  return r;
}

inline UJet operator-(const UJet& a) {
  UJet r(a.order);
  for (int k = 0; k <= a.order; ++k) r.c[static_cast<std::size_t>(k)] = -a.coeff(k);
  return r;
}

inline UJet operator*(const UJet& a, const UJet& b) {
  detail::require_same_order(a, b);
  UJet r(a.order);
  for (int i = 0; i <= a.order; ++i) {
    if (a.coeff(i).is_zero()) continue;
    for (int j = 0; i + j <= a.order; ++j)
      r.c[static_cast<std::size_t>(i + j)] += a.coeff(i) * b.coeff(j);
  }
  return r;
}

inline UJet operator*(const Rat& s, const UJet& a) {
  UJet r(a.order);
  for (int k = 0; k <= a.order; ++k) r.c[static_cast<std::size_t>(k)] = s * a.coeff(k);
  return r;
}

// f(g) with g(0) = 0; result order = min of the two orders.
inline UJet compose(const UJet& f, const UJet& g) {
  if (!g.coeff(0).is_zero())
    throw std::invalid_argument("UJet compose: inner jet has nonzero constant term");
  int ord = std::min(f.order, g.order);
  UJet gi = g.truncated(ord);
  UJet r = UJet::constant(ord, f.coeff(std::min(f.order, ord)));
  for (int k = std::min(f.order, ord) - 1; k >= 0; --k) {
    r = r * gi;
    r.c[0] += f.coeff(k);
  }
  return r;
}

// Multiplicative inverse of a unit jet.
inline UJet ujet_inverse(const UJet& a) {
  if (a.coeff(0).is_zero()) throw std::invalid_argument("UJet inverse: non-unit jet");
  UJet y = UJet::constant(a.order, Rat(1) / a.coeff(0));
  UJet two = UJet::constant(a.order, 2);
  int steps = 0;
  for (int reach = 1; reach <= a.order; reach *= 2) ++steps;
  for (int s = 0; s < steps; ++s) y = y * (two - a * y);
  return y;
}

}  // namespace webgeom
