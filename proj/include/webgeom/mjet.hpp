#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "webgeom/linalg.hpp"
#include "webgeom/rational.hpp"
#include "webgeom/ujet.hpp"

namespace webgeom {

// Exponent multi-index of a monomial, one entry per variable.
using Exp = std::vector<int>;

inline int exp_degree(const Exp& e) { return std::accumulate(e.begin(), e.end(), 0); }

// Multivariate jet in nvars variables, truncated at total degree `order`.
// Sparse canonical form: no zero coefficient is ever stored and every
// stored exponent has total degree <= order. Keys are kept in
// lexicographic order by std::map.
struct MJet {
  int nvars = 0;
  int order = 0;
  std::map<Exp, Rat> c;

  MJet() = default;
  MJet(int n, int ord) : nvars(n), order(ord) {
    if (n < 1 || ord < 0) throw std::invalid_argument("MJet: bad shape");
  }

  static MJet constant(int n, int ord, const Rat& v) {
    MJet j(n, ord);
    if (!v.is_zero()) j.c.emplace(Exp(static_cast<std::size_t>(n), 0), v);
    return j;
  }

  static MJet variable(int n, int ord, int i) {
    MJet j(n, ord);
    if (i < 0 || i >= n) throw std::invalid_argument("MJet::variable: index out of range");
    if (ord >= 1) {
      Exp e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(i)] = 1;
      j.c.emplace(std::move(e), Rat(1));
    }
    return j;
  }

  Rat coeff(const Exp& e) const {
    auto it = c.find(e);
    return it == c.end() ? Rat(0) : it->second;
  }

  Rat constant_term() const { return coeff(Exp(static_cast<std::size_t>(nvars), 0)); }

  void add_term(const Exp& e, const Rat& v) {
    if (v.is_zero() || exp_degree(e) > order) return;
    auto [it, fresh] = c.emplace(e, v);
    if (!fresh) {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
  }

  bool is_zero() const { return c.empty(); }

  // order + 1 for the zero jet.
  int valuation() const {
    int v = order + 1;
    for (const auto& [e, _] : c) v = std::min(v, exp_degree(e));
    return v;
  }

  MJet truncated(int ord) const {
    MJet j(nvars, ord);
    for (const auto& [e, v] : c)
      if (exp_degree(e) <= ord) j.c.emplace(e, v);
    return j;
  }

  // Same coefficients reinterpreted at a higher truncation order; used when
  // a stored jet is deliberately read as an exact polynomial.
  MJet extended(int ord) const {
    if (ord < order) throw std::invalid_argument("MJet::extended: lowering order");
    MJet j(nvars, ord);
    j.c = c;
    return j;
  }

  Rat eval(const Vec& x) const {
    if (static_cast<int>(x.size()) != nvars)
      throw std::invalid_argument("MJet::eval: point dimension mismatch");
    Rat r = 0;
    for (const auto& [e, v] : c) {
      Rat term = v;
      for (int i = 0; i < nvars; ++i)
        for (int k = 0; k < e[static_cast<std::size_t>(i)]; ++k) term *= x[static_cast<std::size_t>(i)];
      r += term;
    }
    return r;
  }

  bool operator==(const MJet& o) const = default;
};

namespace detail {
inline void require_compatible(const MJet& a, const MJet& b) {
  if (a.nvars != b.nvars) throw std::invalid_argument("MJet: variable count mismatch");
  if (a.order != b.order) throw std::invalid_argument("MJet: order mismatch");
}
}  // namespace detail

inline MJet operator+(const MJet& a, const MJet& b) {
  detail::require_compatible(a, b);
  MJet r = a;
  for (const auto& [e, v] : b.c) r.add_term(e, v);
  return r;
}

inline MJet operator-(const MJet& a, const MJet& b) {
  detail::require_compatible(a, b);
  MJet r = a;
  for (const auto& [e, v] : b.c) r.add_term(e, -v);
  return r;
}

inline MJet operator-(const MJet& a) {
  MJet r(a.nvars, a.order);
  for (const auto& [e, v] : a.c) r.c.emplace(e, -v);
  return r;
}

inline MJet operator*(const MJet& a, const MJet& b) {
  detail::require_compatible(a, b);
  MJet r(a.nvars, a.order);
  Exp e(static_cast<std::size_t>(a.nvars));
  for (const auto& [ea, va] : a.c) {
    int da = exp_degree(ea);
    for (const auto& [eb, vb] : b.c) {
      if (da + exp_degree(eb) > a.order) continue;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, va * vb);
    }
  }
  return r;
}

inline MJet operator*(const Rat& s, const MJet& a) {
  MJet r(a.nvars, a.order);
  if (s.is_zero()) return r;
  for (const auto& [e, v] : a.c) r.c.emplace(e, s * v);
  return r;
}

// Partial derivative; result order drops by one.
inline MJet ddx(const MJet& a, int i) {
  if (i < 0 || i >= a.nvars) throw std::invalid_argument("ddx: variable index out of range");
  MJet r(a.nvars, std::max(0, a.order - 1));
  for (const auto& [e, v] : a.c) {
    int k = e[static_cast<std::size_t>(i)];
    if (k == 0) continue;
    Exp d = e;
    --d[static_cast<std::size_t>(i)];
    r.add_term(d, v * k);
  }
  return r;
}

// f(u) for a univariate jet f and a multivariate jet u with u(0) = 0.
// Result order = min(f.order, u.order).
inline MJet compose_u(const UJet& f, const MJet& u) {
  if (!u.constant_term().is_zero())
    throw std::invalid_argument("compose_u: inner jet has nonzero constant term");
  int ord = std::min(f.order, u.order);
  MJet ui = u.truncated(ord);
  int top = std::min(f.order, ord);
  MJet r = MJet::constant(u.nvars, ord, f.coeff(top));
  for (int k = top - 1; k >= 0; --k) {
    r = r * ui;
    r.add_term(Exp(static_cast<std::size_t>(u.nvars), 0), f.coeff(k));
  }
  return r;
}

// Multiplicative inverse of a unit jet (nonzero constant term).
inline MJet mjet_inverse(const MJet& a) {
  Rat c0 = a.constant_term();
  if (c0.is_zero()) throw std::invalid_argument("MJet inverse: non-unit jet");
  MJet y = MJet::constant(a.nvars, a.order, Rat(1) / c0);
  MJet two = MJet::constant(a.nvars, a.order, Rat(2));
  int steps = 0;
  for (int reach = 1; reach <= a.order; reach *= 2) ++steps;
  for (int s = 0; s < steps; ++s) y = y * (two - a * y);
  return y;
}

// Substitute x_i = arc_i(s), arc_i(0) = 0; result is a univariate jet in s.
inline UJet eval_arc(const MJet& a, const std::vector<UJet>& arc) {
  if (static_cast<int>(arc.size()) != a.nvars)
    throw std::invalid_argument("eval_arc: arc dimension mismatch");
  int ord = arc.empty() ? a.order : arc[0].order;
  for (const UJet& g : arc) {
    if (g.order != ord) throw std::invalid_argument("eval_arc: arc order mismatch");
    if (!g.coeff(0).is_zero()) throw std::invalid_argument("eval_arc: arc must start at 0");
  }
  // Cache powers of the arc components.
  std::vector<std::vector<UJet>> pw(arc.size());
  for (std::size_t i = 0; i < arc.size(); ++i) pw[i].push_back(UJet::constant(ord, 1));
  auto power = [&](std::size_t i, int k) -> const UJet& {
    while (static_cast<int>(pw[i].size()) <= k) pw[i].push_back(pw[i].back() * arc[i]);
    return pw[i][static_cast<std::size_t>(k)];
  };
  UJet r(ord);
  for (const auto& [e, v] : a.c) {
    UJet term = UJet::constant(ord, v);
    for (std::size_t i = 0; i < arc.size(); ++i)
      if (e[i] > 0) term = term * power(i, e[i]);
    r = r + term;
  }
  return r;
}

// All exponents in n variables with total degree <= maxdeg, lexicographic.
inline std::vector<Exp> enumerate_exponents(int n, int maxdeg) {
  std::vector<Exp> out;
  Exp cur(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, left - k);
    }
    cur[static_cast<std::size_t>(pos)] = 0;
  };
  rec(rec, 0, maxdeg);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace webgeom
