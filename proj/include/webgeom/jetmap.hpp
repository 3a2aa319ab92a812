#pragma once

#include <stdexcept>
#include <vector>

#include "webgeom/linalg.hpp"
#include "webgeom/mjet.hpp"

namespace webgeom {

// Jet of a map germ (C^n, 0) -> (C^n, 0): n multivariate jets with zero
// constant term. Used as a local diffeomorphism when the linear part is
// invertible.
struct JetMap {
  int nvars = 0;
  int order = 0;
  std::vector<MJet> comp;

  JetMap() = default;
  JetMap(int n, int ord, std::vector<MJet> components)
      : nvars(n), order(ord), comp(std::move(components)) {
    if (static_cast<int>(comp.size()) != n)
      throw std::invalid_argument("JetMap: component count mismatch");
    for (const MJet& f : comp) {
      if (f.nvars != n || f.order != ord) throw std::invalid_argument("JetMap: shape mismatch");
      if (!f.constant_term().is_zero())
        throw std::invalid_argument("JetMap: components must vanish at the origin");
    }
  }

  static JetMap identity(int n, int ord) {
    std::vector<MJet> comps;
    comps.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) comps.push_back(MJet::variable(n, ord, i));
    return JetMap(n, ord, std::move(comps));
  }

  static JetMap linear(const Mat& L, int ord) {
    if (L.rows != L.cols) throw std::invalid_argument("JetMap::linear: not square");
    int n = static_cast<int>(L.rows);
    std::vector<MJet> comps;
    for (int i = 0; i < n; ++i) {
      MJet f(n, ord);
      for (int j = 0; j < n; ++j) {
        Exp e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(j)] = 1;
        f.add_term(e, L.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      }
      comps.push_back(std::move(f));
    }
    return JetMap(n, ord, std::move(comps));
  }

  // Jacobian at the origin.
  Mat linear_part() const {
    Mat L(static_cast<std::size_t>(nvars), static_cast<std::size_t>(nvars));
    for (int i = 0; i < nvars; ++i)
      for (int j = 0; j < nvars; ++j) {
        Exp e(static_cast<std::size_t>(nvars), 0);
        e[static_cast<std::size_t>(j)] = 1;
        L.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
            comp[static_cast<std::size_t>(i)].coeff(e);
      }
    return L;
  }

  bool operator==(const JetMap& o) const = default;
};

// f(phi(x)): substitute the map components into a jet.
inline MJet compose(const MJet& f, const JetMap& phi) {
  if (f.nvars != phi.nvars) throw std::invalid_argument("compose: variable count mismatch");
  int ord = std::min(f.order, phi.order);
  std::vector<std::vector<MJet>> pw(static_cast<std::size_t>(phi.nvars));
  for (int i = 0; i < phi.nvars; ++i)
    pw[static_cast<std::size_t>(i)].push_back(MJet::constant(phi.nvars, ord, 1));
  auto power = [&](int i, int k) -> const MJet& {
    auto& v = pw[static_cast<std::size_t>(i)];
    while (static_cast<int>(v.size()) <= k)
      v.push_back(v.back() * phi.comp[static_cast<std::size_t>(i)].truncated(ord));
    return v[static_cast<std::size_t>(k)];
  };
  MJet r(phi.nvars, ord);
  for (const auto& [e, v] : f.c) {
    if (exp_degree(e) > ord) continue;  // valuation >= 1 components cannot reach back down
    MJet term = MJet::constant(phi.nvars, ord, v);
    for (int i = 0; i < phi.nvars; ++i)
      if (e[static_cast<std::size_t>(i)] > 0) term = term * power(i, e[static_cast<std::size_t>(i)]);
    r = r + term;
  }
  return r;
}

inline JetMap compose(const JetMap& f, const JetMap& g) {
  if (f.nvars != g.nvars) throw std::invalid_argument("compose: variable count mismatch");
  int ord = std::min(f.order, g.order);
  std::vector<MJet> comps;
  comps.reserve(f.comp.size());
  for (const MJet& fi : f.comp) comps.push_back(compose(fi.truncated(ord), g));
  return JetMap(f.nvars, ord, std::move(comps));
}

// Inverse jet map: psi with phi(psi(x)) = psi(phi(x)) = x modulo degree
// order + 1. Requires an invertible linear part.
inline JetMap invert_map(const JetMap& phi) {
  Mat L = phi.linear_part();
  Mat Linv;
  try {
    Linv = inverse(L);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("invert_map: singular linear part");
  }
  int n = phi.nvars, ord = phi.order;
  // h = phi - L has valuation >= 2, so the fixed-point iteration
  // psi <- Linv (id - h(psi)) gains one correct degree per pass.
  JetMap lin = JetMap::linear(L, ord);
  std::vector<MJet> h;
  for (int i = 0; i < n; ++i)
    h.push_back(phi.comp[static_cast<std::size_t>(i)] - lin.comp[static_cast<std::size_t>(i)]);
  JetMap psi = JetMap::linear(Linv, ord);
  for (int pass = 1; pass < ord; ++pass) {
    std::vector<MJet> next;
    next.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      MJet acc(n, ord);
      for (int j = 0; j < n; ++j) {
        Rat l = Linv.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        if (l.is_zero()) continue;
        MJet inner = MJet::variable(n, ord, j) - compose(h[static_cast<std::size_t>(j)], psi);
        acc = acc + l * inner;
      }
      next.push_back(std::move(acc));
    }
    psi = JetMap(n, ord, std::move(next));
  }
  // The defining property is cheap to verify and rules out any slip above.
  JetMap check = compose(phi, psi);
  if (!(check == JetMap::identity(n, ord)))
    throw std::runtime_error("invert_map: inverse verification failed");
  return psi;
}

}  // namespace webgeom
