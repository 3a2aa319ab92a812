#pragma once

#include <stdexcept>
#include <vector>

#include "webgeom/mjet.hpp"

namespace webgeom {

// Polynomial in an auxiliary variable t with multivariate-jet coefficients,
// ascending by degree in t.
struct TPoly {
  std::vector<MJet> c;

  TPoly() = default;
  explicit TPoly(std::vector<MJet> coeffs) : c(std::move(coeffs)) {}

  int degt() const { return static_cast<int>(c.size()) - 1; }

  TPoly dt() const {
    if (c.size() <= 1) return TPoly();
    std::vector<MJet> d;
    d.reserve(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(Rat(static_cast<int>(k)) * c[k]);
    return TPoly(std::move(d));
  }

  // F(x, t(x)) by Horner.
  MJet subst(const MJet& t) const {
    if (c.empty()) throw std::invalid_argument("TPoly::subst: empty polynomial");
    MJet r = c.back().truncated(t.order);
    for (int k = degt() - 1; k >= 0; --k)
      r = r * t + c[static_cast<std::size_t>(k)].truncated(t.order);
    return r;
  }

  // Specialize t to a rational constant.
  MJet eval_t(const Rat& t) const {
    if (c.empty()) throw std::invalid_argument("TPoly::eval_t: empty polynomial");
    MJet r = c.back();
    for (int k = degt() - 1; k >= 0; --k) {
      r = t * r + c[static_cast<std::size_t>(k)];
    }
    return r;
  }
};

// Lifts a simple root t0 of F(0, t) to the unique jet t(x) with t(0) = t0
// and F(x, t(x)) = 0 modulo the truncation. Quadratic Newton iteration,
// ceil(log2(order + 1)) steps.
inline MJet newton_root(const TPoly& F, const Rat& t0) {
  if (F.c.empty()) throw std::invalid_argument("newton_root: empty polynomial");
  int n = F.c[0].nvars, ord = F.c[0].order;
  Rat f0 = 0, fp0 = 0, tp = 1;
  for (std::size_t k = 0; k < F.c.size(); ++k) {
    Rat ck = F.c[k].constant_term();
    f0 += ck * tp;
    if (k + 1 < F.c.size())
      fp0 += Rat(static_cast<int>(k) + 1) * F.c[k + 1].constant_term() * tp;
    tp *= t0;
  }
  if (!f0.is_zero()) throw std::invalid_argument("newton_root: t0 is not a root at the base point");
  if (fp0.is_zero()) throw std::invalid_argument("newton_root: multiple root");

  TPoly Ft = F.dt();
  MJet t = MJet::constant(n, ord, t0);
  int steps = 0;
  for (int reach = 1; reach <= ord; reach *= 2) ++steps;
  for (int s = 0; s < steps; ++s) t = t - F.subst(t) * mjet_inverse(Ft.subst(t));
  if (!F.subst(t).is_zero()) throw std::runtime_error("newton_root: residual not zero");
  return t;
}

}  // namespace webgeom
