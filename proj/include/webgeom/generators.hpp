#pragma once

#include <stdexcept>
#include <vector>

#include "webgeom/jetmap.hpp"
#include "webgeom/newton.hpp"
#include "webgeom/polyq.hpp"
#include "webgeom/web.hpp"

namespace webgeom {

// Maximal-rank linear web from a rational normal curve: defining forms
// l(theta_a, x) = sum_mu theta_a^mu x_mu at pairwise distinct parameters.
inline WebGerm rnc_linear_web(int n, int d, const Vec& theta, int J) {
  if (static_cast<int>(theta.size()) != d)
    throw std::invalid_argument("rnc_linear_web: need d parameter values");
  for (std::size_t i = 0; i < theta.size(); ++i)
    for (std::size_t j = i + 1; j < theta.size(); ++j)
      if (theta[i] == theta[j]) throw std::invalid_argument("rnc_linear_web: theta values must be distinct");
  std::vector<MJet> jets;
  jets.reserve(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    MJet f(n, J);
    Rat tp = 1;
    for (int mu = 0; mu < n; ++mu) {
      Exp e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(mu)] = 1;
      f.add_term(e, tp);
      tp *= theta[static_cast<std::size_t>(a)];
    }
    jets.push_back(std::move(f));
  }
  return WebGerm(n, J, std::move(jets));
}

// The non-linearizable family of webs built from the coordinate
// (n+1)-web plus separable functions sum_mu U_{a mu}(x_mu):
// U[a - (n+2)][mu] are the univariate jets of the separable parts; their
// constant terms are dropped so every defining jet vanishes at 0.
inline WebGerm separable_family_web(int n, int d, const std::vector<std::vector<UJet>>& U, int J) {
  if (n < 3) throw std::invalid_argument("separable_family_web: need n >= 3");
  if (d < n + 2 || d > 2 * n - 1)
    throw std::invalid_argument("separable_family_web: need n+2 <= d <= 2n-1");
  if (static_cast<int>(U.size()) != d - n - 1)
    throw std::invalid_argument("separable_family_web: need d-n-1 separable blocks");
  std::vector<MJet> jets;
  for (int i = 0; i < n; ++i) jets.push_back(MJet::variable(n, J, i));
  MJet diag(n, J);
  for (int i = 0; i < n; ++i) diag = diag + MJet::variable(n, J, i);
  jets.push_back(std::move(diag));
  for (const auto& block : U) {
    if (static_cast<int>(block.size()) != n)
      throw std::invalid_argument("separable_family_web: each block needs n univariate jets");
    MJet f(n, J);
    for (int mu = 0; mu < n; ++mu) {
      UJet g = block[static_cast<std::size_t>(mu)].truncated(J);
      g.set(0, Rat(0));
      f = f + compose_u(g, MJet::variable(n, J, mu));
    }
    jets.push_back(std::move(f));
  }
  return WebGerm(n, J, std::move(jets));
}

// Image web under a local diffeomorphism: defining jets u_a after the
// inverse map (the leaves move with phi).
inline WebGerm pushforward(const WebGerm& w, const JetMap& phi) {
  if (phi.nvars != w.nvars) throw std::invalid_argument("pushforward: variable count mismatch");
  JetMap psi = invert_map(phi);  // throws on singular linear part
  std::vector<MJet> jets;
  jets.reserve(w.u.size());
  for (const MJet& f : w.u) jets.push_back(compose(f.truncated(std::min(w.order, phi.order)), psi));
  return WebGerm(w.nvars, std::min(w.order, phi.order), std::move(jets));
}

// Nondegenerate rational curve of degree `deg` in P^n, given by n+1
// polynomial components of degree <= deg.
struct CurveParam {
  int n = 0;
  int deg = 0;
  std::vector<Vec> gamma;  // n+1 coefficient vectors, ascending degree

  CurveParam() = default;
  CurveParam(int nn, int dd, std::vector<Vec> comps) : n(nn), deg(dd), gamma(std::move(comps)) {
    if (static_cast<int>(gamma.size()) != n + 1)
      throw std::invalid_argument("CurveParam: need n+1 components");
    Mat coeffs(gamma.size(), static_cast<std::size_t>(deg) + 1);
    for (std::size_t i = 0; i < gamma.size(); ++i) {
      if (static_cast<int>(gamma[i].size()) > deg + 1)
        throw std::invalid_argument("CurveParam: component degree too high");
      for (std::size_t k = 0; k < gamma[i].size(); ++k) coeffs.at(i, k) = gamma[i][k];
    }
    if (rank(coeffs) != gamma.size())
      throw std::invalid_argument("CurveParam: degenerate curve (components dependent)");
  }
};

// Algebraic web cut on hyperplanes near x0: the section polynomial
// sum_i x0_i gamma_i(t) must have d simple rational roots (a degree drop
// means intersections at infinity and is rejected). Chart directions are
// the coordinate hyperplanes away from the first nonzero entry of x0.
inline WebGerm algebraic_web(const CurveParam& c, const Vec& x0, int J) {
  if (static_cast<int>(x0.size()) != c.n + 1)
    throw std::invalid_argument("algebraic_web: hyperplane dimension mismatch");
  const int n = c.n, d = c.deg;
  Vec section(static_cast<std::size_t>(d) + 1);
  for (std::size_t i = 0; i < x0.size(); ++i)
    for (std::size_t k = 0; k < c.gamma[i].size(); ++k) section[k] += x0[i] * c.gamma[i][k];
  if (polyq::deg(section) != d)
    throw std::invalid_argument("algebraic_web: base hyperplane not admissible (intersections at infinity)");
  polyq::RationalRoots rr = polyq::rational_roots(section);
  int simple = 0;
  for (const auto& [root, mult] : rr.roots) {
    (void)root;
    if (mult != 1)
      throw std::invalid_argument("algebraic_web: base hyperplane not admissible (multiple intersection)");
    ++simple;
  }
  if (simple != d || !rr.complete)
    throw std::invalid_argument("algebraic_web: base hyperplane not admissible (need d simple rational roots)");

  std::size_t pivot = 0;
  while (x0[pivot].is_zero()) ++pivot;
  std::vector<std::size_t> chart;
  for (std::size_t i = 0; i < x0.size(); ++i)
    if (i != pivot) chart.push_back(i);

  // F(x, t) = section(t) + sum_lambda x_lambda gamma_{chart_lambda}(t)
  std::vector<MJet> F(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    MJet coef = MJet::constant(n, J, section[static_cast<std::size_t>(k)]);
    for (int lam = 0; lam < n; ++lam) {
      const Vec& g = c.gamma[chart[static_cast<std::size_t>(lam)]];
      if (static_cast<std::size_t>(k) < g.size() && !g[static_cast<std::size_t>(k)].is_zero())
        coef = coef + g[static_cast<std::size_t>(k)] * MJet::variable(n, J, lam);
    }
    F[static_cast<std::size_t>(k)] = std::move(coef);
  }
  TPoly Fp(std::move(F));
  std::vector<MJet> jets;
  for (const auto& [root, mult] : rr.roots) {
    (void)mult;
    MJet t = newton_root(Fp, root);
    t.add_term(Exp(static_cast<std::size_t>(n), 0), -root);
    jets.push_back(std::move(t));
  }
  return WebGerm(n, J, std::move(jets));
}

}  // namespace webgeom
