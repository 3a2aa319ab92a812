#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "webgeom/coframe.hpp"
#include "webgeom/germ_rank.hpp"
#include "webgeom/polyq.hpp"
#include "webgeom/projective.hpp"
#include "webgeom/relations.hpp"

namespace webgeom {

// The Poincare construction attached to a certified web: the vectors
// Z_alpha(x) of relation values, their derivative companions Z'_alpha with
// dZ_alpha = Z'_alpha du_alpha, and the adapted-coframe data, everything
// truncated to a common working order R = J-2.
struct PoincareData {
  int nvars = 0;
  int count = 0;
  int order = 0;  // R
  int l = 0;      // 2d - 3n + 1
  int m = 0;      // 2d - 3n
  std::vector<std::size_t> val0_rows, val1_rows;  // chosen graded basis rows
  std::vector<std::vector<MJet>> Z;     // [alpha][i], order R
  std::vector<std::vector<MJet>> Zp;    // [alpha][i], order R-1
  std::vector<MJet> k, theta;           // order R
  std::vector<std::vector<MJet>> a;     // coframe coefficients [mu][lambda], order R
  std::vector<MJet> u;                  // defining jets, order J
  JetMap norm;                          // normalizing coordinate change of the coframe
};

inline PoincareData poincare_build(const WebGerm& w, const RelationSpace& rs,
                                   const AdaptedCoframe& cf) {
  const int n = w.nvars, d = w.count;
  if (d < 2 * n) throw std::invalid_argument("poincare_build: need d >= 2n");
  PoincareData pd;
  pd.nvars = n;
  pd.count = d;
  pd.order = w.order - 2;
  pd.l = 2 * d - 3 * n + 1;
  pd.m = pd.l - 1;
  for (std::size_t r = 0; r < rs.basis.size(); ++r) {
    if (rs.basis[r].valuation == 0) pd.val0_rows.push_back(r);
    if (rs.basis[r].valuation == 1) pd.val1_rows.push_back(r);
  }
  if (pd.val0_rows.size() != static_cast<std::size_t>(d - n) ||
      pd.val1_rows.size() != static_cast<std::size_t>(d - 2 * n + 1))
    throw std::invalid_argument(
        "poincare_build: certificate absent (web is not of maximal rank in valuation <= 1)");

  std::vector<std::size_t> rows = pd.val0_rows;
  rows.insert(rows.end(), pd.val1_rows.begin(), pd.val1_rows.end());
  const int R = pd.order;
  pd.Z.resize(static_cast<std::size_t>(d));
  pd.Zp.resize(static_cast<std::size_t>(d));
  for (int al = 0; al < d; ++al) {
    MJet ua = w.u[static_cast<std::size_t>(al)].truncated(R);
    MJet ua_low = w.u[static_cast<std::size_t>(al)].truncated(std::max(0, R - 1));
    for (std::size_t r : rows) {
      pd.Z[static_cast<std::size_t>(al)].push_back(
          compose_u(rs.basis[r].f[static_cast<std::size_t>(al)], ua));
      pd.Zp[static_cast<std::size_t>(al)].push_back(
          compose_u(rs.basis[r].f[static_cast<std::size_t>(al)].derivative(), ua_low));
    }
  }
  pd.k.reserve(static_cast<std::size_t>(d));
  pd.theta.reserve(static_cast<std::size_t>(d));
  for (int al = 0; al < d; ++al) {
    pd.k.push_back(cf.k[static_cast<std::size_t>(al)].truncated(R));
    pd.theta.push_back(cf.theta[static_cast<std::size_t>(al)].truncated(R));
  }
  pd.a.assign(static_cast<std::size_t>(n), std::vector<MJet>());
  for (int mu = 0; mu < n; ++mu)
    for (int lam = 0; lam < n; ++lam)
      pd.a[static_cast<std::size_t>(mu)].push_back(
          cf.a[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)].truncated(R));
  pd.u = w.u;
  pd.norm = cf.norm;

  // Defining identity sum_alpha Z_alpha du_alpha = 0, per chosen relation.
  for (int i = 0; i < pd.l; ++i)
    for (int lam = 0; lam < n; ++lam) {
      MJet acc(n, R);
      for (int al = 0; al < d; ++al)
        acc = acc + pd.Z[static_cast<std::size_t>(al)][static_cast<std::size_t>(i)] *
                        ddx(w.u[static_cast<std::size_t>(al)], lam).truncated(R);
      if (!acc.is_zero())
        throw std::runtime_error("poincare_build: defining relation identity violated");
    }
  return pd;
}

// ---------------------------------------------------------------------------
// Checks at the origin (exact for every web: constant terms are germ values).

struct PositionReport {
  std::size_t span0 = 0;
  bool block_shape = false;
  std::size_t subsets_total = 0, subsets_full = 0;
  std::size_t zp_total = 0, zp_full = 0;
  bool pass = false;
};

namespace detail {
inline Vec jet_vector_at0(const std::vector<MJet>& v) {
  Vec out;
  out.reserve(v.size());
  for (const MJet& j : v) out.push_back(j.constant_term());
  return out;
}
}  // namespace detail

inline PositionReport position_checks(const PoincareData& pd) {
  const int n = pd.nvars, d = pd.count;
  PositionReport rep;
  std::vector<Vec> Z0, Zp0;
  for (int al = 0; al < d; ++al) {
    Z0.push_back(detail::jet_vector_at0(pd.Z[static_cast<std::size_t>(al)]));
    Zp0.push_back(detail::jet_vector_at0(pd.Zp[static_cast<std::size_t>(al)]));
  }
  // Valuation-1 rows vanish at the origin: M(0) = (A; O).
  rep.block_shape = true;
  for (int al = 0; al < d; ++al)
    for (std::size_t i = pd.val0_rows.size(); i < static_cast<std::size_t>(pd.l); ++i)
      if (!Z0[static_cast<std::size_t>(al)][i].is_zero()) rep.block_shape = false;

  rep.span0 = rank(Mat::from_rows(Z0));
  std::size_t need = static_cast<std::size_t>(d - n);
  for_each_subset(static_cast<std::size_t>(d), need, [&](const std::vector<std::size_t>& idx) {
    ++rep.subsets_total;
    std::vector<Vec> rows;
    for (std::size_t i : idx) rows.push_back(Z0[i]);
    if (rank(Mat::from_rows(rows)) == need) ++rep.subsets_full;
  });
  std::size_t snd = static_cast<std::size_t>(d - 2 * n + 1);
  for_each_subset(static_cast<std::size_t>(d), snd, [&](const std::vector<std::size_t>& idx) {
    ++rep.zp_total;
    std::vector<Vec> rows = Z0;
    for (std::size_t i : idx) rows.push_back(Zp0[i]);
    if (rank(Mat::from_rows(rows)) == static_cast<std::size_t>(pd.l)) ++rep.zp_full;
  });
  rep.pass = rep.block_shape && rep.span0 == need && rep.subsets_full == rep.subsets_total &&
             rep.zp_full == rep.zp_total;
  return rep;
}

// Immersion probe at the origin: Z_alpha(0) together with the directional
// derivatives <du_alpha(0), dir> Z'_alpha(0) span the full space.
inline bool immersion_at_origin(const PoincareData& pd, const Vec& dir) {
  const int n = pd.nvars, d = pd.count;
  std::vector<Vec> rows;
  for (int al = 0; al < d; ++al) rows.push_back(detail::jet_vector_at0(pd.Z[static_cast<std::size_t>(al)]));
  for (int al = 0; al < d; ++al) {
    Rat c = 0;
    for (int lam = 0; lam < n; ++lam) {
      Exp e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(lam)] = 1;
      c += pd.u[static_cast<std::size_t>(al)].coeff(e) * dir[static_cast<std::size_t>(lam)];
    }
    Vec row = detail::jet_vector_at0(pd.Zp[static_cast<std::size_t>(al)]);
    for (Rat& v : row) v *= c;
    rows.push_back(std::move(row));
  }
  return rank(Mat::from_rows(rows)) == static_cast<std::size_t>(pd.l);
}

// ---------------------------------------------------------------------------
// The curve field Z*(x, t) = sum_alpha P_alpha(x, t) k_alpha(x) Z_alpha(x)
// and its jet-level laws.

struct CurveField {
  int deg_bound = 0;  // d - n - 1
  bool degree_ok = false;
  bool sigma_ok = false;
  bool power_sums_ok = false;
  bool incidence_ok = false;
  bool poly_basis_ok = false;
  std::vector<std::vector<MJet>> zstar;  // [k][i], k <= d-1, order R
  std::vector<Vec> zstar0;               // evaluated coefficients at the origin
};

namespace detail {
// Coefficients (ascending in t) of prod over the given jets of (t - r).
inline std::vector<MJet> mjet_poly_from_roots(const std::vector<MJet>& roots, int skip, int n,
                                              int R) {
  std::vector<MJet> poly{MJet::constant(n, R, 1)};
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (static_cast<int>(i) == skip) continue;
    std::vector<MJet> next(poly.size() + 1, MJet(n, R));
    for (std::size_t kdeg = 0; kdeg < poly.size(); ++kdeg) {
      next[kdeg + 1] = next[kdeg + 1] + poly[kdeg];
      next[kdeg] = next[kdeg] - roots[i] * poly[kdeg];
    }
    poly = std::move(next);
  }
  return poly;
}
}  // namespace detail

inline CurveField curve_field(const PoincareData& pd) {
  const int n = pd.nvars, d = pd.count, R = pd.order, l = pd.l;
  CurveField cf;
  cf.deg_bound = d - n - 1;

  std::vector<MJet> sigma = detail::mjet_poly_from_roots(pd.theta, -1, n, R);
  std::vector<std::vector<MJet>> sigma_a(static_cast<std::size_t>(d));
  for (int al = 0; al < d; ++al)
    sigma_a[static_cast<std::size_t>(al)] = detail::mjet_poly_from_roots(pd.theta, al, n, R);

  // sigma_{k+1} = sigma_k(alpha) - theta_alpha sigma_{k+1}(alpha)
  cf.sigma_ok = true;
  for (int al = 0; al < d && cf.sigma_ok; ++al)
    for (int kdeg = 0; kdeg < d; ++kdeg) {
      MJet rhs = sigma_a[static_cast<std::size_t>(al)][static_cast<std::size_t>(kdeg)];
      if (kdeg + 1 < d)
        rhs = rhs - pd.theta[static_cast<std::size_t>(al)] *
                        sigma_a[static_cast<std::size_t>(al)][static_cast<std::size_t>(kdeg) + 1];
      if (!(sigma[static_cast<std::size_t>(kdeg) + 1] == rhs)) {
        cf.sigma_ok = false;
        break;
      }
    }

  // Weighted power sums: sum_alpha Z_alpha k_alpha theta_alpha^mu = 0 for mu < n.
  cf.power_sums_ok = true;
  std::vector<std::vector<MJet>> tpow(static_cast<std::size_t>(d));
  for (int al = 0; al < d; ++al) {
    tpow[static_cast<std::size_t>(al)].push_back(MJet::constant(n, R, 1));
    for (int mu = 1; mu < n; ++mu)
      tpow[static_cast<std::size_t>(al)].push_back(tpow[static_cast<std::size_t>(al)].back() *
                                                   pd.theta[static_cast<std::size_t>(al)]);
  }
  for (int mu = 0; mu < n && cf.power_sums_ok; ++mu)
    for (int i = 0; i < l; ++i) {
      MJet acc(n, R);
      for (int al = 0; al < d; ++al)
        acc = acc + pd.Z[static_cast<std::size_t>(al)][static_cast<std::size_t>(i)] *
                        MJet(pd.k[static_cast<std::size_t>(al)] *
                             tpow[static_cast<std::size_t>(al)][static_cast<std::size_t>(mu)]);
      if (!acc.is_zero()) {
        cf.power_sums_ok = false;
        break;
      }
    }

  // Z*(x, t) = sum_alpha P_alpha(x, t) k_alpha Z_alpha, expanded in t.
  cf.zstar.assign(static_cast<std::size_t>(d), std::vector<MJet>());
  for (int kdeg = 0; kdeg < d; ++kdeg) {
    std::vector<MJet> coeff(static_cast<std::size_t>(l), MJet(n, R));
    for (int al = 0; al < d; ++al) {
      MJet f = MJet(sigma_a[static_cast<std::size_t>(al)][static_cast<std::size_t>(kdeg)] *
                    pd.k[static_cast<std::size_t>(al)]);
      for (int i = 0; i < l; ++i)
        coeff[static_cast<std::size_t>(i)] =
            coeff[static_cast<std::size_t>(i)] +
            f * pd.Z[static_cast<std::size_t>(al)][static_cast<std::size_t>(i)];
    }
    cf.zstar[static_cast<std::size_t>(kdeg)] = std::move(coeff);
  }
  cf.degree_ok = true;
  for (int kdeg = cf.deg_bound + 1; kdeg < d; ++kdeg)
    for (const MJet& c : cf.zstar[static_cast<std::size_t>(kdeg)])
      if (!c.is_zero()) cf.degree_ok = false;

  for (int kdeg = 0; kdeg < d; ++kdeg)
    cf.zstar0.push_back(detail::jet_vector_at0(cf.zstar[static_cast<std::size_t>(kdeg)]));

  // Incidence at the origin: Z*(0, theta_alpha(0)) is proportional to
  // Z_alpha(0) and nonzero.
  cf.incidence_ok = true;
  for (int al = 0; al < d; ++al) {
    Rat t0 = pd.theta[static_cast<std::size_t>(al)].constant_term();
    Vec y(static_cast<std::size_t>(l));
    for (int kdeg = d - 1; kdeg >= 0; --kdeg)
      for (int i = 0; i < l; ++i)
        y[static_cast<std::size_t>(i)] =
            y[static_cast<std::size_t>(i)] * t0 + cf.zstar0[static_cast<std::size_t>(kdeg)][static_cast<std::size_t>(i)];
    bool nonzero = false;
    for (const Rat& c : y) nonzero = nonzero || !c.is_zero();
    std::vector<Vec> pair{y, detail::jet_vector_at0(pd.Z[static_cast<std::size_t>(al)])};
    if (!nonzero || rank(Mat::from_rows(pair)) != 1) cf.incidence_ok = false;
  }

  // In a basis of the span, the d-n polynomial coordinates of Z*(0, .) form
  // a basis of the polynomials of degree <= d-n-1.
  {
    std::vector<Vec> Z0;
    for (int al = 0; al < d; ++al) Z0.push_back(detail::jet_vector_at0(pd.Z[static_cast<std::size_t>(al)]));
    RrefResult rr = rref(Mat::from_rows(Z0));
    std::size_t spandim = rr.pivots.size();
    cf.poly_basis_ok = spandim == static_cast<std::size_t>(d - n);
    if (cf.poly_basis_ok) {
      Mat basis(spandim, static_cast<std::size_t>(l));
      for (std::size_t i = 0; i < spandim; ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(l); ++j)
          basis.at(i, j) = rr.m.at(i, j);
      Mat bt(static_cast<std::size_t>(l), spandim);
      for (std::size_t i = 0; i < spandim; ++i)
        for (std::size_t j = 0; j < static_cast<std::size_t>(l); ++j) bt.at(j, i) = basis.at(i, j);
      Mat Q(spandim, spandim);
      for (int kdeg = 0; kdeg <= cf.deg_bound; ++kdeg) {
        auto coords = solve(bt, cf.zstar0[static_cast<std::size_t>(kdeg)]);
        if (!coords) {
          cf.poly_basis_ok = false;
          break;
        }
        for (std::size_t i = 0; i < spandim; ++i) Q.at(i, static_cast<std::size_t>(kdeg)) = (*coords)[i];
      }
      if (cf.poly_basis_ok) cf.poly_basis_ok = rank(Q) == spandim;
    }
  }
  return cf;
}

// ---------------------------------------------------------------------------
// Exact evaluation path: jets are read as polynomials and every claim is
// plain rational linear algebra at the evaluated point. Sound whenever the
// stored data satisfy the defining identities as polynomials (see
// polynomial_exact below); the origin is exact for every web.

struct CurveAt {
  bool valid = false;
  std::string why;
  Vec x;
  std::vector<Vec> Z;   // evaluated Z_alpha
  Vec k, theta;
  std::vector<Vec> zcoef;  // Z* coefficients recomputed from the evaluated data
  Mat span;                // canonical (rref) basis rows of span{Z_alpha}
  Rnc curve;               // Z*(x, .) in span coordinates
};

inline CurveAt curve_at(const PoincareData& pd, const Vec& x) {
  const int n = pd.nvars, d = pd.count, l = pd.l;
  CurveAt out;
  out.x = x;
  for (int al = 0; al < d; ++al) {
    Vec z;
    for (const MJet& j : pd.Z[static_cast<std::size_t>(al)]) z.push_back(j.eval(x));
    out.Z.push_back(std::move(z));
    out.k.push_back(pd.k[static_cast<std::size_t>(al)].eval(x));
    out.theta.push_back(pd.theta[static_cast<std::size_t>(al)].eval(x));
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (out.theta[static_cast<std::size_t>(i)] == out.theta[static_cast<std::size_t>(j)]) {
        out.why = "theta collision at the probe point";
        return out;
      }
  // sigma_alpha over Q and the curve coefficients.
  out.zcoef.assign(static_cast<std::size_t>(d), Vec(static_cast<std::size_t>(l)));
  for (int al = 0; al < d; ++al) {
    Vec roots;
    for (int b = 0; b < d; ++b)
      if (b != al) roots.push_back(out.theta[static_cast<std::size_t>(b)]);
    Vec pa = polyq::from_roots(roots);
    for (std::size_t kdeg = 0; kdeg < pa.size(); ++kdeg) {
      Rat f = pa[kdeg] * out.k[static_cast<std::size_t>(al)];
      if (f.is_zero()) continue;
      for (int i = 0; i < l; ++i)
        out.zcoef[kdeg][static_cast<std::size_t>(i)] += f * out.Z[static_cast<std::size_t>(al)][static_cast<std::size_t>(i)];
    }
  }
  for (int kdeg = d - n; kdeg < d; ++kdeg)
    for (const Rat& c : out.zcoef[static_cast<std::size_t>(kdeg)])
      if (!c.is_zero()) {
        out.why = "curve coefficients above degree d-n-1 do not vanish";
        return out;
      }
  RrefResult rr = rref(Mat::from_rows(out.Z));
  if (rr.pivots.size() != static_cast<std::size_t>(d - n)) {
    out.why = "span of Z values is not of dimension d-n";
    return out;
  }
  out.span = Mat(static_cast<std::size_t>(d - n), static_cast<std::size_t>(l));
  for (std::size_t i = 0; i < out.span.rows; ++i)
    for (std::size_t j = 0; j < out.span.cols; ++j) out.span.at(i, j) = rr.m.at(i, j);
  Mat bt(static_cast<std::size_t>(l), out.span.rows);
  for (std::size_t i = 0; i < out.span.rows; ++i)
    for (std::size_t j = 0; j < out.span.cols; ++j) bt.at(j, i) = out.span.at(i, j);
  Mat Q(out.span.rows, out.span.rows);
  for (int kdeg = 0; kdeg <= d - n - 1; ++kdeg) {
    auto coords = solve(bt, out.zcoef[static_cast<std::size_t>(kdeg)]);
    if (!coords) {
      out.why = "curve leaves the span of the Z values";
      return out;
    }
    for (std::size_t i = 0; i < Q.rows; ++i) Q.at(i, static_cast<std::size_t>(kdeg)) = (*coords)[i];
  }
  try {
    out.curve = Rnc(d - n - 1, std::move(Q));
  } catch (const std::invalid_argument&) {
    out.why = "span coordinates of the curve are degenerate";
    return out;
  }
  out.valid = true;
  return out;
}

inline int span_intersection_dim(const PoincareData& pd, const Vec& x0, const Vec& x1) {
  const int d = pd.count;
  std::vector<Vec> A, B, S;
  for (int al = 0; al < d; ++al) {
    Vec za, zb;
    for (const MJet& j : pd.Z[static_cast<std::size_t>(al)]) {
      za.push_back(j.eval(x0));
      zb.push_back(j.eval(x1));
    }
    S.push_back(za);
    S.push_back(zb);
    A.push_back(std::move(za));
    B.push_back(std::move(zb));
  }
  return static_cast<int>(rank(Mat::from_rows(A)) + rank(Mat::from_rows(B))) -
         static_cast<int>(rank(Mat::from_rows(S)));
}

struct IntersectionReport {
  bool valid = false;
  std::string why;
  int w_dim = 0;          // linear dimension of the span intersection
  int bound = 0;          // n - 1
  int degree_in_w = 0;    // weighted count of C(x) meeting the intersection space
  bool bound_ok = false;
  std::vector<std::pair<Rat, int>> common;  // verified common points: (parameter on C(x0), multiplicity)
  int common_count = 0;
  bool infinity_common = false;
};

// Common points of C(x0) and C(x1), with multiplicity, via the restriction
// of C(x0) to the intersection of the two spans.
inline IntersectionReport curve_intersections(const PoincareData& pd, const Vec& x0,
                                              const Vec& x1) {
  const int n = pd.nvars, d = pd.count, l = pd.l;
  IntersectionReport rep;
  rep.bound = n - 1;
  CurveAt ca = curve_at(pd, x0);
  CurveAt cb = curve_at(pd, x1);
  if (!ca.valid || !cb.valid) {
    rep.why = ca.valid ? cb.why : ca.why;
    return rep;
  }
  // Intersection of the spans: combos A^T c1 = B^T c2.
  std::size_t ra = ca.span.rows, rb = cb.span.rows;
  Mat stack(static_cast<std::size_t>(l), ra + rb);
  for (std::size_t j = 0; j < static_cast<std::size_t>(l); ++j) {
    for (std::size_t i = 0; i < ra; ++i) stack.at(j, i) = ca.span.at(i, j);
    for (std::size_t i = 0; i < rb; ++i) stack.at(j, ra + i) = -cb.span.at(i, j);
  }
  std::vector<Vec> wbasis;
  for (const Vec& kv : kernel_basis(stack)) {
    Vec v(static_cast<std::size_t>(l));
    for (std::size_t i = 0; i < ra; ++i)
      for (std::size_t j = 0; j < static_cast<std::size_t>(l); ++j) v[j] += kv[i] * ca.span.at(i, j);
    wbasis.push_back(std::move(v));
  }
  rep.w_dim = static_cast<int>(wbasis.size());
  if (wbasis.empty()) {
    rep.valid = true;
    rep.bound_ok = true;
    return rep;
  }
  // Functionals vanishing on W, applied to the parametrization of C(x0).
  std::vector<Vec> funcs = kernel_basis(Mat::from_rows(wbasis));
  std::vector<Vec> gs;
  int min_inf = d - n - 1;
  for (const Vec& h : funcs) {
    Vec g;
    for (int kdeg = 0; kdeg <= d - n - 1; ++kdeg) {
      Rat c = 0;
      for (int j = 0; j < l; ++j)
        c += h[static_cast<std::size_t>(j)] * ca.zcoef[static_cast<std::size_t>(kdeg)][static_cast<std::size_t>(j)];
      g.push_back(c);
    }
    g = polyq::trim(std::move(g));
    if (!g.empty()) min_inf = std::min(min_inf, d - n - 1 - polyq::deg(g));
    gs.push_back(std::move(g));
  }
  Vec gcd_all;
  for (const Vec& g : gs) gcd_all = polyq::gcd(gcd_all, g);
  if (polyq::deg(gcd_all) < 0 && min_inf >= d - n - 1) {
    rep.why = "curve lies inside the intersection space";
    return rep;
  }
  rep.degree_in_w = std::max(polyq::deg(gcd_all), 0) + min_inf;
  rep.bound_ok = rep.degree_in_w <= rep.bound;

  auto on_other = [&](const Vec& y) -> bool {
    Mat bt(static_cast<std::size_t>(l), cb.span.rows);
    for (std::size_t i = 0; i < cb.span.rows; ++i)
      for (std::size_t j = 0; j < static_cast<std::size_t>(l); ++j) bt.at(j, i) = cb.span.at(i, j);
    auto coords = solve(bt, y);
    if (!coords) return false;
    return point_on_rnc(cb.curve, PPoint(*coords)).has_value();
  };
  polyq::RationalRoots roots = polyq::rational_roots(gcd_all);
  for (const auto& [t0, mult] : roots.roots) {
    Vec y(static_cast<std::size_t>(l));
    for (int kdeg = d - n - 1; kdeg >= 0; --kdeg)
      for (int j = 0; j < l; ++j)
        y[static_cast<std::size_t>(j)] =
            y[static_cast<std::size_t>(j)] * t0 + ca.zcoef[static_cast<std::size_t>(kdeg)][static_cast<std::size_t>(j)];
    if (on_other(y)) {
      rep.common.emplace_back(t0, mult);
      rep.common_count += mult;
    }
  }
  if (min_inf > 0 && on_other(ca.zcoef[static_cast<std::size_t>(d - n - 1)])) {
    rep.infinity_common = true;
    rep.common_count += min_inf;
  }
  rep.valid = true;
  return rep;
}

// Exact leaf-sharing partner of the origin for webs with linear defining
// forms among u_1..u_n: u_1 = ... = u_{n-1} = 0, u_n = tau.
inline Vec leaf_sharing_point(const PoincareData& pd, const Rat& tau) {
  const int n = pd.nvars;
  Mat A(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int al = 0; al < n; ++al) {
    const MJet& ua = pd.u[static_cast<std::size_t>(al)];
    for (const auto& [e, v] : ua.c)
      if (exp_degree(e) > 1)
        throw std::invalid_argument("leaf_sharing_point: needs linear u_1..u_n");
    for (int lam = 0; lam < n; ++lam) {
      Exp e(static_cast<std::size_t>(n), 0);
      e[static_cast<std::size_t>(lam)] = 1;
      A.at(static_cast<std::size_t>(al), static_cast<std::size_t>(lam)) = ua.coeff(e);
    }
  }
  Vec b(static_cast<std::size_t>(n));
  b[static_cast<std::size_t>(n) - 1] = tau;
  auto x = solve(A, b);
  if (!x) throw std::runtime_error("leaf_sharing_point: forms are degenerate");
  return *x;
}

// ---------------------------------------------------------------------------
// Tangent space of the map (x, t) -> [Z*(x, t)]: projective rank 2, with
// arc derivatives in ker Omega staying tangent to the curve.

struct TangentReport {
  bool valid = false;
  std::string why;
  int span_dim = 0;             // expected 3
  bool omega_membership = false;  // derivatives along ker Omega stay on the curve
  bool f_completion = false;     // the transverse derivative leaves the Z-span
};

inline TangentReport tangent_span_at(const PoincareData& pd, const CurveField& cfield,
                                     const Vec& x, const Rat& t) {
  const int n = pd.nvars, d = pd.count, l = pd.l;
  TangentReport rep;
  auto eval_row = [&](int dt, int dx) {  // dt: 0/1 t-derivative, dx: -1 or variable index
    Vec row(static_cast<std::size_t>(l));
    for (int kdeg = 0; kdeg < d; ++kdeg) {
      for (int j = 0; j < l; ++j) {
        const MJet& c = cfield.zstar[static_cast<std::size_t>(kdeg)][static_cast<std::size_t>(j)];
        Rat v = dx < 0 ? c.eval(x) : ddx(c, dx).eval(x);
        if (v.is_zero()) continue;
        if (dt == 0) {
          Rat tp = 1;
          for (int q = 0; q < kdeg; ++q) tp *= t;
          row[static_cast<std::size_t>(j)] += v * tp;
        } else if (kdeg >= 1) {
          Rat tp = kdeg;
          for (int q = 0; q < kdeg - 1; ++q) tp *= t;
          row[static_cast<std::size_t>(j)] += v * tp;
        }
      }
    }
    return row;
  };
  Vec z = eval_row(0, -1);
  Vec zt = eval_row(1, -1);
  std::vector<Vec> dxs;
  for (int lam = 0; lam < n; ++lam) dxs.push_back(eval_row(0, lam));

  std::vector<Vec> rows{z, zt};
  for (const Vec& r : dxs) rows.push_back(r);
  rep.span_dim = static_cast<int>(rank(Mat::from_rows(rows)));

  // Omega(x, t) and its kernel directions.
  Vec omega(static_cast<std::size_t>(n));
  for (int lam = 0; lam < n; ++lam) {
    Rat c = 0, tp = 1;
    for (int mu = 0; mu < n; ++mu) {
      c += tp * pd.a[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)].eval(x);
      tp *= t;
    }
    omega[static_cast<std::size_t>(lam)] = c;
  }
  bool omega_zero = true;
  for (const Rat& c : omega) omega_zero = omega_zero && c.is_zero();
  if (omega_zero) {
    rep.why = "Omega vanishes at the probe";
    return rep;
  }
  Mat orow(1, static_cast<std::size_t>(n));
  for (int lam = 0; lam < n; ++lam) orow.at(0, static_cast<std::size_t>(lam)) = omega[static_cast<std::size_t>(lam)];
  rep.omega_membership = true;
  for (const Vec& v : kernel_basis(orow)) {
    Vec dv(static_cast<std::size_t>(l));
    for (int lam = 0; lam < n; ++lam)
      for (int j = 0; j < l; ++j) dv[static_cast<std::size_t>(j)] += v[static_cast<std::size_t>(lam)] * dxs[static_cast<std::size_t>(lam)][static_cast<std::size_t>(j)];
    std::vector<Vec> mem{z, zt, dv};
    if (rank(Mat::from_rows(mem)) > 2) rep.omega_membership = false;
  }
  // A transverse direction: the derivative leaves the span of the Z values.
  {
    std::size_t lam0 = 0;
    while (lam0 < static_cast<std::size_t>(n) && omega[lam0].is_zero()) ++lam0;
    std::vector<Vec> rows2;
    for (int al = 0; al < d; ++al) {
      Vec za;
      for (const MJet& j : pd.Z[static_cast<std::size_t>(al)]) za.push_back(j.eval(x));
      rows2.push_back(std::move(za));
    }
    std::size_t base = rank(Mat::from_rows(rows2));
    rows2.push_back(dxs[lam0]);
    rep.f_completion = rank(Mat::from_rows(rows2)) == base + 1 &&
                       base == static_cast<std::size_t>(d - n);
  }
  rep.valid = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Polynomial-exactness gate: evaluation probes away from the origin are
// exact only when the stored jets satisfy the defining identities as
// polynomials, not merely modulo the truncation. Checked by redoing the
// products at an extended order where nothing can truncate away.

inline bool polynomial_exact(const PoincareData& pd) {
  const int n = pd.nvars, d = pd.count, R = pd.order, l = pd.l;
  int du = 0;
  for (const MJet& f : pd.u)
    for (const auto& [e, v] : f.c) du = std::max(du, exp_degree(e));
  // The defining relation identity with the stored Z polynomials.
  {
    int big = R + du;
    for (int i = 0; i < l; ++i)
      for (int lam = 0; lam < n; ++lam) {
        MJet acc(n, big);
        for (int al = 0; al < d; ++al)
          acc = acc + pd.Z[static_cast<std::size_t>(al)][static_cast<std::size_t>(i)].extended(big) *
                          ddx(pd.u[static_cast<std::size_t>(al)], lam).extended(big);
        if (!acc.is_zero()) return false;
      }
  }
  // The coframe identity with the stored k, theta, a polynomials.
  {
    int big = (n + 1) * R + du;
    for (int al = 0; al < d; ++al) {
      MJet kb = pd.k[static_cast<std::size_t>(al)].extended(big);
      MJet tb = pd.theta[static_cast<std::size_t>(al)].extended(big);
      std::vector<MJet> pw{MJet::constant(n, big, 1)};
      for (int mu = 1; mu < n; ++mu) pw.push_back(pw.back() * tb);
      for (int lam = 0; lam < n; ++lam) {
        MJet rhs(n, big);
        for (int mu = 0; mu < n; ++mu)
          rhs = rhs + pw[static_cast<std::size_t>(mu)] *
                          pd.a[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)].extended(big);
        if (!(ddx(pd.u[static_cast<std::size_t>(al)], lam).extended(big) - kb * rhs).is_zero())
          return false;
      }
    }
  }
  // The weighted power sums with the stored polynomials.
  {
    int big = (n + 1) * R;
    for (int mu = 0; mu < n; ++mu)
      for (int i = 0; i < l; ++i) {
        MJet acc(n, big);
        for (int al = 0; al < d; ++al) {
          MJet f = pd.k[static_cast<std::size_t>(al)].extended(big);
          for (int q = 0; q < mu; ++q)
            f = f * pd.theta[static_cast<std::size_t>(al)].extended(big);
          acc = acc + f * pd.Z[static_cast<std::size_t>(al)][static_cast<std::size_t>(i)].extended(big);
        }
        if (!acc.is_zero()) return false;
      }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Jet path: the same statements verified at the generic point, sound modulo
// the truncation for every web (pushforwards included).

// Arc through the origin sharing the leaves of the first n-1 foliations:
// u_1 = ... = u_{n-1} = 0, u_n = s, built through the normalizing map.
inline std::vector<UJet> leaf_arc(const PoincareData& pd) {
  const int n = pd.nvars, R = pd.order;
  std::vector<UJet> coords(static_cast<std::size_t>(n), UJet(R));
  coords[static_cast<std::size_t>(n) - 1] = UJet::var(R);
  std::vector<UJet> arc;
  for (int lam = 0; lam < n; ++lam)
    arc.push_back(eval_arc(pd.norm.comp[static_cast<std::size_t>(lam)], coords));
  for (int al = 0; al < n - 1; ++al)
    if (!eval_arc(pd.u[static_cast<std::size_t>(al)], arc).is_zero())
      throw std::runtime_error("leaf_arc: leaf equations not satisfied");
  return arc;
}

struct ArcSpanReport {
  int dim_each = 0;       // dim span{Z_alpha(x(s))} at the generic arc point
  int dim_sum = 0;        // dim of the joint span with the origin values
  int intersection = 0;   // derived intersection dimension
  bool certified = false;
};

// Span intersection of the origin configuration with the configuration at
// the generic point of an arc s -> x(s).
inline ArcSpanReport span_intersection_arc(const PoincareData& pd, const std::vector<UJet>& arc) {
  const int d = pd.count;
  std::vector<std::vector<UJet>> Zs, stacked;
  const int R = arc[0].order;
  for (int al = 0; al < d; ++al) {
    std::vector<UJet> row;
    for (const MJet& j : pd.Z[static_cast<std::size_t>(al)]) row.push_back(eval_arc(j, arc));
    Zs.push_back(row);
    stacked.push_back(std::move(row));
  }
  for (int al = 0; al < d; ++al) {
    std::vector<UJet> row;
    for (const MJet& j : pd.Z[static_cast<std::size_t>(al)])
      row.push_back(UJet::constant(R, j.constant_term()));
    stacked.push_back(std::move(row));
  }
  GermRank gs = ujet_germ_rank(Zs);
  GermRank gsum = ujet_germ_rank(stacked);
  std::vector<Vec> rows0;
  for (int al = 0; al < d; ++al)
    rows0.push_back(detail::jet_vector_at0(pd.Z[static_cast<std::size_t>(al)]));
  int dim0 = static_cast<int>(rank(Mat::from_rows(rows0)));
  ArcSpanReport rep;
  rep.dim_each = gs.rank;
  rep.dim_sum = gsum.rank;
  rep.intersection = dim0 + gs.rank - gsum.rank;
  rep.certified = gs.upper_certified && gsum.upper_certified;
  return rep;
}

struct ArcIntersectionReport {
  bool shared_points_ok = false;   // the n-1 leaf-shared points stay fixed on the arc
  int w_dim = 0;                   // span intersection along the arc
  bool w_certified = false;
  bool divisor_ok = false;         // W-restriction divisible by the shared parameters
  bool multiplicity_one = false;   // each shared point is a simple intersection
  bool no_extra_finite = false;    // no further finite common point
  bool no_extra_infinity = false;  // the infinity point of C(0) stays off the arc span
  int count = 0;                   // n-1 when everything holds
  bool pass = false;
};

// Intersection count along the leaf-sharing arc, verified at the
// generic arc point in exact jet arithmetic.
inline ArcIntersectionReport curve_intersections_arc(const PoincareData& pd,
                                                     const CurveField& cfield) {
  const int n = pd.nvars, d = pd.count, l = pd.l;
  ArcIntersectionReport rep;
  std::vector<UJet> arc = leaf_arc(pd);
  const int R = arc[0].order;

  std::vector<std::vector<UJet>> Zs;
  for (int al = 0; al < d; ++al) {
    std::vector<UJet> row;
    for (const MJet& j : pd.Z[static_cast<std::size_t>(al)]) row.push_back(eval_arc(j, arc));
    Zs.push_back(std::move(row));
  }
  rep.shared_points_ok = true;
  for (int al = 0; al < n - 1; ++al)
    for (int i = 0; i < l; ++i) {
      UJet expect = UJet::constant(
          R, pd.Z[static_cast<std::size_t>(al)][static_cast<std::size_t>(i)].constant_term());
      if (!(Zs[static_cast<std::size_t>(al)][static_cast<std::size_t>(i)] == expect))
        rep.shared_points_ok = false;
    }

  ArcSpanReport span = span_intersection_arc(pd, arc);
  rep.w_dim = span.intersection;
  rep.w_certified = span.certified;

  // Independent rows spanning the arc configuration.
  GermRank gr = ujet_germ_rank(Zs);
  if (gr.rank != d - n) return rep;
  std::vector<std::vector<UJet>> B;
  for (std::size_t r : gr.pivot_rows) B.push_back(Zs[r]);

  // Bordered minors: conditions for Z*(0, t) to meet the arc span.
  std::vector<std::vector<UJet>> gvals;  // polynomials in t with UJet coefficients
  for_each_subset(static_cast<std::size_t>(l), static_cast<std::size_t>(d - n) + 1,
                  [&](const std::vector<std::size_t>& cols) {
                    std::vector<UJet> gpoly;
                    for (int kdeg = 0; kdeg <= d - n - 1; ++kdeg) {
                      // coefficient of t^kdeg: expansion of the bordered
                      // determinant along the symbolic last row
                      UJet acc(R);
                      for (std::size_t cpos = 0; cpos < cols.size(); ++cpos) {
                        Rat zc = cfield.zstar0[static_cast<std::size_t>(kdeg)][cols[cpos]];
                        if (zc.is_zero()) continue;
                        std::vector<std::vector<UJet>> minor;
                        for (std::size_t r = 0; r < B.size(); ++r) {
                          std::vector<UJet> mrow;
                          for (std::size_t c2 = 0; c2 < cols.size(); ++c2)
                            if (c2 != cpos) mrow.push_back(B[r][cols[c2]]);
                          minor.push_back(std::move(mrow));
                        }
                        UJet cof = ujet_det(minor);
                        if ((B.size() + cpos) % 2 == 1) cof = -cof;
                        acc = acc + zc * cof;
                      }
                      gpoly.push_back(std::move(acc));
                    }
                    gvals.push_back(std::move(gpoly));
                  });

  // Each condition must vanish at the shared parameters, to first order.
  Vec shared;
  for (int al = 0; al < n - 1; ++al)
    shared.push_back(pd.theta[static_cast<std::size_t>(al)].constant_term());
  rep.divisor_ok = true;
  std::vector<std::vector<UJet>> quotients;
  for (const auto& g : gvals) {
    std::vector<UJet> cur = g;
    for (const Rat& r : shared) {
      // synthetic division by (t - r); the remainder must be zero mod s^R
      std::vector<UJet> q(cur.size() > 0 ? cur.size() - 1 : 0, UJet(R));
      UJet carry(R);
      for (std::size_t kdeg = cur.size(); kdeg-- > 0;) {
        UJet val = cur[kdeg] + carry;
        if (kdeg == 0) {
          if (!val.is_zero()) rep.divisor_ok = false;
        } else {
          q[kdeg - 1] = val;
          carry = r * val;
        }
      }
      cur = std::move(q);
    }
    quotients.push_back(std::move(cur));
  }

  // Simplicity of the shared points and absence of further common points.
  rep.multiplicity_one = true;
  for (const Rat& r : shared) {
    bool nonzero = false;
    for (const auto& q : quotients) {
      UJet val(R);
      Rat tp = 1;
      for (std::size_t kdeg = 0; kdeg < q.size(); ++kdeg) {
        val = val + tp * q[kdeg];
        tp *= r;
      }
      if (!val.is_zero()) nonzero = true;
    }
    if (!nonzero) rep.multiplicity_one = false;
  }
  rep.no_extra_finite = false;
  for (std::size_t i = 0; i < quotients.size() && !rep.no_extra_finite; ++i) {
    if (quotients[i].size() == 1 && !quotients[i][0].is_zero()) rep.no_extra_finite = true;
    for (std::size_t j = i + 1; j < quotients.size() && !rep.no_extra_finite; ++j) {
      // Sylvester resultant at the nominal degrees; nonzero certifies
      // coprimality at the germ level.
      const auto &qa = quotients[i], &qb = quotients[j];
      int da = static_cast<int>(qa.size()) - 1, db = static_cast<int>(qb.size()) - 1;
      if (da < 0 || db < 0) continue;
      if (da == 0 && db == 0) {
        if (!qa[0].is_zero() || !qb[0].is_zero()) rep.no_extra_finite = true;
        continue;
      }
      std::size_t dim = static_cast<std::size_t>(da + db);
      if (dim == 0) continue;
      std::vector<std::vector<UJet>> syl(dim, std::vector<UJet>(dim, UJet(R)));
      for (int r = 0; r < db; ++r)
        for (int c = 0; c <= da; ++c) syl[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + c)] =
            qa[static_cast<std::size_t>(da - c)];
      for (int r = 0; r < da; ++r)
        for (int c = 0; c <= db; ++c)
          syl[static_cast<std::size_t>(db + r)][static_cast<std::size_t>(r + c)] =
              qb[static_cast<std::size_t>(db - c)];
      if (!ujet_det(syl).is_zero()) rep.no_extra_finite = true;
    }
  }
  // The point at infinity of C(0) must stay off the arc span.
  rep.no_extra_infinity = false;
  {
    const Vec& lead = cfield.zstar0[static_cast<std::size_t>(d - n - 1)];
    bool some_nonzero = false;
    for_each_subset(static_cast<std::size_t>(l), static_cast<std::size_t>(d - n) + 1,
                    [&](const std::vector<std::size_t>& cols) {
                      if (some_nonzero) return;
                      std::vector<std::vector<UJet>> sq;
                      for (std::size_t r = 0; r < B.size(); ++r) {
                        std::vector<UJet> mrow;
                        for (std::size_t c2 : cols) mrow.push_back(B[r][c2]);
                        sq.push_back(std::move(mrow));
                      }
                      std::vector<UJet> last;
                      for (std::size_t c2 : cols) last.push_back(UJet::constant(R, lead[c2]));
                      sq.push_back(std::move(last));
                      if (!ujet_det(sq).is_zero()) some_nonzero = true;
                    });
    rep.no_extra_infinity = some_nonzero;
  }
  rep.pass = rep.shared_points_ok && rep.w_dim == n - 1 && rep.w_certified && rep.divisor_ok &&
             rep.multiplicity_one && rep.no_extra_finite && rep.no_extra_infinity;
  rep.count = rep.pass ? n - 1 : -1;
  return rep;
}

// Generic-point tangent rank of (x, t) -> [Z*(x, t)], certified through a
// unit 3x3 minor and the vanishing of all its bordered 4x4 minors.
struct GenericTangentReport {
  bool valid = false;
  std::string why;
  int span_dim = 0;
  bool upper_certified = false;
  bool omega_membership = false;
  bool f_completion = false;
};

inline GenericTangentReport tangent_span_generic(const PoincareData& pd,
                                                 const CurveField& cfield) {
  const int n = pd.nvars, d = pd.count, l = pd.l;
  GenericTangentReport rep;
  const int W = std::max(0, pd.order - 1);

  // Rows of the symbolic tangent matrix, entries = polynomials in t.
  std::vector<std::vector<PolyM>> rows;
  auto make_row = [&](int dt, int dx) {
    std::vector<PolyM> row(static_cast<std::size_t>(l));
    for (int j = 0; j < l; ++j) {
      PolyM p;
      for (int kdeg = 0; kdeg < d; ++kdeg) {
        const MJet& c = cfield.zstar[static_cast<std::size_t>(kdeg)][static_cast<std::size_t>(j)];
        MJet cc = dx < 0 ? c.truncated(W) : ddx(c, dx).truncated(W);
        if (dt == 1) {
          if (kdeg == 0) continue;
          cc = Rat(kdeg) * cc;
          while (static_cast<int>(p.size()) < kdeg - 1) p.push_back(MJet(n, W));
          p.push_back(std::move(cc));
        } else {
          while (static_cast<int>(p.size()) < kdeg) p.push_back(MJet(n, W));
          p.push_back(std::move(cc));
        }
      }
      row[static_cast<std::size_t>(j)] = std::move(p);
    }
    return row;
  };
  rows.push_back(make_row(0, -1));  // Z*
  rows.push_back(make_row(1, -1));  // d/dt Z*
  for (int lam = 0; lam < n; ++lam) rows.push_back(make_row(0, lam));

  // Unit 3x3 minor among {Z*, dt, dx0} and lexicographic column triples.
  std::vector<std::size_t> base_cols;
  for_each_subset(static_cast<std::size_t>(l), 3, [&](const std::vector<std::size_t>& cols) {
    if (!base_cols.empty()) return;
    std::vector<std::vector<PolyM>> sub(3, std::vector<PolyM>(3));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) sub[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          rows[static_cast<std::size_t>(r)][cols[static_cast<std::size_t>(c)]];
    if (!polym_zero(polym_det(sub))) base_cols = cols;
  });
  if (base_cols.empty()) {
    rep.why = "no unit 3x3 tangent minor found";
    return rep;
  }
  rep.span_dim = 3;
  rep.upper_certified = true;
  for (std::size_t r = 3; r < rows.size(); ++r)
    for (std::size_t c = 0; c < static_cast<std::size_t>(l); ++c) {
      if (std::find(base_cols.begin(), base_cols.end(), c) != base_cols.end()) continue;
      std::vector<std::vector<PolyM>> sub(4, std::vector<PolyM>(4));
      for (int rr = 0; rr < 3; ++rr) {
        for (int cc = 0; cc < 3; ++cc)
          sub[static_cast<std::size_t>(rr)][static_cast<std::size_t>(cc)] =
              rows[static_cast<std::size_t>(rr)][base_cols[static_cast<std::size_t>(cc)]];
        sub[static_cast<std::size_t>(rr)][3] = rows[static_cast<std::size_t>(rr)][c];
      }
      for (int cc = 0; cc < 3; ++cc)
        sub[3][static_cast<std::size_t>(cc)] = rows[r][base_cols[static_cast<std::size_t>(cc)]];
      sub[3][3] = rows[r][c];
      if (!polym_zero(polym_det(sub))) {
        rep.span_dim = 4;
        rep.upper_certified = false;
      }
    }

  // ker Omega directions: w_lam = c_lam e_0 - c_0 e_lam, and the derivative
  // along w_lam must stay in span{Z*, dt Z*}.
  std::vector<PolyM> cpol(static_cast<std::size_t>(n));
  for (int lam = 0; lam < n; ++lam) {
    PolyM p;
    for (int mu = 0; mu < n; ++mu)
      p.push_back(pd.a[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)].truncated(W));
    cpol[static_cast<std::size_t>(lam)] = std::move(p);
  }
  // unit 2x2 among {Z*, dt}
  std::vector<std::size_t> base2;
  for_each_subset(static_cast<std::size_t>(l), 2, [&](const std::vector<std::size_t>& cols) {
    if (!base2.empty()) return;
    std::vector<std::vector<PolyM>> sub(2, std::vector<PolyM>(2));
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) sub[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          rows[static_cast<std::size_t>(r)][cols[static_cast<std::size_t>(c)]];
    if (!polym_zero(polym_det(sub))) base2 = cols;
  });
  if (base2.empty()) {
    rep.why = "no unit 2x2 curve minor found";
    return rep;
  }
  rep.omega_membership = true;
  for (int lam = 1; lam < n; ++lam) {
    std::vector<PolyM> dirrow(static_cast<std::size_t>(l));
    for (int j = 0; j < l; ++j)
      dirrow[static_cast<std::size_t>(j)] =
          polym_sub(polym_mul(cpol[static_cast<std::size_t>(lam)],
                              rows[2][static_cast<std::size_t>(j)]),
                    polym_mul(cpol[0], rows[2 + static_cast<std::size_t>(lam)]
                                           [static_cast<std::size_t>(j)]));
    for (std::size_t c = 0; c < static_cast<std::size_t>(l); ++c) {
      if (std::find(base2.begin(), base2.end(), c) != base2.end()) continue;
      std::vector<std::vector<PolyM>> sub(3, std::vector<PolyM>(3));
      for (int rr = 0; rr < 2; ++rr) {
        for (int cc = 0; cc < 2; ++cc)
          sub[static_cast<std::size_t>(rr)][static_cast<std::size_t>(cc)] =
              rows[static_cast<std::size_t>(rr)][base2[static_cast<std::size_t>(cc)]];
        sub[static_cast<std::size_t>(rr)][2] = rows[static_cast<std::size_t>(rr)][c];
      }
      for (int cc = 0; cc < 2; ++cc) sub[2][static_cast<std::size_t>(cc)] = dirrow[base2[static_cast<std::size_t>(cc)]];
      sub[2][2] = dirrow[c];
      if (!polym_zero(polym_det(sub))) rep.omega_membership = false;
    }
  }

  // F-vector completion: the x0-derivative row leaves the span of the Z
  // values (their classes span the quotient by the position properties).
  {
    std::vector<Vec> rows0;
    for (int al = 0; al < d; ++al)
      rows0.push_back(detail::jet_vector_at0(pd.Z[static_cast<std::size_t>(al)]));
    RrefResult rr = rref(Mat::from_rows(rows0));
    if (rr.pivots.size() != static_cast<std::size_t>(d - n)) {
      rep.why = "Z span at origin is not d-n dimensional";
      return rep;
    }
    // Greedy independent original rows.
    std::vector<std::size_t> chosen = detail::greedy_row_basis(Mat::from_rows(rows0));
    std::vector<std::vector<PolyM>> zrows;
    for (std::size_t r : chosen) {
      std::vector<PolyM> prow(static_cast<std::size_t>(l));
      for (int j = 0; j < l; ++j)
        prow[static_cast<std::size_t>(j)] =
            PolyM{pd.Z[r][static_cast<std::size_t>(j)].truncated(W)};
      zrows.push_back(std::move(prow));
    }
    zrows.push_back(rows[2]);  // the x0-derivative of Z*
    bool some_nonzero = false;
    for_each_subset(static_cast<std::size_t>(l), zrows.size(), [&](const std::vector<std::size_t>& cols) {
      if (some_nonzero) return;
      std::vector<std::vector<PolyM>> sub(zrows.size(), std::vector<PolyM>(zrows.size()));
      for (std::size_t r = 0; r < zrows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) sub[r][c] = zrows[r][cols[c]];
      if (!polym_zero(polym_det(sub))) some_nonzero = true;
    });
    rep.f_completion = some_nonzero;
  }
  rep.valid = true;
  return rep;
}

}  // namespace webgeom
