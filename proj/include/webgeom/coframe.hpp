#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "webgeom/jetmap.hpp"
#include "webgeom/mjet.hpp"
#include "webgeom/projective.hpp"
#include "webgeom/web.hpp"

namespace webgeom {

// n x n matrix of jets with invertible constant part; Gaussian elimination
// with divisions by unit jets only.
inline std::vector<std::vector<MJet>> jet_matrix_inverse(std::vector<std::vector<MJet>> m) {
  std::size_t n = m.size();
  int nv = m[0][0].nvars, ord = m[0][0].order;
  std::vector<std::vector<MJet>> inv(n, std::vector<MJet>(n, MJet(nv, ord)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = MJet::constant(nv, ord, 1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c].constant_term().is_zero()) ++p;
    if (p == n) throw std::invalid_argument("jet_matrix_inverse: singular constant part");
    if (p != c) {
      std::swap(m[p], m[c]);
      std::swap(inv[p], inv[c]);
    }
    MJet piv = mjet_inverse(m[c][c]);
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] = piv * m[c][j];
      inv[c][j] = piv * inv[c][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c].is_zero()) continue;
      MJet f = m[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] = m[i][j] - f * m[c][j];
        inv[i][j] = inv[i][j] - f * inv[c][j];
      }
    }
  }
  return inv;
}

// Coframe adapted to a web: 1-forms omega_mu = sum_lambda a[mu][lambda] dx_lambda
// with du_alpha = k_alpha sum_mu theta_alpha^mu omega_mu. The construction
// runs in the normalized coordinates where u_1..u_n are the coordinate
// functions, but all public fields are pulled back to the web's own
// coordinates.
struct AdaptedCoframe {
  int nvars = 0;
  int order = 0;  // J - 1
  std::vector<std::vector<MJet>> a;  // a[mu][lambda]
  std::vector<MJet> k;
  std::vector<MJet> theta;
  JetMap norm;            // normalizing coordinate change, (u_1..u_n)^{-1}
  Rat mobius_gamma;       // the reparametrization t = gamma - 1/s used to keep all theta finite
};

namespace detail {
// Coefficient matrix (by t-degree) of k_j * prod_{i != j} (t - theta_i).
inline std::vector<std::vector<MJet>> curve_basis_from_parameters(const std::vector<MJet>& kB,
                                                                  const std::vector<MJet>& thetaB) {
  std::size_t n = kB.size();
  int nv = kB[0].nvars, ord = kB[0].order;
  std::vector<std::vector<MJet>> A(n, std::vector<MJet>(n, MJet(nv, ord)));  // A[mu][lambda]
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<MJet> poly{kB[j]};  // ascending t-degree
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      std::vector<MJet> next(poly.size() + 1, MJet(nv, ord));
      for (std::size_t kdeg = 0; kdeg < poly.size(); ++kdeg) {
        next[kdeg + 1] = next[kdeg + 1] + poly[kdeg];
        next[kdeg] = next[kdeg] - thetaB[i] * poly[kdeg];
      }
      poly = std::move(next);
    }
    for (std::size_t mu = 0; mu < n; ++mu) A[mu][j] = poly[mu];
  }
  return A;
}
}  // namespace detail

// Adapted-coframe construction. Steps: normalize u_1..u_n to coordinates, run the
// m+3-point curve construction on the gradient points (base points plus
// grad u_{n+1}, grad u_{n+2}) with all quantities carried as jets, move the
// parametrization by a Mobius map so every web parameter is finite, then
// read k_alpha, theta_alpha off the coframe decomposition of each du_alpha.
inline AdaptedCoframe adapted_coframe(const WebGerm& w) {
  const int n = w.nvars, d = w.count, J = w.order;
  if (n < 3 || d < 2 * n + 1)
    throw std::invalid_argument("adapted_coframe: requires n >= 3 and d >= 2n+1");
  const int K = J - 1;

  std::vector<MJet> first(w.u.begin(), w.u.begin() + n);
  JetMap coord(n, J, std::move(first));
  JetMap norm = invert_map(coord);
  std::vector<MJet> v;
  v.reserve(static_cast<std::size_t>(d));
  for (const MJet& ua : w.u) v.push_back(compose(ua, norm));
  for (int i = 0; i < n; ++i)
    if (!(v[static_cast<std::size_t>(i)] == MJet::variable(n, J, i)))
      throw std::runtime_error("adapted_coframe: normalization failed");

  std::vector<std::vector<MJet>> grad(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a)
    for (int lam = 0; lam < n; ++lam)
      grad[static_cast<std::size_t>(a)].push_back(ddx(v[static_cast<std::size_t>(a)], lam));

  // Castelnuovo condition on the gradient points at the origin.
  {
    std::vector<PPoint> pts;
    for (int a = 0; a < d; ++a) {
      Vec g(static_cast<std::size_t>(n));
      for (int lam = 0; lam < n; ++lam)
        g[static_cast<std::size_t>(lam)] =
            grad[static_cast<std::size_t>(a)][static_cast<std::size_t>(lam)].constant_term();
      pts.emplace_back(std::move(g));
    }
    QuadricSpace qs = quadric_conditions(pts, n - 1);
    if (qs.codim != 2 * static_cast<std::size_t>(n - 1) + 1)
      throw std::invalid_argument("adapted_coframe: web not of maximal rank type");
  }

  // The curve through the base points (gradients of the coordinates) and
  // the two extra gradient points, with x' at t = infinity and x'' at 0.
  const auto& xp = grad[static_cast<std::size_t>(n)];
  const auto& xpp = grad[static_cast<std::size_t>(n) + 1];
  for (int j = 0; j < n; ++j) {
    if (xp[static_cast<std::size_t>(j)].constant_term().is_zero() ||
        xpp[static_cast<std::size_t>(j)].constant_term().is_zero())
      throw std::invalid_argument("adapted_coframe: web not of maximal rank type");
  }
  std::vector<MJet> kB, thetaB;
  MJet xp0inv = mjet_inverse(xp[0]);
  for (int j = 0; j < n; ++j) {
    kB.push_back(xp[static_cast<std::size_t>(j)]);
    thetaB.push_back(xp[static_cast<std::size_t>(j)] * xpp[0] *
                     mjet_inverse(MJet(xp[0] * xpp[static_cast<std::size_t>(j)])));
  }
  std::vector<std::vector<MJet>> A0 = detail::curve_basis_from_parameters(kB, thetaB);

  // Finite parameter values at 0 of every gradient point, to pick gamma.
  Mat C0(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int lam = 0; lam < n; ++lam)
    for (int mu = 0; mu < n; ++mu)
      C0.at(static_cast<std::size_t>(lam), static_cast<std::size_t>(mu)) =
          A0[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)].constant_term();
  Mat C0inv = inverse(C0);
  std::vector<Rat> finite_params;
  for (int a = 0; a < d; ++a) {
    Vec g(static_cast<std::size_t>(n));
    for (int lam = 0; lam < n; ++lam)
      g[static_cast<std::size_t>(lam)] =
          grad[static_cast<std::size_t>(a)][static_cast<std::size_t>(lam)].constant_term();
    Vec wcoord = mul(C0inv, g);
    if (wcoord[0].is_zero()) {
      if (a != n) throw std::invalid_argument("adapted_coframe: web not of maximal rank type");
      continue;  // x' sits at t = infinity in this gauge
    }
    finite_params.push_back(wcoord[1] / wcoord[0]);
  }
  Rat gamma = 0;
  while (std::find(finite_params.begin(), finite_params.end(), gamma) != finite_params.end())
    gamma += 1;

  // Reparametrize by t = gamma - 1/s:
  // xhat(s)_lambda = sum_nu A0[nu][lambda] (gamma s - 1)^nu s^{n-1-nu}.
  std::vector<std::vector<MJet>> ahat(static_cast<std::size_t>(n),
                                      std::vector<MJet>(static_cast<std::size_t>(n), MJet(n, K)));
  {
    // (gamma s - 1)^nu as rational coefficient rows.
    std::vector<Vec> pows{Vec{Rat(1)}};
    for (int nu = 1; nu < n; ++nu) {
      const Vec& prev = pows.back();
      Vec cur(prev.size() + 1);
      for (std::size_t i = 0; i < prev.size(); ++i) {
        cur[i] -= prev[i];
        cur[i + 1] += gamma * prev[i];
      }
      pows.push_back(std::move(cur));
    }
    for (int nu = 0; nu < n; ++nu)
      for (int lam = 0; lam < n; ++lam) {
        const Vec& pw = pows[static_cast<std::size_t>(nu)];
        for (std::size_t i = 0; i < pw.size(); ++i) {
          std::size_t sdeg = i + static_cast<std::size_t>(n - 1 - nu);
          ahat[sdeg][static_cast<std::size_t>(lam)] =
              ahat[sdeg][static_cast<std::size_t>(lam)] +
              pw[i] * A0[static_cast<std::size_t>(nu)][static_cast<std::size_t>(lam)];
        }
      }
  }

  // Decompose each gradient in the new coframe and read off k, theta.
  std::vector<std::vector<MJet>> M(static_cast<std::size_t>(n),
                                   std::vector<MJet>(static_cast<std::size_t>(n)));
  for (int lam = 0; lam < n; ++lam)
    for (int mu = 0; mu < n; ++mu)
      M[static_cast<std::size_t>(lam)][static_cast<std::size_t>(mu)] =
          ahat[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)];
  std::vector<std::vector<MJet>> Minv = jet_matrix_inverse(M);

  AdaptedCoframe cf;
  cf.nvars = n;
  cf.order = K;
  cf.norm = norm;
  cf.mobius_gamma = gamma;
  // Pull the coframe back to the web's own coordinates:
  // a[mu][lambda](x) = sum_kappa ahat[mu][kappa](u(x)) d(u_kappa)/dx_lambda.
  cf.a.assign(static_cast<std::size_t>(n),
              std::vector<MJet>(static_cast<std::size_t>(n), MJet(n, K)));
  for (int mu = 0; mu < n; ++mu) {
    std::vector<MJet> pulled(static_cast<std::size_t>(n));
    for (int kap = 0; kap < n; ++kap)
      pulled[static_cast<std::size_t>(kap)] =
          compose(ahat[static_cast<std::size_t>(mu)][static_cast<std::size_t>(kap)], coord);
    for (int lam = 0; lam < n; ++lam)
      for (int kap = 0; kap < n; ++kap)
        cf.a[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)] =
            cf.a[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)] +
            pulled[static_cast<std::size_t>(kap)] *
                ddx(w.u[static_cast<std::size_t>(kap)], lam);
  }
  for (int a = 0; a < d; ++a) {
    std::vector<MJet> comp(static_cast<std::size_t>(n), MJet(n, K));
    for (int mu = 0; mu < n; ++mu)
      for (int lam = 0; lam < n; ++lam)
        comp[static_cast<std::size_t>(mu)] =
            comp[static_cast<std::size_t>(mu)] +
            Minv[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)] *
                grad[static_cast<std::size_t>(a)][static_cast<std::size_t>(lam)];
    if (comp[0].constant_term().is_zero())
      throw std::invalid_argument("adapted_coframe: theta collision at the origin");
    MJet kalpha = compose(comp[0], coord);
    cf.theta.push_back(compose(MJet(comp[1] * mjet_inverse(comp[0])), coord));
    cf.k.push_back(std::move(kalpha));
  }
  for (int a1 = 0; a1 < d; ++a1)
    for (int a2 = a1 + 1; a2 < d; ++a2)
      if (cf.theta[static_cast<std::size_t>(a1)].constant_term() ==
          cf.theta[static_cast<std::size_t>(a2)].constant_term())
        throw std::invalid_argument("adapted_coframe: theta collision at the origin");
  return cf;
}

// Residual of du_alpha = k_alpha sum_mu theta_alpha^mu omega_mu, per alpha
// and coordinate, at the coframe's truncation.
struct CoframeResidual {
  bool exact = false;
  std::vector<std::vector<MJet>> res;  // [alpha][lambda]
};

inline CoframeResidual coframe_residual(const WebGerm& w, const AdaptedCoframe& cf) {
  const int n = cf.nvars, d = w.count;
  CoframeResidual out;
  out.res.resize(static_cast<std::size_t>(d));
  out.exact = true;
  for (int a = 0; a < d; ++a) {
    // powers of theta_alpha
    std::vector<MJet> pw{MJet::constant(n, cf.order, 1)};
    for (int mu = 1; mu < n; ++mu) pw.push_back(pw.back() * cf.theta[static_cast<std::size_t>(a)]);
    for (int lam = 0; lam < n; ++lam) {
      MJet rhs(n, cf.order);
      for (int mu = 0; mu < n; ++mu)
        rhs = rhs + pw[static_cast<std::size_t>(mu)] *
                        cf.a[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)];
      MJet r = ddx(w.u[static_cast<std::size_t>(a)], lam).truncated(cf.order) -
               MJet(cf.k[static_cast<std::size_t>(a)] * rhs);
      if (!r.is_zero()) out.exact = false;
      out.res[static_cast<std::size_t>(a)].push_back(std::move(r));
    }
  }
  return out;
}

namespace detail {
// Greedy maximal independent row set, by incremental reduction.
inline std::vector<std::size_t> greedy_row_basis(const Mat& A) {
  std::vector<std::size_t> chosen;
  std::vector<Vec> reduced;             // echelonized copies
  std::vector<std::size_t> pivot_cols;  // pivot of each reduced row
  for (std::size_t r = 0; r < A.rows; ++r) {
    Vec row = A.row(r);
    for (std::size_t i = 0; i < reduced.size(); ++i) {
      const Rat& c = row[pivot_cols[i]];
      if (c.is_zero()) continue;
      Rat f = c;
      for (std::size_t j = 0; j < row.size(); ++j) row[j] -= f * reduced[i][j];
    }
    std::size_t p = 0;
    while (p < row.size() && row[p].is_zero()) ++p;
    if (p == row.size()) continue;
    Rat lead = row[p];
    for (Rat& x : row) x /= lead;
    chosen.push_back(r);
    reduced.push_back(std::move(row));
    pivot_cols.push_back(p);
  }
  return chosen;
}
}  // namespace detail

// Solves the jet-linear system sum_j A[i][j] x_j = b[i] (MJet entries and
// unknowns) by flattening to exact scalar linear algebra, order by order in
// the jet grading. Overdetermined systems are solved on a greedy maximal
// independent subset of the flattened equations; the caller judges the
// solution by its residual.
inline std::vector<MJet> solve_jet_system(const std::vector<std::vector<MJet>>& A,
                                          const std::vector<MJet>& b) {
  const std::size_t E = A.size();
  const std::size_t U = A[0].size();
  const int n = b[0].nvars, W = b[0].order;
  std::vector<Exp> mons = enumerate_exponents(n, W);
  std::map<Exp, std::size_t> mon_index;
  for (std::size_t i = 0; i < mons.size(); ++i) mon_index[mons[i]] = i;
  const std::size_t nm = mons.size();

  Mat flat(E * nm, U * nm);
  Vec rhs(E * nm);
  Exp sum(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < E; ++i) {
    for (const auto& [e, val] : b[i].c) rhs[i * nm + mon_index.at(e)] = val;
    for (std::size_t j = 0; j < U; ++j)
      for (const auto& [ea, va] : A[i][j].c) {
        int da = exp_degree(ea);
        for (std::size_t mk = 0; mk < nm; ++mk) {
          if (exp_degree(mons[mk]) + da > W) continue;
          for (std::size_t t = 0; t < sum.size(); ++t) sum[t] = ea[t] + mons[mk][t];
          flat.at(i * nm + mon_index.at(sum), j * nm + mk) += va;
        }
      }
  }

  auto sol = solve(flat, rhs);
  if (!sol) {
    std::vector<std::size_t> rows = detail::greedy_row_basis(flat);
    Mat sub(rows.size(), flat.cols);
    Vec srhs(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < flat.cols; ++j) sub.at(i, j) = flat.at(rows[i], j);
      srhs[i] = rhs[rows[i]];
    }
    sol = solve(sub, srhs);
    if (!sol) throw std::runtime_error("solve_jet_system: canonical subsystem inconsistent");
  }
  std::vector<MJet> x;
  x.reserve(U);
  for (std::size_t j = 0; j < U; ++j) {
    MJet xi(n, W);
    for (std::size_t mk = 0; mk < nm; ++mk) xi.add_term(mons[mk], (*sol)[j * nm + mk]);
    x.push_back(std::move(xi));
  }
  return x;
}

// Order-two necessary conditions in the adapted
// coframe, solved exactly and returned with their residuals.
struct SecondOrderData {
  std::vector<std::vector<MJet>> m;      // [mu][lambda], lambda = 0..n-1
  std::vector<std::vector<MJet>> nn;     // [mu][lambda], lambda = 0..n
  std::vector<std::vector<MJet>> res_scale;  // [mu][alpha]
  std::vector<std::vector<MJet>> res_param;  // [mu][alpha]
  bool scale_exact = false;
  bool param_exact = false;
  int order = 0;
};

inline SecondOrderData second_order_conditions(const WebGerm& w, const AdaptedCoframe& cf) {
  const int n = cf.nvars, d = w.count;
  if (n < 3) throw std::invalid_argument("second_order_conditions: need n >= 3");
  const int W = cf.order - 1;  // one more order lost to differentiation

  // Coframe decomposition operator at order W.
  std::vector<std::vector<MJet>> M(static_cast<std::size_t>(n),
                                   std::vector<MJet>(static_cast<std::size_t>(n)));
  for (int lam = 0; lam < n; ++lam)
    for (int mu = 0; mu < n; ++mu)
      M[static_cast<std::size_t>(lam)][static_cast<std::size_t>(mu)] =
          cf.a[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)].truncated(W);
  std::vector<std::vector<MJet>> Minv = jet_matrix_inverse(M);
  auto decompose = [&](const std::vector<MJet>& form) {
    std::vector<MJet> comp(static_cast<std::size_t>(n), MJet(n, W));
    for (int mu = 0; mu < n; ++mu)
      for (int lam = 0; lam < n; ++lam)
        comp[static_cast<std::size_t>(mu)] =
            comp[static_cast<std::size_t>(mu)] +
            Minv[static_cast<std::size_t>(mu)][static_cast<std::size_t>(lam)] *
                form[static_cast<std::size_t>(lam)];
    return comp;
  };
  auto differential = [&](const MJet& f) {
    std::vector<MJet> form;
    form.reserve(static_cast<std::size_t>(n));
    for (int lam = 0; lam < n; ++lam) form.push_back(ddx(f, lam).truncated(W));
    return form;
  };

  std::vector<std::vector<MJet>> dktheta, dk, dtheta;
  std::vector<MJet> thetaW, kW;
  for (int a = 0; a < d; ++a) {
    const MJet& ka = cf.k[static_cast<std::size_t>(a)];
    const MJet& ta = cf.theta[static_cast<std::size_t>(a)];
    dktheta.push_back(decompose(differential(ka * ta)));
    dk.push_back(decompose(differential(ka)));
    dtheta.push_back(decompose(differential(ta)));
    thetaW.push_back(ta.truncated(W));
    kW.push_back(ka.truncated(W));
  }

  SecondOrderData out;
  out.order = W;
  out.scale_exact = true;
  out.param_exact = true;
  out.m.resize(static_cast<std::size_t>(n - 1));
  out.nn.resize(static_cast<std::size_t>(n - 1));
  out.res_scale.resize(static_cast<std::size_t>(n - 1));
  out.res_param.resize(static_cast<std::size_t>(n - 1));

  // Power tables theta_alpha^lambda at order W.
  std::vector<std::vector<MJet>> tpow(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    tpow[static_cast<std::size_t>(a)].push_back(MJet::constant(n, W, 1));
    for (int lam = 1; lam <= n; ++lam)
      tpow[static_cast<std::size_t>(a)].push_back(tpow[static_cast<std::size_t>(a)].back() *
                                                  thetaW[static_cast<std::size_t>(a)]);
  }

  for (int mu = 0; mu <= n - 2; ++mu) {
    // scale system: (d(k theta))_mu - (dk)_{mu+1} = k sum_lambda m_{mu lambda} theta^lambda
    std::vector<std::vector<MJet>> A35(static_cast<std::size_t>(d));
    std::vector<MJet> b35(static_cast<std::size_t>(d), MJet(n, W));
    for (int a = 0; a < d; ++a) {
      for (int lam = 0; lam < n; ++lam)
        A35[static_cast<std::size_t>(a)].push_back(
            MJet(kW[static_cast<std::size_t>(a)] *
                 tpow[static_cast<std::size_t>(a)][static_cast<std::size_t>(lam)]));
      b35[static_cast<std::size_t>(a)] =
          dktheta[static_cast<std::size_t>(a)][static_cast<std::size_t>(mu)] -
          dk[static_cast<std::size_t>(a)][static_cast<std::size_t>(mu) + 1];
    }
    std::vector<MJet> msol = solve_jet_system(A35, b35);
    for (int a = 0; a < d; ++a) {
      MJet r = b35[static_cast<std::size_t>(a)];
      for (int lam = 0; lam < n; ++lam)
        r = r - A35[static_cast<std::size_t>(a)][static_cast<std::size_t>(lam)] *
                    msol[static_cast<std::size_t>(lam)];
      if (!r.is_zero()) out.scale_exact = false;
      out.res_scale[static_cast<std::size_t>(mu)].push_back(std::move(r));
    }
    out.m[static_cast<std::size_t>(mu)] = std::move(msol);

    // parameter system: theta (dtheta)_mu - (dtheta)_{mu+1} = sum_{lambda<=n} n_{mu lambda} theta^lambda
    std::vector<std::vector<MJet>> A36(static_cast<std::size_t>(d));
    std::vector<MJet> b36(static_cast<std::size_t>(d), MJet(n, W));
    for (int a = 0; a < d; ++a) {
      for (int lam = 0; lam <= n; ++lam)
        A36[static_cast<std::size_t>(a)].push_back(
            tpow[static_cast<std::size_t>(a)][static_cast<std::size_t>(lam)]);
      b36[static_cast<std::size_t>(a)] =
          MJet(thetaW[static_cast<std::size_t>(a)] *
               dtheta[static_cast<std::size_t>(a)][static_cast<std::size_t>(mu)]) -
          dtheta[static_cast<std::size_t>(a)][static_cast<std::size_t>(mu) + 1];
    }
    std::vector<MJet> nsol = solve_jet_system(A36, b36);
    for (int a = 0; a < d; ++a) {
      MJet r = b36[static_cast<std::size_t>(a)];
      for (int lam = 0; lam <= n; ++lam)
        r = r - A36[static_cast<std::size_t>(a)][static_cast<std::size_t>(lam)] *
                    nsol[static_cast<std::size_t>(lam)];
      if (!r.is_zero()) out.param_exact = false;
      out.res_param[static_cast<std::size_t>(mu)].push_back(std::move(r));
    }
    out.nn[static_cast<std::size_t>(mu)] = std::move(nsol);
  }
  return out;
}

}  // namespace webgeom
