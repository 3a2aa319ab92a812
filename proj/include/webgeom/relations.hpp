#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "webgeom/linalg.hpp"
#include "webgeom/mjet.hpp"
#include "webgeom/ujet.hpp"
#include "webgeom/web.hpp"

namespace webgeom {

// One abelian relation of a web, encoded by the univariate jets f_alpha
// with z_alpha = f_alpha(u_alpha).
struct AbelianRelation {
  std::vector<UJet> f;
  int valuation = 0;
};

// Jet-level space of abelian relations at truncation J. The solver works
// with f-coefficients of degree <= J-2 and imposes the vanishing of every
// 1-form coefficient monomial of total degree <= J-2, so all reported
// dimensions carry the truncation explicitly: dim E(q; J).
struct RelationSpace {
  int nvars = 0;
  int count = 0;
  int order = 0;  // J of the web
  int fdeg = 0;   // top stored f degree, J-2
  std::vector<AbelianRelation> basis;      // canonical graded basis
  std::vector<std::size_t> filtration;     // dim E(q; J) for q = 0..q_max

  std::size_t dim() const { return basis.size(); }

  std::size_t dimE(std::size_t q) const {
    if (q < filtration.size()) return filtration[q];
    return 0;
  }
};

// Assembles and solves the linear system expressing that the 1-form
// sum_alpha f_alpha(u_alpha) du_alpha vanishes modulo the truncation. The
// unknown coefficient vector is ordered degree-major (degree ascending,
// then web index), so the rref of the kernel is automatically graded by
// valuation.
inline RelationSpace abelian_relations(const WebGerm& w) {
  if (w.order < 3) throw std::invalid_argument("abelian_relations: truncation order too small (need J >= 3)");
  const int n = w.nvars, d = w.count;
  const int R = w.order - 2;  // top f degree and equation degree cap
  const std::size_t ncols = static_cast<std::size_t>(d) * (static_cast<std::size_t>(R) + 1);

  // contrib[a][k][lambda] = u_a^k * d(u_a)/dx_lambda at order R.
  std::vector<std::vector<std::vector<MJet>>> contrib(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    MJet ua = w.u[static_cast<std::size_t>(a)].truncated(R);
    std::vector<MJet> powers{MJet::constant(n, R, 1)};
    for (int k = 1; k <= R; ++k) powers.push_back(powers.back() * ua);
    contrib[static_cast<std::size_t>(a)].resize(static_cast<std::size_t>(R) + 1);
    for (int k = 0; k <= R; ++k) {
      auto& slot = contrib[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)];
      slot.reserve(static_cast<std::size_t>(n));
      for (int lam = 0; lam < n; ++lam)
        slot.push_back(powers[static_cast<std::size_t>(k)] *
                       ddx(w.u[static_cast<std::size_t>(a)], lam).truncated(R));
    }
  }

  std::vector<Exp> mons = enumerate_exponents(n, R);
  Mat eqs(static_cast<std::size_t>(n) * mons.size(), ncols);
  std::size_t row = 0;
  for (int lam = 0; lam < n; ++lam)
    for (const Exp& e : mons) {
      for (int k = 0; k <= R; ++k)
        for (int a = 0; a < d; ++a)
          eqs.at(row, static_cast<std::size_t>(k) * static_cast<std::size_t>(d) +
                          static_cast<std::size_t>(a)) =
              contrib[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)]
                     [static_cast<std::size_t>(lam)]
                         .coeff(e);
      ++row;
    }

  std::vector<Vec> kb = kernel_basis(eqs);
  Mat graded = rref(Mat::from_rows(kb)).m;

  RelationSpace rs;
  rs.nvars = n;
  rs.count = d;
  rs.order = w.order;
  rs.fdeg = R;
  for (std::size_t r = 0; r < kb.size(); ++r) {
    AbelianRelation rel;
    rel.f.reserve(static_cast<std::size_t>(d));
    int val = R + 1;
    for (int a = 0; a < d; ++a) {
      UJet f(R);
      for (int k = 0; k <= R; ++k)
        f.set(k, graded.at(r, static_cast<std::size_t>(k) * static_cast<std::size_t>(d) +
                                  static_cast<std::size_t>(a)));
      val = std::min(val, f.valuation());
      rel.f.push_back(std::move(f));
    }
    rel.valuation = val;
    rs.basis.push_back(std::move(rel));
  }

  int q_max = (d - 1 + (n - 2)) / (n - 1) + 1;  // ceil((d-1)/(n-1)) plus a guard level
  rs.filtration.assign(static_cast<std::size_t>(q_max) + 1, 0);
  for (const AbelianRelation& rel : rs.basis)
    for (int q = 0; q <= std::min(q_max, rel.valuation); ++q)
      ++rs.filtration[static_cast<std::size_t>(q)];
  return rs;
}

// Residual of the defining identity for one relation; all coefficient
// jets of the 1-form sum, at order J-2. Zero for members of the space.
inline std::vector<MJet> relation_residual(const WebGerm& w, const AbelianRelation& rel) {
  const int n = w.nvars;
  const int R = w.order - 2;
  std::vector<MJet> res(static_cast<std::size_t>(n), MJet(n, R));
  for (int a = 0; a < w.count; ++a) {
    MJet za = compose_u(rel.f[static_cast<std::size_t>(a)], w.u[static_cast<std::size_t>(a)].truncated(R));
    for (int lam = 0; lam < n; ++lam)
      res[static_cast<std::size_t>(lam)] =
          res[static_cast<std::size_t>(lam)] +
          za * ddx(w.u[static_cast<std::size_t>(a)], lam).truncated(R);
  }
  return res;
}

// Certificate for "maximal rank in valuation <= 1": 2d-3n+1 abelian
// relations with linearly independent 1-jets.
struct RankCertificate {
  bool verdict = false;
  std::size_t one_jet_rank = 0;
  std::size_t required = 0;           // 2d - 3n + 1
  std::size_t dim01 = 0, dim12 = 0;   // dim E(0)-E(1), dim E(1)-E(2)
  std::size_t max01 = 0, max12 = 0;   // d-n, d-2n+1
  bool val1_block_ok = false;         // informational: d-2n+1 valuation-1 relations
  Mat one_jet;                        // rows = basis relations, 2d columns (a | b)
};

inline RankCertificate certify_max_rank_val1(const WebGerm& w, const RelationSpace& rs) {
  const int n = w.nvars, d = w.count;
  if (d < 2 * n) throw std::invalid_argument("certify_max_rank_val1: hypothesis range violated (need d >= 2n)");
  RankCertificate cert;
  cert.required = static_cast<std::size_t>(2 * d - 3 * n + 1);
  cert.max01 = static_cast<std::size_t>(d - n);
  cert.max12 = static_cast<std::size_t>(d - 2 * n + 1);
  cert.one_jet = Mat(rs.basis.size(), 2 * static_cast<std::size_t>(d));
  for (std::size_t r = 0; r < rs.basis.size(); ++r)
    for (int a = 0; a < d; ++a) {
      cert.one_jet.at(r, static_cast<std::size_t>(a)) = rs.basis[r].f[static_cast<std::size_t>(a)].coeff(0);
      cert.one_jet.at(r, static_cast<std::size_t>(d + a)) =
          rs.basis[r].f[static_cast<std::size_t>(a)].coeff(1);
    }
  cert.one_jet_rank = rank(cert.one_jet);
  cert.dim01 = rs.dimE(0) - rs.dimE(1);
  cert.dim12 = rs.dimE(1) - rs.dimE(2);
  cert.verdict = cert.one_jet_rank >= cert.required && cert.dim01 == cert.max01 &&
                 cert.dim12 == cert.max12;
  // Consequence worth surfacing: d-2n+1 valuation-1 relations with independent
  // 1-jets; follows from the quotient dimension, reported as a field.
  cert.val1_block_ok = cert.dim12 == cert.max12;
  return cert;
}

// Recomputes the filtration at J-1 and J and compares; a disagreement
// means the truncation is too small for the dimensions to have settled.
struct StabilizationReport {
  int J_low = 0, J_high = 0;
  std::vector<std::size_t> dims_low, dims_high;
  bool stable = false;
};

inline StabilizationReport stabilization_check(const WebGerm& w) {
  if (w.order < 4) throw std::invalid_argument("stabilization_check: need J >= 4");
  StabilizationReport rep;
  rep.J_high = w.order;
  rep.J_low = w.order - 1;
  rep.dims_high = abelian_relations(w).filtration;
  rep.dims_low = abelian_relations(w.truncated(w.order - 1)).filtration;
  rep.stable = true;
  for (std::size_t q = 0; q < std::min(rep.dims_low.size(), rep.dims_high.size()); ++q)
    if (rep.dims_low[q] != rep.dims_high[q]) rep.stable = false;
  return rep;
}

}  // namespace webgeom
