#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "webgeom/mjet.hpp"
#include "webgeom/ujet.hpp"

namespace webgeom {

// Rank of a matrix of truncated power series, read as the truncation of a
// germ matrix. Soundness rules:
//   - a pivot is only accepted after factoring out its s-valuation, which
//     is legitimate over the fraction field of the germ ring and costs the
//     row that much trusted order;
//   - an entry is treated as zero only when all its trusted coefficients
//     vanish, so a stall certifies "all remaining minors vanish modulo the
//     truncation" (the `upper_certified` flag).
struct GermRank {
  int rank = 0;
  bool upper_certified = false;
  std::vector<std::size_t> pivot_rows;  // original row indices, in pivot order
};

inline GermRank ujet_germ_rank(std::vector<std::vector<UJet>> m) {
  GermRank out;
  if (m.empty()) {
    out.upper_certified = true;
    return out;
  }
  const std::size_t rows = m.size(), cols = m[0].size();
  const int R = m[0][0].order;
  std::vector<int> trust(rows, R);  // trusted coefficient degrees 0..trust[i]
  std::vector<bool> used(rows, false);
  std::vector<bool> colused(cols, false);

  auto entry_val = [&](std::size_t i, std::size_t j) -> int {
    // valuation among trusted coefficients; trust[i]+1 when trusted-zero
    for (int k = 0; k <= trust[i]; ++k)
      if (!m[i][j].coeff(k).is_zero()) return k;
    return trust[i] + 1;
  };

  while (true) {
    std::size_t pi = rows, pj = cols;
    int best = -1;
    for (std::size_t i = 0; i < rows; ++i) {
      if (used[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (colused[j]) continue;
        int v = entry_val(i, j);
        if (v > trust[i]) continue;  // trusted zero
        if (best < 0 || v < best) {
          best = v;
          pi = i;
          pj = j;
        }
      }
    }
    if (best < 0) {
      out.upper_certified = true;
      for (std::size_t i = 0; i < rows; ++i)
        if (!used[i] && trust[i] < 1) out.upper_certified = false;
      return out;
    }
    if (best > 0) {
      // factor s^best out of the pivot row
      for (std::size_t j = 0; j < cols; ++j) {
        UJet shifted(R);
        for (int k = 0; k + best <= R; ++k) shifted.set(k, m[pi][j].coeff(k + best));
        m[pi][j] = std::move(shifted);
      }
      trust[pi] -= best;
      if (trust[pi] < 0) {
        out.upper_certified = false;  // precision exhausted
        return out;
      }
    }
    UJet pinv = ujet_inverse(m[pi][pj]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (used[i] || i == pi) continue;
      if (m[i][pj].is_zero()) continue;
      UJet f = m[i][pj] * pinv;
      for (std::size_t j = 0; j < cols; ++j)
        m[i][j] = m[i][j] - f * m[pi][j];
      trust[i] = std::min(trust[i], trust[pi]);
    }
    used[pi] = true;
    colused[pj] = true;
    out.pivot_rows.push_back(pi);
    ++out.rank;
  }
}

// Determinant of a small matrix of univariate jets, cofactor expansion.
inline UJet ujet_det(const std::vector<std::vector<UJet>>& m) {
  const std::size_t n = m.size();
  const int R = m[0][0].order;
  if (n == 1) return m[0][0];
  UJet acc(R);
  std::vector<std::vector<UJet>> minor(n - 1, std::vector<UJet>(n - 1, UJet(R)));
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor[i - 1][jj++] = m[i][j];
      }
    }
    UJet term = m[0][c] * ujet_det(minor);
    acc = (c % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

// Polynomials in t with multivariate-jet coefficients: the entry type of
// the symbolic tangent-space matrices.
using PolyM = std::vector<MJet>;  // ascending t-degree; empty = 0

inline PolyM polym_mul(const PolyM& a, const PolyM& b) {
  if (a.empty() || b.empty()) return {};
  int nv = a[0].nvars, ord = a[0].order;
  PolyM r(a.size() + b.size() - 1, MJet(nv, ord));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
  }
  return r;
}

inline PolyM polym_add(const PolyM& a, const PolyM& b) {
  PolyM r = a;
  if (r.size() < b.size()) {
    if (b.empty()) return r;
    r.resize(b.size(), MJet(b[0].nvars, b[0].order));
  }
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
  return r;
}

inline PolyM polym_sub(const PolyM& a, const PolyM& b) {
  PolyM r = a;
  if (r.size() < b.size()) {
    if (b.empty()) return r;
    r.resize(b.size(), MJet(b[0].nvars, b[0].order));
  }
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] - b[i];
  return r;
}

inline bool polym_zero(const PolyM& a) {
  for (const MJet& c : a)
    if (!c.is_zero()) return false;
  return true;
}

inline PolyM polym_det(const std::vector<std::vector<PolyM>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  PolyM acc;
  std::vector<std::vector<PolyM>> minor(n - 1, std::vector<PolyM>(n - 1));
  for (std::size_t c = 0; c < n; ++c) {
    if (polym_zero(m[0][c])) continue;
    for (std::size_t i = 1; i < n; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        minor[i - 1][jj++] = m[i][j];
      }
    }
    PolyM term = polym_mul(m[0][c], polym_det(minor));
    acc = (c % 2 == 0) ? polym_add(acc, term) : polym_sub(acc, term);
  }
  return acc;
}

}  // namespace webgeom
