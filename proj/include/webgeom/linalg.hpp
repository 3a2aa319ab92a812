#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "webgeom/rational.hpp"

namespace webgeom {

using Vec = std::vector<Rat>;

// Dense row-major rational matrix. All eliminations below are
// deterministic: the pivot is always the first nonzero candidate, so
// identical inputs give bit-identical outputs.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rat> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  Rat& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const Rat& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  Vec row(std::size_t r) const {
    return Vec(a.begin() + static_cast<long>(r * cols),
               a.begin() + static_cast<long>((r + 1) * cols));
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static Mat from_rows(const std::vector<Vec>& rws) {
    Mat m(rws.size(), rws.empty() ? 0 : rws[0].size());
    for (std::size_t r = 0; r < rws.size(); ++r) {
      if (rws[r].size() != m.cols) throw std::invalid_argument("ragged rows");
      for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rws[r][c];
    }
    return m;
  }

  static Mat from_cols(const std::vector<Vec>& cls) {
    Mat m(cls.empty() ? 0 : cls[0].size(), cls.size());
    for (std::size_t c = 0; c < cls.size(); ++c) {
      if (cls[c].size() != m.rows) throw std::invalid_argument("ragged columns");
      for (std::size_t r = 0; r < m.rows; ++r) m.at(r, c) = cls[c][r];
    }
    return m;
  }

  bool operator==(const Mat& o) const = default;
};

inline Mat mul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix product shape mismatch");
  Mat z(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const Rat& v = x.at(i, k);
      if (v.is_zero()) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
    }
  return z;
}

inline Vec mul(const Mat& m, const Vec& v) {
  if (m.cols != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
  Vec r(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      if (!m.at(i, j).is_zero()) r[i] += m.at(i, j) * v[j];
  return r;
}

struct RrefResult {
  Mat m;
  std::vector<std::size_t> pivots;  // pivot columns, strictly increasing
};

// Unique reduced row echelon form; pivot count = rank.
inline RrefResult rref(Mat m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && m.at(p, c).is_zero()) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (std::size_t j = c; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
    Rat inv = m.at(r, c);
    for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) /= inv;
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || m.at(i, c).is_zero()) continue;
      Rat f = m.at(i, c);
      for (std::size_t j = c; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Mat& m) { return rref(m).pivots.size(); }

// Canonical kernel basis from the rref free columns: the vector for free
// column j carries a 1 in coordinate j. Basis size = cols - rank.
inline std::vector<Vec> kernel_basis(const Mat& m) {
  RrefResult rr = rref(m);
  std::vector<bool> is_pivot(m.cols, false);
  for (std::size_t c : rr.pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (std::size_t j = 0; j < m.cols; ++j) {
    if (is_pivot[j]) continue;
    Vec v(m.cols);
    v[j] = 1;
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) v[rr.pivots[i]] = -rr.m.at(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Particular solution with all free variables set to 0, or nullopt when the
// system is inconsistent.
inline std::optional<Vec> solve(const Mat& m, const Vec& b) {
  if (b.size() != m.rows) throw std::invalid_argument("solve: rhs length mismatch");
  Mat aug(m.rows, m.cols + 1);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[i];
  }
  RrefResult rr = rref(std::move(aug));
  if (!rr.pivots.empty() && rr.pivots.back() == m.cols) return std::nullopt;
  Vec x(m.cols);
  for (std::size_t i = 0; i < rr.pivots.size(); ++i) x[rr.pivots[i]] = rr.m.at(i, m.cols);
  return x;
}

inline Mat inverse(const Mat& m) {
  if (m.rows != m.cols) throw std::invalid_argument("inverse: not square");
  std::size_t n = m.rows;
  Mat aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  RrefResult rr = rref(std::move(aug));
  if (rr.pivots.size() != n || rr.pivots.back() != n - 1)
    throw std::invalid_argument("inverse: singular matrix");
  Mat inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = rr.m.at(i, n + j);
  return inv;
}

inline Rat det(Mat m) {
  if (m.rows != m.cols) throw std::invalid_argument("det: not square");
  Rat d = 1;
  std::size_t n = m.rows;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m.at(p, c).is_zero()) ++p;
    if (p == n) return Rat(0);
    if (p != c) {
      for (std::size_t j = c; j < n; ++j) std::swap(m.at(p, j), m.at(c, j));
      d = -d;
    }
    d *= m.at(c, c);
    Rat inv = m.at(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m.at(i, c).is_zero()) continue;
      Rat f = m.at(i, c) / inv;
      for (std::size_t j = c; j < n; ++j) m.at(i, j) -= f * m.at(c, j);
    }
  }
  return d;
}

// Enumerates k-subsets of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(const_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
    if (k == 0) return;
  }
}

}  // namespace webgeom
