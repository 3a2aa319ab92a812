#pragma once

#include <stdexcept>
#include <vector>

#include "webgeom/linalg.hpp"
#include "webgeom/mjet.hpp"

namespace webgeom {

// Chern bound pi(n, d) = sum_{q >= 1} (d - q(n-1) - 1)^+ on the rank of a
// d-web in n variables.
inline long long chern_bound(int n, long long d) {
  if (n < 2 || d < 1) throw std::invalid_argument("chern_bound: need n >= 2 and d >= 1");
  long long s = 0;
  for (long long q = 1;; ++q) {
    long long term = d - q * (n - 1) - 1;
    if (term <= 0) break;
    s += term;
  }
  return s;
}

namespace detail {
inline bool forms_general_position(const Mat& forms) {
  std::size_t d = forms.rows, n = forms.cols;
  std::size_t s = std::min(d, n);
  bool ok = true;
  for_each_subset(d, s, [&](const std::vector<std::size_t>& idx) {
    if (!ok) return;
    std::vector<Vec> rows;
    for (std::size_t i : idx) rows.push_back(forms.row(i));
    if (rank(Mat::from_rows(rows)) != s) ok = false;
  });
  return ok;
}
}  // namespace detail

// r_q = dim of the span of the q-th powers of d linear forms (rows of
// `forms`), computed as the rank of the multinomial coefficient matrix.
inline std::size_t power_rank(const Mat& forms, int q) {
  if (q < 0) throw std::invalid_argument("power_rank: negative power");
  int n = static_cast<int>(forms.cols);
  if (n < 2) throw std::invalid_argument("power_rank: need at least two variables");
  if (!detail::forms_general_position(forms))
    throw std::invalid_argument("power_rank: forms not in general position");
  std::vector<Exp> mons;
  for (const Exp& e : enumerate_exponents(n, q))
    if (exp_degree(e) == q) mons.push_back(e);
  Mat M(forms.rows, mons.size());
  for (std::size_t r = 0; r < forms.rows; ++r) {
    for (std::size_t c = 0; c < mons.size(); ++c) {
      // multinomial coefficient q! / prod(e_i!) times prod l_i^{e_i}
      Rat coef = 1;
      int used = 0;
      for (int i = 0; i < n; ++i) {
        int e = mons[c][static_cast<std::size_t>(i)];
        for (int k = 1; k <= e; ++k) coef *= Rat(used + k, k);
        used += e;
        for (int k = 0; k < e; ++k) coef *= forms.at(r, static_cast<std::size_t>(i));
        if (coef.is_zero()) break;
      }
      M.at(r, c) = coef;
    }
  }
  return rank(M);
}

// Germ of a d-web at the origin of n-space: d defining jets with zero
// constant term whose linear parts are in general position.
struct WebGerm {
  int nvars = 0;
  int count = 0;
  int order = 0;
  std::vector<MJet> u;

  WebGerm() = default;
  WebGerm(int n, int J, std::vector<MJet> jets)
      : nvars(n), count(static_cast<int>(jets.size())), order(J), u(std::move(jets)) {
    if (n < 2) throw std::invalid_argument("WebGerm: need n >= 2");
    if (count < 1) throw std::invalid_argument("WebGerm: need d >= 1");
    if (J < 1) throw std::invalid_argument("WebGerm: need J >= 1");
    for (const MJet& f : u) {
      if (f.nvars != n || f.order != J) throw std::invalid_argument("WebGerm: jet shape mismatch");
      if (!f.constant_term().is_zero())
        throw std::invalid_argument("WebGerm: defining jets must vanish at the origin");
    }
    if (!detail::forms_general_position(linear_parts()))
      throw std::invalid_argument("WebGerm: linear parts not in general position");
  }

  // d x n matrix of differentials at 0.
  Mat linear_parts() const {
    Mat L(static_cast<std::size_t>(count), static_cast<std::size_t>(nvars));
    for (int a = 0; a < count; ++a)
      for (int i = 0; i < nvars; ++i) {
        Exp e(static_cast<std::size_t>(nvars), 0);
        e[static_cast<std::size_t>(i)] = 1;
        L.at(static_cast<std::size_t>(a), static_cast<std::size_t>(i)) =
            u[static_cast<std::size_t>(a)].coeff(e);
      }
    return L;
  }

  WebGerm truncated(int J) const {
    std::vector<MJet> jets;
    jets.reserve(u.size());
    for (const MJet& f : u) jets.push_back(f.truncated(J));
    return WebGerm(nvars, J, std::move(jets));
  }
};

}  // namespace webgeom
