#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "webgeom/linalg.hpp"
#include "webgeom/polyq.hpp"
#include "webgeom/rational.hpp"

namespace webgeom {

// Point of P^m, canonical representative: first nonzero coordinate = 1.
struct PPoint {
  Vec x;

  PPoint() = default;
  explicit PPoint(Vec coords) : x(std::move(coords)) {
    std::size_t i = 0;
    while (i < x.size() && x[i].is_zero()) ++i;
    if (i == x.size()) throw std::invalid_argument("PPoint: all coordinates zero");
    Rat lead = x[i];
    for (Rat& c : x) c /= lead;
  }

  int dim() const { return static_cast<int>(x.size()) - 1; }
  bool operator==(const PPoint& o) const = default;
};

namespace detail {
inline Mat coord_matrix(const std::vector<PPoint>& pts) {
  std::vector<Vec> rows;
  rows.reserve(pts.size());
  for (const PPoint& p : pts) rows.push_back(p.x);
  return Mat::from_rows(rows);
}
}  // namespace detail

// True iff every subset of size <= m+1 is projectively independent.
inline bool general_position(const std::vector<PPoint>& pts, int m) {
  for (const PPoint& p : pts)
    if (p.dim() != m) throw std::invalid_argument("general_position: mixed dimensions");
  std::size_t s = std::min(pts.size(), static_cast<std::size_t>(m) + 1);
  bool ok = true;
  for_each_subset(pts.size(), s, [&](const std::vector<std::size_t>& idx) {
    if (!ok) return;
    std::vector<Vec> rows;
    for (std::size_t i : idx) rows.push_back(pts[i].x);
    if (rank(Mat::from_rows(rows)) != s) ok = false;
  });
  return ok;
}

// Index of the monomial x_i x_j (i <= j) in the quadric coefficient basis.
inline std::size_t quad_index(int i, int j, int m) {
  // Pairs ordered lexicographically: (0,0),(0,1),...,(0,m),(1,1),...
  std::size_t off = 0;
  for (int r = 0; r < i; ++r) off += static_cast<std::size_t>(m + 1 - r);
  return off + static_cast<std::size_t>(j - i);
}

inline std::size_t quad_space_dim(int m) {
  return static_cast<std::size_t>(m + 1) * static_cast<std::size_t>(m + 2) / 2;
}

// The space V(Gamma) of quadrics through a point family, with its
// codimension in the full space of quadrics.
struct QuadricSpace {
  int m = 0;
  std::vector<Vec> basis;  // coefficient vectors, quad_index order
  std::size_t codim = 0;
};

inline QuadricSpace quadric_conditions(const std::vector<PPoint>& pts, int m) {
  std::size_t N = quad_space_dim(m);
  Mat ev(pts.size(), N);
  for (std::size_t r = 0; r < pts.size(); ++r) {
    if (pts[r].dim() != m) throw std::invalid_argument("quadric_conditions: dimension mismatch");
    for (int i = 0; i <= m; ++i)
      for (int j = i; j <= m; ++j)
        ev.at(r, quad_index(i, j, m)) =
            pts[r].x[static_cast<std::size_t>(i)] * pts[r].x[static_cast<std::size_t>(j)];
  }
  QuadricSpace qs;
  qs.m = m;
  qs.codim = rank(ev);
  qs.basis = kernel_basis(ev);
  return qs;
}

// Rational normal curve of degree m in P^m: row j of `basis` holds the
// coefficients of P_j(t), ascending degree; t -> (P_0(t),...,P_m(t)) plus
// the leading-coefficient point at t = infinity.
struct Rnc {
  int m = 0;
  Mat basis;  // (m+1) x (m+1), invertible

  Rnc() = default;
  Rnc(int dim, Mat b) : m(dim), basis(std::move(b)) {
    if (basis.rows != static_cast<std::size_t>(m) + 1 || basis.cols != basis.rows)
      throw std::invalid_argument("Rnc: basis shape mismatch");
    if (rank(basis) != basis.rows)
      throw std::invalid_argument("Rnc: polynomials do not form a basis");
  }

  Vec point_at(const Rat& t) const {
    Vec p(basis.rows);
    for (std::size_t j = 0; j < basis.rows; ++j) p[j] = polyq::eval(basis.row(j), t);
    return p;
  }

  Vec point_at_infinity() const {
    Vec p(basis.rows);
    for (std::size_t j = 0; j < basis.rows; ++j) p[j] = basis.at(j, basis.cols - 1);
    return p;
  }
};

// Parameter value on a curve, finite or the point at infinity.
struct RncParam {
  bool infinite = false;
  Rat t;
};

// Inverts the parametrization at one point: with x(t) = C (1,t,...,t^m)^T,
// a point p lies on the curve iff C^{-1} p is proportional to a power
// vector, which is read off directly.
inline std::optional<RncParam> point_on_rnc(const Rnc& c, const PPoint& p) {
  if (p.dim() != c.m) throw std::invalid_argument("point_on_rnc: dimension mismatch");
  Vec w = mul(inverse(c.basis), p.x);
  if (w[0].is_zero()) {
    for (std::size_t k = 1; k + 1 < w.size(); ++k)
      if (!w[k].is_zero()) return std::nullopt;
    if (w.back().is_zero()) return std::nullopt;
    return RncParam{true, Rat(0)};
  }
  Rat t = w[1] / w[0];
  Rat tp = 1;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] != w[0] * tp) return std::nullopt;
    tp *= t;
  }
  return RncParam{false, t};
}

// Projective equality as point sets, tested by incidence at 2m+1 samples;
// distinct degree-m rational normal curves cannot share that many points.
inline bool rnc_equal(const Rnc& a, const Rnc& b) {
  if (a.m != b.m) return false;
  for (int k = 0; k <= 2 * a.m; ++k)
    if (!point_on_rnc(b, PPoint(a.point_at(Rat(k))))) return false;
  return true;
}

// The unique rational normal curve through m+3 points in general position.
// Normalizes the first m+1 points to the base points, writes the curve as
// x(t) = (prod (t - theta_j)) (k_0/(t-theta_0), ..., k_m/(t-theta_m)) with
// the extra points placed at t = infinity and t = 0, and gauge-fixes
// k' = 1, theta_0 = 1.
inline Rnc rnc_through(const std::vector<PPoint>& pts) {
  if (pts.empty()) throw std::invalid_argument("rnc_through: no points");
  int m = pts[0].dim();
  if (pts.size() != static_cast<std::size_t>(m) + 3)
    throw std::invalid_argument("rnc_through: need exactly m+3 points");
  if (m < 2) throw std::invalid_argument("rnc_through: need m >= 2");
  if (!general_position(pts, m)) throw std::invalid_argument("rnc_through: not in general position");

  std::vector<Vec> cols;
  for (int j = 0; j <= m; ++j) cols.push_back(pts[static_cast<std::size_t>(j)].x);
  Mat A = Mat::from_cols(cols);
  Mat Ainv = inverse(A);
  Vec xp = mul(Ainv, pts[static_cast<std::size_t>(m) + 1].x);
  Vec xpp = mul(Ainv, pts[static_cast<std::size_t>(m) + 2].x);
  for (int j = 0; j <= m; ++j)
    if (xp[static_cast<std::size_t>(j)].is_zero() || xpp[static_cast<std::size_t>(j)].is_zero())
      throw std::invalid_argument("rnc_through: not in general position");

  Vec theta(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j)
    theta[static_cast<std::size_t>(j)] = xp[static_cast<std::size_t>(j)] * xpp[0] /
                                         (xp[0] * xpp[static_cast<std::size_t>(j)]);
  for (int i = 0; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j)
      if (theta[static_cast<std::size_t>(i)] == theta[static_cast<std::size_t>(j)])
        throw std::invalid_argument("rnc_through: not in general position");

  // B_j(t) = k_j prod_{i != j} (t - theta_i), k_j = x'_j.
  std::vector<Vec> B;
  for (int j = 0; j <= m; ++j) {
    Vec roots;
    for (int i = 0; i <= m; ++i)
      if (i != j) roots.push_back(theta[static_cast<std::size_t>(i)]);
    Vec poly = polyq::from_roots(roots);
    for (Rat& cc : poly) cc *= xp[static_cast<std::size_t>(j)];
    B.push_back(std::move(poly));
  }
  Mat basis(static_cast<std::size_t>(m) + 1, static_cast<std::size_t>(m) + 1);
  for (std::size_t i = 0; i <= static_cast<std::size_t>(m); ++i)
    for (std::size_t j = 0; j <= static_cast<std::size_t>(m); ++j)
      for (std::size_t k = 0; k < B[j].size(); ++k)
        basis.at(i, k) += A.at(i, j) * B[j][k];
  Rnc curve(m, std::move(basis));
  for (const PPoint& p : pts)
    if (!point_on_rnc(curve, p)) throw std::runtime_error("rnc_through: incidence check failed");
  return curve;
}

// Castelnuovo recovery: the rational normal curve through d >= 2m+3
// general-position points that impose 2m+1 conditions on quadrics. Follows
// the constructive proof: from the basis of V(Gamma) in the shape
// x_m L_{ij}(x') + x_i x_j, extract Q_j = x_m(a_j x_j + b_j x_0) + x_0 x_j
// and read off x(t) = (1, -b_1 t/(1+a_1 t), ..., t).
inline Rnc castelnuovo_recover(const std::vector<PPoint>& pts) {
  if (pts.empty()) throw std::invalid_argument("castelnuovo_recover: no points");
  int m = pts[0].dim();
  if (m < 2) throw std::invalid_argument("castelnuovo_recover: need m >= 2");
  if (pts.size() < 2 * static_cast<std::size_t>(m) + 3)
    throw std::invalid_argument("castelnuovo_recover: need at least 2m+3 points");
  if (!general_position(pts, m))
    throw std::invalid_argument("castelnuovo_recover: not in general position");
  {
    QuadricSpace qs = quadric_conditions(pts, m);
    if (qs.codim != 2 * static_cast<std::size_t>(m) + 1)
      throw std::invalid_argument("Castelnuovo hypothesis fails");
  }

  std::vector<Vec> cols;
  for (int j = 0; j <= m; ++j) cols.push_back(pts[static_cast<std::size_t>(j)].x);
  Mat A = Mat::from_cols(cols);
  Mat Ainv = inverse(A);
  std::vector<PPoint> npts;
  npts.reserve(pts.size());
  for (const PPoint& p : pts) npts.emplace_back(mul(Ainv, p.x));

  QuadricSpace V = quadric_conditions(npts, m);
  // R-monomials: x_i x_j with i < j <= m-1.
  std::vector<std::size_t> rcols;
  for (int i = 0; i <= m - 1; ++i)
    for (int j = i + 1; j <= m - 1; ++j) rcols.push_back(quad_index(i, j, m));
  if (V.basis.size() != rcols.size())
    throw std::invalid_argument("Castelnuovo hypothesis fails");
  Mat VR(V.basis.size(), rcols.size());
  for (std::size_t r = 0; r < V.basis.size(); ++r)
    for (std::size_t c = 0; c < rcols.size(); ++c) VR.at(r, c) = V.basis[r][rcols[c]];

  Vec a(static_cast<std::size_t>(m)), b(static_cast<std::size_t>(m));  // index 1..m-1 used
  std::size_t N = quad_space_dim(m);
  for (int j = 1; j <= m - 1; ++j) {
    // Combination of the V(Gamma) basis whose R-part is exactly x_0 x_j.
    Vec target(rcols.size());
    for (std::size_t c = 0; c < rcols.size(); ++c)
      if (rcols[c] == quad_index(0, j, m)) target[c] = 1;
    Mat VRt(rcols.size(), V.basis.size());
    for (std::size_t r = 0; r < V.basis.size(); ++r)
      for (std::size_t c = 0; c < rcols.size(); ++c) VRt.at(c, r) = VR.at(r, c);
    auto mu = solve(VRt, target);
    if (!mu) throw std::invalid_argument("degenerate configuration");
    Vec Q(N);
    for (std::size_t r = 0; r < V.basis.size(); ++r)
      for (std::size_t k = 0; k < N; ++k) Q[k] += (*mu)[r] * V.basis[r][k];
    a[static_cast<std::size_t>(j)] = Q[quad_index(j, m, m)];
    b[static_cast<std::size_t>(j)] = Q[quad_index(0, m, m)];
    // Everything else must cancel: Q = x_m L_j(x') + x_0 x_j with
    // L_j = a_j x_j + b_j x_0.
    Vec expect(N);
    expect[quad_index(0, j, m)] = 1;
    expect[quad_index(j, m, m)] = a[static_cast<std::size_t>(j)];
    expect[quad_index(0, m, m)] = b[static_cast<std::size_t>(j)];
    if (Q != expect) throw std::invalid_argument("degenerate configuration");
  }
  for (int j = 1; j <= m - 1; ++j) {
    if (a[static_cast<std::size_t>(j)].is_zero() || b[static_cast<std::size_t>(j)].is_zero())
      throw std::invalid_argument("degenerate configuration");
    for (int k = j + 1; k <= m - 1; ++k)
      if (a[static_cast<std::size_t>(j)] == a[static_cast<std::size_t>(k)])
        throw std::invalid_argument("degenerate configuration");
  }

  // Cleared-denominator parametrization of degree m.
  std::vector<Vec> comp(static_cast<std::size_t>(m) + 1);
  Vec full{Rat(1)};
  for (int k = 1; k <= m - 1; ++k)
    full = polyq::mul(full, Vec{Rat(1), a[static_cast<std::size_t>(k)]});
  comp[0] = full;
  comp[static_cast<std::size_t>(m)] = polyq::mul(full, Vec{Rat(0), Rat(1)});
  for (int j = 1; j <= m - 1; ++j) {
    Vec part{Rat(1)};
    for (int k = 1; k <= m - 1; ++k)
      if (k != j) part = polyq::mul(part, Vec{Rat(1), a[static_cast<std::size_t>(k)]});
    part = polyq::mul(part, Vec{Rat(0), -b[static_cast<std::size_t>(j)]});
    comp[static_cast<std::size_t>(j)] = std::move(part);
  }
  Mat nbasis(static_cast<std::size_t>(m) + 1, static_cast<std::size_t>(m) + 1);
  for (std::size_t j = 0; j < comp.size(); ++j)
    for (std::size_t k = 0; k < comp[j].size(); ++k) nbasis.at(j, k) = comp[j][k];
  Mat basis(nbasis.rows, nbasis.cols);
  for (std::size_t i = 0; i < basis.rows; ++i)
    for (std::size_t j = 0; j < basis.cols; ++j)
      for (std::size_t k = 0; k < basis.cols; ++k) basis.at(i, k) += A.at(i, j) * nbasis.at(j, k);
  Rnc curve(m, std::move(basis));
  for (const PPoint& p : pts)
    if (!point_on_rnc(curve, p))
      throw std::runtime_error("castelnuovo_recover: incidence check failed");
  return curve;
}

// Projective dimension of the span of a point family.
inline int span_dim(const std::vector<PPoint>& pts) {
  if (pts.empty()) return -1;
  return static_cast<int>(rank(detail::coord_matrix(pts))) - 1;
}

// Projective dimension of the intersection of two spans; -1 when empty.
inline int intersect_spans(const std::vector<PPoint>& A, const std::vector<PPoint>& B) {
  if (A.empty() || B.empty()) return -1;
  std::vector<Vec> rows;
  for (const PPoint& p : A) rows.push_back(p.x);
  for (const PPoint& p : B) rows.push_back(p.x);
  std::size_t ra = rank(detail::coord_matrix(A));
  std::size_t rb = rank(detail::coord_matrix(B));
  std::size_t rs = rank(Mat::from_rows(rows));
  return static_cast<int>(ra + rb) - static_cast<int>(rs) - 1;
}

}  // namespace webgeom
