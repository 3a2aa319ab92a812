#include <gtest/gtest.h>

#include "webgeom/generators.hpp"
#include "webgeom/probes.hpp"
#include "webgeom/relations.hpp"

using namespace webgeom;

namespace {

JetMap random_quadratic_diffeo(ProbeStream& ps, int n, int J) {
  while (true) {
    Mat L(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < L.rows; ++i)
      for (std::size_t j = 0; j < L.cols; ++j) L.at(i, j) = ps.next_coeff();
    if (rank(L) != L.rows) continue;
    std::vector<MJet> comps;
    for (int i = 0; i < n; ++i) {
      MJet f(n, J);
      for (int j = 0; j < n; ++j) {
        Exp e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(j)] = 1;
        f.add_term(e, L.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      }
      for (const Exp& e : enumerate_exponents(n, J))
        if (exp_degree(e) == 2 && ps.next_u64() % 2) f.add_term(e, ps.next_coeff());
      comps.push_back(std::move(f));
    }
    return JetMap(n, J, std::move(comps));
  }
}

}  // namespace

TEST(RncLinearWeb, ShapeAndGeneralPosition) {
  WebGerm w = rnc_linear_web(3, 7, Vec{0, 1, 2, 3, 4, 5, 6}, 5);
  EXPECT_EQ(w.count, 7);
  // u_a is the linear form sum_mu theta_a^mu x_mu.
  EXPECT_EQ(w.u[2].coeff(Exp{0, 1, 0}), Rat(2));
  EXPECT_EQ(w.u[2].coeff(Exp{0, 0, 1}), Rat(4));
  EXPECT_THROW(rnc_linear_web(3, 3, Vec{0, 1, 1}, 5), std::invalid_argument);
}

TEST(RncLinearWeb, PlaneWebRank) {
  // pi(2, 4) = 3.
  WebGerm w = rnc_linear_web(2, 4, Vec{0, 1, 2, 3}, 5);
  EXPECT_EQ(abelian_relations(w).dim(), 3u);
}

TEST(FamilyWeb, RankIsDMinusN) {
  ProbeStream ps(97);
  std::vector<std::vector<UJet>> U(1);
  for (int mu = 0; mu < 4; ++mu) {
    UJet g(5);
    g.set(1, ps.next_coeff());
    g.set(2, ps.next_coeff());
    U[0].push_back(g);
  }
  WebGerm w = separable_family_web(4, 6, U, 5);
  RelationSpace rs = abelian_relations(w);
  EXPECT_EQ(rs.dim(), 2u);  // d - n = pi(4, 6)
  EXPECT_EQ(chern_bound(4, 6), 2);
}

TEST(FamilyWeb, LinearSpecialization) {
  // With linear U the family degenerates to a linear web of the same rank.
  std::vector<std::vector<UJet>> U(1);
  for (int mu = 0; mu < 4; ++mu) {
    UJet g(5);
    g.set(1, Rat(mu + 2));
    U[0].push_back(g);
  }
  WebGerm w = separable_family_web(4, 6, U, 5);
  for (const MJet& f : w.u) EXPECT_LE(f.valuation() == f.order + 1 ? 0 : 1, 1);
  EXPECT_EQ(abelian_relations(w).dim(), 2u);
}

TEST(FamilyWeb, RangeChecks) {
  std::vector<std::vector<UJet>> U;
  EXPECT_THROW(separable_family_web(2, 4, U, 5), std::invalid_argument);
  EXPECT_THROW(separable_family_web(4, 10, U, 5), std::invalid_argument);
}

TEST(Pushforward, IdentityAndRoundTrip) {
  ProbeStream ps(101);
  WebGerm w = rnc_linear_web(3, 7, Vec{0, 1, 2, 3, 4, 5, 6}, 5);
  WebGerm same = pushforward(w, JetMap::identity(3, 5));
  for (int a = 0; a < 7; ++a) EXPECT_EQ(same.u[a], w.u[a]);
  JetMap phi = random_quadratic_diffeo(ps, 3, 5);
  WebGerm moved = pushforward(w, phi);
  WebGerm back = pushforward(moved, invert_map(phi));
  for (int a = 0; a < 7; ++a) EXPECT_EQ(back.u[a], w.u[a]);
}

TEST(Pushforward, RankIsInvariant) {
  ProbeStream ps(103);
  WebGerm w = rnc_linear_web(3, 7, Vec{0, 1, 2, 3, 4, 5, 6}, 5);
  RelationSpace rs = abelian_relations(w);
  JetMap phi = random_quadratic_diffeo(ps, 3, 5);
  WebGerm moved = pushforward(w, phi);
  RelationSpace rs2 = abelian_relations(moved);
  EXPECT_EQ(rs.filtration, rs2.filtration);
  RankCertificate c1 = certify_max_rank_val1(w, rs);
  RankCertificate c2 = certify_max_rank_val1(moved, rs2);
  EXPECT_EQ(c1.verdict, c2.verdict);
  EXPECT_TRUE(c2.verdict);
}

TEST(AlgebraicWeb, MomentCurveSection) {
  // Moment curve of degree n in P^n with a hyperplane cutting rational
  // points: an n-web of rank 0.
  int n = 3;
  std::vector<Vec> gamma;
  for (int i = 0; i <= n; ++i) {
    Vec g(static_cast<std::size_t>(n) + 1);
    g[static_cast<std::size_t>(i)] = 1;
    gamma.push_back(std::move(g));
  }
  CurveParam c(n, n, gamma);
  // Section polynomial t(t-1)(t-2) = -x1 coefficient pattern: choose
  // x0 = (0, 2, -3, 1) so that sum x0_i t^i = t^3 - 3t^2 + 2t.
  WebGerm w = algebraic_web(c, Vec{0, 2, -3, 1}, 5);
  EXPECT_EQ(w.count, 3);
  EXPECT_EQ(abelian_relations(w).dim(), 0u);
}

TEST(AlgebraicWeb, LeafDirectionsAreDualPoints) {
  // du_a(0) is proportional to the chart coordinates of the cut point
  // gamma(t_a): implicit differentiation of F(x, t_a(x)) = 0.
  int n = 3;
  std::vector<Vec> gamma;
  for (int i = 0; i <= n; ++i) {
    Vec g(static_cast<std::size_t>(n) + 1);
    g[static_cast<std::size_t>(i)] = 1;
    gamma.push_back(std::move(g));
  }
  CurveParam c(n, n, gamma);
  Vec x0{0, 2, -3, 1};
  WebGerm w = algebraic_web(c, x0, 4);
  Mat lp = w.linear_parts();
  Vec roots{Rat(0), Rat(1), Rat(2)};
  // chart skips coordinate 1 (the first nonzero entry of x0), keeping 0,2,3.
  std::vector<std::size_t> chart{0, 2, 3};
  for (int a = 0; a < 3; ++a) {
    // gradient of t_a at 0 = -gamma_chart(t_a)/S'(t_a); proportionality.
    Vec dual(chart.size());
    Rat tp = 1;
    Vec gvals(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
      Rat v = 0, t = 1;
      for (std::size_t k = 0; k < gamma[static_cast<std::size_t>(i)].size(); ++k) {
        v += gamma[static_cast<std::size_t>(i)][k] * t;
        t *= roots[static_cast<std::size_t>(a)];
      }
      gvals[static_cast<std::size_t>(i)] = v;
    }
    (void)tp;
    for (std::size_t lam = 0; lam < chart.size(); ++lam) dual[lam] = gvals[chart[lam]];
    // rank of the 2 x n matrix [du_a(0); dual] must be 1.
    Mat pair(2, static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      pair.at(0, static_cast<std::size_t>(j)) = lp.at(static_cast<std::size_t>(a), static_cast<std::size_t>(j));
      pair.at(1, static_cast<std::size_t>(j)) = dual[static_cast<std::size_t>(j)];
    }
    EXPECT_EQ(rank(pair), 1u);
  }
}

TEST(AlgebraicWeb, RejectsBadSections) {
  int n = 3;
  std::vector<Vec> gamma;
  for (int i = 0; i <= n; ++i) {
    Vec g(static_cast<std::size_t>(n) + 1);
    g[static_cast<std::size_t>(i)] = 1;
    gamma.push_back(std::move(g));
  }
  CurveParam c(n, n, gamma);
  // Degree drop: leading coefficient zero means intersections at infinity.
  EXPECT_THROW(algebraic_web(c, Vec{0, 2, -3, 0}, 4), std::invalid_argument);
  // Double root: t^2(t-1) = t^3 - t^2.
  EXPECT_THROW(algebraic_web(c, Vec{0, 0, -1, 1}, 4), std::invalid_argument);
  // Irrational roots: t^3 - 2 = 0.
  EXPECT_THROW(algebraic_web(c, Vec{-2, 0, 0, 1}, 4), std::invalid_argument);
}

TEST(CurveParam, RejectsDegenerate) {
  std::vector<Vec> gamma{{Rat(1)}, {Rat(2)}, {Rat(0), Rat(1)}};
  EXPECT_THROW(CurveParam(2, 1, gamma), std::invalid_argument);
}
