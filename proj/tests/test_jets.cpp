#include <gtest/gtest.h>

#include <map>

#include "webgeom/jetmap.hpp"
#include "webgeom/mjet.hpp"
#include "webgeom/newton.hpp"
#include "webgeom/probes.hpp"
#include "webgeom/ujet.hpp"

using namespace webgeom;

namespace {

// Independent oracle: plain dense polynomial arithmetic without any
// truncation, reduced mod degree J+1 only at comparison time.
using DensePoly = std::map<Exp, Rat>;

DensePoly dp_mul(const DensePoly& a, const DensePoly& b) {
  DensePoly r;
  for (const auto& [ea, va] : a)
    for (const auto& [eb, vb] : b) {
      Exp e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r[e] += va * vb;
    }
  for (auto it = r.begin(); it != r.end();)
    it = it->second.is_zero() ? r.erase(it) : std::next(it);
  return r;
}

DensePoly dp_from(const MJet& j) { return DensePoly(j.c.begin(), j.c.end()); }

MJet dp_truncate(const DensePoly& p, int n, int J) {
  MJet j(n, J);
  for (const auto& [e, v] : p) j.add_term(e, v);
  return j;
}

MJet random_mjet(ProbeStream& ps, int n, int J, int density = 2) {
  MJet j(n, J);
  for (const Exp& e : enumerate_exponents(n, J))
    if (ps.next_u64() % static_cast<unsigned>(density + 1) == 0) j.add_term(e, ps.next_coeff());
  return j;
}

}  // namespace

TEST(UJet, BasicOps) {
  UJet t = UJet::var(3);
  UJet one = UJet::constant(3, 1);
  UJet p = (one + t) * (one - t);
  EXPECT_EQ(p.coeff(0), Rat(1));
  EXPECT_EQ(p.coeff(1), Rat(0));
  EXPECT_EQ(p.coeff(2), Rat(-1));
  EXPECT_EQ(p.valuation(), 0);
  EXPECT_EQ((t * t * t * t).valuation(), 4);  // truncated away: zero jet
  EXPECT_THROW(t + UJet::var(2), std::invalid_argument);
}

TEST(UJet, DerivativeAndEval) {
  UJet f(3);
  f.set(0, 1);
  f.set(2, Rat(3, 2));
  f.set(3, -1);
  UJet d = f.derivative();
  EXPECT_EQ(d.coeff(1), Rat(3));
  EXPECT_EQ(d.coeff(2), Rat(-3));
  EXPECT_EQ(f.eval(Rat(2)), Rat(1) + Rat(6) - Rat(8));
}

TEST(UJet, InverseAndCompose) {
  ProbeStream ps(5);
  for (int trial = 0; trial < 10; ++trial) {
    UJet a(4);
    a.set(0, ps.next_coeff());
    for (int k = 1; k <= 4; ++k)
      if (ps.next_u64() % 2) a.set(k, ps.next_coeff());
    UJet prod = a * ujet_inverse(a);
    EXPECT_EQ(prod, UJet::constant(4, 1));
  }
  UJet g = UJet::var(4) + UJet::var(4) * UJet::var(4);
  UJet f(4);
  f.set(2, 1);
  // f(g) = (t + t^2)^2 = t^2 + 2 t^3 + t^4
  UJet fg = compose(f, g);
  EXPECT_EQ(fg.coeff(2), Rat(1));
  EXPECT_EQ(fg.coeff(3), Rat(2));
  EXPECT_EQ(fg.coeff(4), Rat(1));
}

TEST(MJet, ProductExamples) {
  int n = 2, J = 2;
  MJet one = MJet::constant(n, J, 1);
  MJet x0 = MJet::variable(n, J, 0);
  MJet x1 = MJet::variable(n, J, 1);
  // (1 + x0)(1 - x0) = 1 - x0^2 at J = 2
  MJet p = (one + x0) * (one - x0);
  EXPECT_EQ(p.coeff(Exp{0, 0}), Rat(1));
  EXPECT_EQ(p.coeff(Exp{1, 0}), Rat(0));
  EXPECT_EQ(p.coeff(Exp{2, 0}), Rat(-1));
  // (x0 + x1)^2 = x0^2 + 2 x0 x1 + x1^2
  MJet s = (x0 + x1) * (x0 + x1);
  EXPECT_EQ(s.coeff(Exp{2, 0}), Rat(1));
  EXPECT_EQ(s.coeff(Exp{1, 1}), Rat(2));
  EXPECT_EQ(s.coeff(Exp{0, 2}), Rat(1));
  // identity element
  ProbeStream ps(7);
  MJet a = random_mjet(ps, n, J);
  EXPECT_EQ(a * one, a);
}

TEST(MJet, RingAxiomsAgainstDenseOracle) {
  ProbeStream ps(13);
  int n = 3, J = 4;
  for (int trial = 0; trial < 8; ++trial) {
    MJet a = random_mjet(ps, n, J, 3);
    MJet b = random_mjet(ps, n, J, 3);
    MJet c = random_mjet(ps, n, J, 3);
    EXPECT_EQ(a * b, dp_truncate(dp_mul(dp_from(a), dp_from(b)), n, J));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
  }
}

TEST(MJet, Derivative) {
  int n = 2, J = 3;
  MJet f(n, J);
  f.add_term(Exp{2, 1}, Rat(1));  // x0^2 x1
  MJet d0 = ddx(f, 0);
  EXPECT_EQ(d0.coeff(Exp{1, 1}), Rat(2));
  EXPECT_TRUE(ddx(MJet::constant(n, J, 5), 1).is_zero());
  // Leibniz rule against the dense oracle path.
  ProbeStream ps(19);
  for (int trial = 0; trial < 6; ++trial) {
    MJet a = random_mjet(ps, 3, 4, 3), b = random_mjet(ps, 3, 4, 3);
    for (int i = 0; i < 3; ++i)
      EXPECT_EQ(ddx(a * b, i), ddx(a, i) * b.truncated(3) + a.truncated(3) * ddx(b, i));
  }
}

TEST(MJet, ComposeU) {
  // f = 1 + t + t^2, u = x0 + x0^2 at J = 3: 1 + x0 + 2 x0^2 + 2 x0^3
  UJet f(3);
  f.set(0, 1);
  f.set(1, 1);
  f.set(2, 1);
  MJet x0 = MJet::variable(1, 3, 0);
  MJet u = x0 + x0 * x0;
  MJet r = compose_u(f, u);
  EXPECT_EQ(r.coeff(Exp{0}), Rat(1));
  EXPECT_EQ(r.coeff(Exp{1}), Rat(1));
  EXPECT_EQ(r.coeff(Exp{2}), Rat(2));
  EXPECT_EQ(r.coeff(Exp{3}), Rat(2));
  // f = t^2, u = x0 + x1 and f = t identity
  UJet sq(2);
  sq.set(2, 1);
  MJet v = MJet::variable(2, 2, 0) + MJet::variable(2, 2, 1);
  MJet vv = compose_u(sq, v);
  EXPECT_EQ(vv, v * v);
  EXPECT_EQ(compose_u(UJet::var(2), v), v);
  MJet bad = MJet::constant(2, 2, 1);
  EXPECT_THROW(compose_u(sq, bad), std::invalid_argument);
  // Truncation: coefficients of f above min order are irrelevant.
  ProbeStream ps(29);
  for (int trial = 0; trial < 5; ++trial) {
    MJet u2 = random_mjet(ps, 2, 3);
    u2.c.erase(Exp{0, 0});
    UJet g(5);
    for (int k = 0; k <= 5; ++k) g.set(k, ps.next_coeff());
    UJet g_low = g.truncated(3);
    EXPECT_EQ(compose_u(g, u2), compose_u(g_low, u2).truncated(3));
  }
}

TEST(MJet, EvalAndArc) {
  MJet f(2, 3);
  f.add_term(Exp{1, 1}, Rat(2));
  f.add_term(Exp{0, 1}, Rat(1));
  EXPECT_EQ(f.eval(Vec{Rat(1, 2), Rat(3)}), Rat(3) + Rat(3));
  std::vector<UJet> arc{UJet::var(3), UJet::var(3) * UJet::var(3)};
  UJet r = eval_arc(f, arc);  // 2 s * s^2 + s^2 truncated at 3
  EXPECT_EQ(r.coeff(2), Rat(1));
  EXPECT_EQ(r.coeff(3), Rat(2));
}

TEST(JetMap, LinearInverse) {
  Mat L(2, 2);
  L.at(0, 0) = 2;
  L.at(0, 1) = 1;
  L.at(1, 1) = 1;
  JetMap phi = JetMap::linear(L, 3);
  JetMap psi = invert_map(phi);
  EXPECT_EQ(psi.linear_part(), inverse(L));
  EXPECT_EQ(compose(phi, psi), JetMap::identity(2, 3));
}

TEST(JetMap, SeriesReversion) {
  // n = 1, phi = x + x^2 at J = 3: inverse is x - x^2 + 2 x^3.
  MJet x = MJet::variable(1, 3, 0);
  JetMap phi(1, 3, {x + x * x});
  JetMap psi = invert_map(phi);
  EXPECT_EQ(psi.comp[0].coeff(Exp{1}), Rat(1));
  EXPECT_EQ(psi.comp[0].coeff(Exp{2}), Rat(-1));
  EXPECT_EQ(psi.comp[0].coeff(Exp{3}), Rat(2));
}

TEST(JetMap, RoundTripRandomQuadratic) {
  ProbeStream ps(31);
  for (int J = 2; J <= 5; ++J) {
    for (int trial = 0; trial < 4; ++trial) {
      int n = 2 + static_cast<int>(ps.next_u64() % 2);
      std::vector<MJet> comps;
      for (int i = 0; i < n; ++i) {
        MJet f = MJet::variable(n, J, i);
        for (const Exp& e : enumerate_exponents(n, J))
          if (exp_degree(e) == 2 && ps.next_u64() % 2) f.add_term(e, ps.next_coeff());
        comps.push_back(std::move(f));
      }
      JetMap phi(n, J, comps);
      JetMap psi = invert_map(phi);
      EXPECT_EQ(compose(phi, psi), JetMap::identity(n, J));
      EXPECT_EQ(compose(psi, phi), JetMap::identity(n, J));
    }
  }
}

TEST(JetMap, SingularRejected) {
  MJet zero(2, 3);
  EXPECT_THROW(invert_map(JetMap(2, 3, {MJet::variable(2, 3, 0), zero})), std::invalid_argument);
}

TEST(Newton, LinearRoot) {
  // F = t - x0, t0 = 0.
  int n = 1, J = 3;
  TPoly F({-MJet::variable(n, J, 0), MJet::constant(n, J, 1)});
  MJet t = newton_root(F, Rat(0));
  EXPECT_EQ(t, MJet::variable(n, J, 0));
}

TEST(Newton, SquareRootBranch) {
  // F = t^2 - (1 + x0), t0 = 1: 1 + x0/2 - x0^2/8 + x0^3/16.
  int n = 1, J = 3;
  TPoly F({-(MJet::constant(n, J, 1) + MJet::variable(n, J, 0)), MJet(n, J),
           MJet::constant(n, J, 1)});
  MJet t = newton_root(F, Rat(1));
  EXPECT_EQ(t.coeff(Exp{0}), Rat(1));
  EXPECT_EQ(t.coeff(Exp{1}), Rat(1, 2));
  EXPECT_EQ(t.coeff(Exp{2}), Rat(-1, 8));
  EXPECT_EQ(t.coeff(Exp{3}), Rat(1, 16));
  EXPECT_TRUE(F.subst(t).is_zero());  // defining property
}

TEST(Newton, MultipleRootRejected) {
  int n = 1, J = 3;
  // F = t^2 - x0 has a double root at t0 = 0 over the base point.
  TPoly F({-MJet::variable(n, J, 0), MJet(n, J), MJet::constant(n, J, 1)});
  EXPECT_THROW(newton_root(F, Rat(0)), std::invalid_argument);
  // And a wrong base value is rejected outright.
  TPoly G({MJet::constant(n, J, 1), MJet::constant(n, J, 1)});
  EXPECT_THROW(newton_root(G, Rat(5)), std::invalid_argument);
}
