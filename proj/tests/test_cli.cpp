#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "webgeom/generators.hpp"
#include "webgeom/io.hpp"
#include "webgeom/probes.hpp"
#include "webgeom/relations.hpp"

using namespace webgeom;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  std::string out_path = std::string(::testing::TempDir()) + "cli_out.txt";
  std::string cmd = std::string(WEBGEOM_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_path);
  return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = std::string(::testing::TempDir()) + name;
  std::ofstream out(path);
  out << content;
  return path;
}

WebGerm random_linear_web(ProbeStream& ps, int n, int d, int J) {
  while (true) {
    std::vector<MJet> jets;
    for (int a = 0; a < d; ++a) {
      MJet f(n, J);
      for (int i = 0; i < n; ++i) {
        Exp e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(i)] = 1;
        f.add_term(e, ps.next_coeff());
      }
      jets.push_back(std::move(f));
    }
    try {
      return WebGerm(n, J, std::move(jets));
    } catch (const std::invalid_argument&) {
    }
  }
}

}  // namespace

TEST(Io, WebRoundTrip) {
  WebGerm w = rnc_linear_web(3, 7, Vec{0, 1, 2, 3, 4, 5, 6}, 5);
  std::string text = io::write_web(w);
  std::istringstream in(text);
  WebGerm back = io::read_web(in);
  EXPECT_EQ(back.nvars, w.nvars);
  EXPECT_EQ(back.order, w.order);
  for (int a = 0; a < w.count; ++a) EXPECT_EQ(back.u[a], w.u[a]);
  // And writing again is byte-identical.
  EXPECT_EQ(io::write_web(back), text);
}

TEST(Io, ParseErrors) {
  std::istringstream empty("");
  EXPECT_THROW(io::read_web(empty), parse_error);
  std::istringstream garbage("web n=2 d=1 J=3\nu 1:\n[0 zz] 1\n");
  EXPECT_THROW(io::read_web(garbage), parse_error);
  std::istringstream wrongcount("web n=2 d=2 J=3\nu 1:\n[1 0] 1\n");
  EXPECT_THROW(io::read_web(wrongcount), parse_error);
}

TEST(Cli, ChernValues) {
  EXPECT_EQ(run_cli("chern 2 5").out, "6\n");
  EXPECT_EQ(run_cli("chern 3 3").out, "0\n");
  EXPECT_EQ(run_cli("chern 3 7").out, "6\n");
}

TEST(Cli, GenCertifyRoundTrip) {
  std::string web = std::string(::testing::TempDir()) + "w37.txt";
  RunResult gen = run_cli("gen rnc-web n=3 d=7 theta=0,1,2,3,4,5,6 J=5 --out " + web);
  ASSERT_EQ(gen.exit_code, 0) << gen.out;
  std::ifstream in(web);
  WebGerm w = io::read_web(in);
  EXPECT_EQ(abelian_relations(w).dim(), 6u);
  RunResult cert = run_cli("certify " + web);
  EXPECT_EQ(cert.exit_code, 0);
  EXPECT_NE(cert.out.find("verdict PASS"), std::string::npos);
  EXPECT_NE(cert.out.find("quotient_dims 4 2"), std::string::npos);
}

TEST(Cli, CertifyFailsOnGenericLinearWeb) {
  // A generic linear 6-web in 3 variables is stable but far from maximal
  // rank in valuation <= 1.
  ProbeStream ps(163);
  WebGerm w = random_linear_web(ps, 3, 6, 5);
  std::string path = write_temp("generic6.txt", io::write_web(w));
  RunResult cert = run_cli("certify " + path);
  EXPECT_EQ(cert.exit_code, 1);
  EXPECT_NE(cert.out.find("verdict FAIL"), std::string::npos);
}

TEST(Cli, ParseErrorExitCode) {
  std::string path = write_temp("bad.txt", "not a web file\n");
  EXPECT_EQ(run_cli("certify " + path).exit_code, 2);
  EXPECT_EQ(run_cli("certify /nonexistent/file").exit_code, 2);
}

TEST(Cli, PreconditionExitCode) {
  WebGerm w = rnc_linear_web(3, 5, Vec{0, 1, 2, 3, 4}, 5);  // d < 2n
  std::string path = write_temp("small.txt", io::write_web(w));
  EXPECT_EQ(run_cli("certify " + path).exit_code, 3);
}

TEST(Cli, UnstableExitCode) {
  // Generic nonlinear web: dimensions have not settled at J = 4.
  ProbeStream ps(89);
  WebGerm base = random_linear_web(ps, 3, 7, 4);
  std::vector<MJet> jets = base.u;
  for (MJet& f : jets)
    for (const Exp& e : enumerate_exponents(3, 4))
      if (exp_degree(e) >= 2 && ps.next_u64() % 3 == 0) f.add_term(e, ps.next_coeff());
  WebGerm w(3, 4, std::move(jets));
  std::string path = write_temp("unstable.txt", io::write_web(w));
  EXPECT_EQ(run_cli("certify " + path).exit_code, 4);
}

TEST(Cli, PipelineDeterminism) {
  std::string web = std::string(::testing::TempDir()) + "w37b.txt";
  ASSERT_EQ(run_cli("gen rnc-web n=3 d=7 theta=0,1,2,3,4,5,6 J=5 --out " + web).exit_code, 0);
  RunResult a = run_cli("pipeline " + web + " --seed 11");
  RunResult b = run_cli("pipeline " + web + " --seed 11");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("PIPELINE PASS"), std::string::npos);
  EXPECT_NE(a.out.find("seed=11"), std::string::npos);
}

TEST(Cli, PushforwardPipeline) {
  std::string web = std::string(::testing::TempDir()) + "w37c.txt";
  ASSERT_EQ(run_cli("gen rnc-web n=3 d=7 theta=0,1,2,3,4,5,6 J=5 --out " + web).exit_code, 0);
  std::string map = write_temp("map.txt",
                               "map n=3 J=5\n"
                               "phi 1:\n[1 0 0] 1\n[0 2 0] 1/2\n"
                               "phi 2:\n[0 1 0] 1\n[1 1 0] 1/4\n"
                               "phi 3:\n[0 0 1] 1\n[2 0 0] -1/2\n");
  std::string moved = std::string(::testing::TempDir()) + "w37m.txt";
  ASSERT_EQ(run_cli("gen pushforward " + web + " " + map + " --out " + moved).exit_code, 0);
  RunResult pipe = run_cli("pipeline " + moved + " --seed 5");
  EXPECT_EQ(pipe.exit_code, 0) << pipe.out;
  EXPECT_NE(pipe.out.find("probes=jet"), std::string::npos);
  EXPECT_NE(pipe.out.find("PIPELINE PASS"), std::string::npos);
  // Round trip through the inverse map restores the original file.
  std::ifstream min(map);
  JetMap phi = io::read_map(min);
  std::string invmap = write_temp("invmap.txt", io::write_map(invert_map(phi)));
  std::string back = std::string(::testing::TempDir()) + "w37back.txt";
  ASSERT_EQ(run_cli("gen pushforward " + moved + " " + invmap + " --out " + back).exit_code, 0);
  EXPECT_EQ(slurp(back), slurp(web));
}

TEST(Cli, RncThroughAndRecover) {
  std::string pts = write_temp("pts.txt",
                               "1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n1 1 1 1\n1 2 4 8\n");
  RunResult through = run_cli("rnc through " + pts);
  ASSERT_EQ(through.exit_code, 0);
  // Sample the printed curve and recover it from 2m+3 = 9 points.
  std::istringstream in(through.out);
  std::vector<Vec> rows;
  std::string line;
  while (std::getline(in, line)) {
    Vec r;
    for (const std::string& t : io::detail::split_ws(line)) r.push_back(parse_rat(t));
    if (!r.empty()) rows.push_back(std::move(r));
  }
  Rnc curve(3, Mat::from_rows(rows));
  std::ostringstream sampled;
  for (int k = 2; k <= 10; ++k) {
    Vec p = curve.point_at(Rat(k));
    for (std::size_t i = 0; i < p.size(); ++i) sampled << (i ? " " : "") << rat_str(p[i]);
    sampled << '\n';
  }
  std::string spath = write_temp("sampled.txt", sampled.str());
  RunResult rec = run_cli("rnc recover " + spath);
  EXPECT_EQ(rec.exit_code, 0);
  // Both parametrize the same curve; compare by incidence.
  std::istringstream rin(rec.out);
  std::vector<Vec> rrows;
  while (std::getline(rin, line)) {
    Vec r;
    for (const std::string& t : io::detail::split_ws(line)) r.push_back(parse_rat(t));
    if (!r.empty()) rrows.push_back(std::move(r));
  }
  Rnc recovered(3, Mat::from_rows(rrows));
  EXPECT_TRUE(rnc_equal(curve, recovered));
  // Random general-position points are rejected with the Castelnuovo message.
  ProbeStream ps(167);
  std::vector<PPoint> badpts;
  do {
    badpts.clear();
    for (int k = 0; k < 9; ++k) {
      Vec x(4);
      for (Rat& c : x) c = ps.next_coeff();
      badpts.emplace_back(std::move(x));
    }
  } while (!general_position(badpts, 3));
  std::ostringstream badtxt;
  for (const PPoint& p : badpts) {
    for (std::size_t i = 0; i < p.x.size(); ++i) badtxt << (i ? " " : "") << rat_str(p.x[i]);
    badtxt << '\n';
  }
  std::string bad = write_temp("badpts.txt", badtxt.str());
  RunResult rej = run_cli("rnc recover " + bad);
  EXPECT_EQ(rej.exit_code, 3);
  EXPECT_NE(rej.out.find("Castelnuovo hypothesis fails"), std::string::npos);
}

TEST(Cli, PowrankAndFamily) {
  std::string forms = write_temp("forms.txt", "1 0\n0 1\n1 1\n1 -1\n1 2\n");
  EXPECT_EQ(run_cli("powrank " + forms + " 2").out, "3\n");  // min(d, q+1)
  std::string fam = std::string(::testing::TempDir()) + "family.txt";
  ASSERT_EQ(run_cli("gen family n=4 d=6 J=5 seed=3 --out " + fam).exit_code, 0);
  RunResult rel = run_cli("relations " + fam);
  EXPECT_EQ(rel.exit_code, 0);
  EXPECT_NE(rel.out.find("dim=2"), std::string::npos);
}

TEST(Cli, CurveWeb) {
  std::string curve = write_temp("curve.txt",
                                 "curve n=3 deg=3\n"
                                 "gamma 0: 1 0 0 0\n"
                                 "gamma 1: 0 1 0 0\n"
                                 "gamma 2: 0 0 1 0\n"
                                 "gamma 3: 0 0 0 1\n");
  RunResult gen = run_cli("gen curve-web " + curve + " 0,2,-3,1 --order 4");
  EXPECT_EQ(gen.exit_code, 0);
  EXPECT_NE(gen.out.find("web n=3 d=3 J=4"), std::string::npos);
  // Inadmissible hyperplane: double root.
  EXPECT_EQ(run_cli("gen curve-web " + curve + " 0,0,-1,1").exit_code, 3);
}

TEST(Cli, SelftestPasses) {
  RunResult r = run_cli("selftest");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("SELFTEST PASS"), std::string::npos);
}
