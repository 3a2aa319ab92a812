#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "webgeom/coframe.hpp"
#include "webgeom/poincare.hpp"
#include "webgeom/probes.hpp"
#include "webgeom/relations.hpp"

namespace webgeom {

struct Check {
  std::string name;
  std::string expect;
  std::string got;
  bool pass = false;
};

struct PipelineResult {
  std::vector<Check> checks;
  bool pass = true;
  std::string mode;  // "exact" or "jet" probe evaluation
  std::uint64_t seed = 0;
  bool stability_known = false;
  bool stable = false;
  std::vector<std::string> probes;  // the evaluation points actually used

  void add(const std::string& name, const std::string& expect, const std::string& got) {
    bool ok = expect == got;
    checks.push_back({name, expect, got, ok});
    pass = pass && ok;
  }
  void add_le(const std::string& name, long long bound, long long got) {
    bool ok = got <= bound;
    checks.push_back({name, "<=" + std::to_string(bound), std::to_string(got), ok});
    pass = pass && ok;
  }
  void note_probe(const std::string& name, const Vec& x) {
    std::string s = "probe " + name + " =";
    for (const Rat& c : x) s += ' ' + rat_str(c);
    probes.push_back(std::move(s));
  }
};

namespace detail {

inline std::size_t count_nonzero(const std::vector<std::vector<MJet>>& jets) {
  std::size_t c = 0;
  for (const auto& row : jets)
    for (const MJet& j : row)
      if (!j.is_zero()) ++c;
  return c;
}

// The full check list; stages after a failed gate are skipped.
inline void pipeline_checks(const WebGerm& w, std::uint64_t seed, PipelineResult& out) {
  const int n = w.nvars, d = w.count;
  RelationSpace rs = abelian_relations(w);
  RankCertificate cert = certify_max_rank_val1(w, rs);
  out.add("one_jet_rank", std::to_string(cert.required), std::to_string(cert.one_jet_rank));
  out.add("quotient_dim01", std::to_string(cert.max01), std::to_string(cert.dim01));
  out.add("quotient_dim12", std::to_string(cert.max12), std::to_string(cert.dim12));
  if (w.order >= 4) {
    StabilizationReport st = stabilization_check(w);
    out.add("stabilization", "1", st.stable ? "1" : "0");
  }
  if (!cert.verdict) {
    out.add("certificate", "1", "0");
    return;
  }

  AdaptedCoframe cf;
  try {
    cf = adapted_coframe(w);
  } catch (const std::invalid_argument&) {
    out.add("coframe_constructible", "1", "0");
    return;
  }
  {
    CoframeResidual res = coframe_residual(w, cf);
    std::size_t bad = 0;
    for (const auto& row : res.res)
      for (const MJet& j : row)
        if (!j.is_zero()) ++bad;
    out.add("coframe_residual", "0", std::to_string(bad));
  }
  {
    SecondOrderData so = second_order_conditions(w, cf);
    out.add("second_order_scale", "0", std::to_string(count_nonzero(so.res_scale)));
    out.add("second_order_parameter", "0", std::to_string(count_nonzero(so.res_param)));
  }

  PoincareData pd;
  try {
    pd = poincare_build(w, rs, cf);
    out.add("relation_identity", "0", "0");
  } catch (const std::exception&) {
    out.add("relation_identity", "0", "nonzero");
    return;
  }
  {
    PositionReport rep = position_checks(pd);
    out.add("position_block", "1", rep.block_shape ? "1" : "0");
    out.add("position_span", std::to_string(d - n), std::to_string(rep.span0));
    out.add("position_minors", std::to_string(rep.subsets_total), std::to_string(rep.subsets_full));
    out.add("position_completions", std::to_string(rep.zp_total), std::to_string(rep.zp_full));
  }
  ProbeStream ps(seed);
  {
    bool ok = true;
    for (int t = 0; t < 3; ++t) ok = ok && immersion_at_origin(pd, ps.next_point(n));
    out.add("immersion", "1", ok ? "1" : "0");
  }
  CurveField field = curve_field(pd);
  out.add("sigma_identities", "1", field.sigma_ok ? "1" : "0");
  out.add("power_sum_identities", "1", field.power_sums_ok ? "1" : "0");
  out.add("zstar_degree_bound", "1", field.degree_ok ? "1" : "0");
  out.add("incidence_at_origin", "1", field.incidence_ok ? "1" : "0");
  out.add("polynomial_basis", "1", field.poly_basis_ok ? "1" : "0");

  bool exact = polynomial_exact(pd);
  out.mode = exact ? "exact" : "jet";
  if (exact) {
    for (int probe = 0; probe < 3; ++probe) {
      Vec x0 = probe == 0 ? Vec(static_cast<std::size_t>(n), Rat(0)) : ps.next_point(n);
      Vec x1 = ps.next_point(n);
      if (x0 == x1) x1[0] += Rat(1, 17);
      out.note_probe("span_intersection_" + std::to_string(probe + 1) + "_x0", x0);
      out.note_probe("span_intersection_" + std::to_string(probe + 1) + "_x1", x1);
      out.add("span_intersection_" + std::to_string(probe + 1), std::to_string(n - 1),
              std::to_string(span_intersection_dim(pd, x0, x1)));
    }
    {
      Vec origin(static_cast<std::size_t>(n), Rat(0));
      try {
        Vec x1 = leaf_sharing_point(pd, Rat(1, 8));
        out.note_probe("leaf_sharing_x1", x1);
        IntersectionReport rep = curve_intersections(pd, origin, x1);
        out.add("leaf_intersections", std::to_string(n - 1),
                rep.valid ? std::to_string(rep.common_count) : ("invalid: " + rep.why));
        out.add("leaf_intersection_degree", std::to_string(n - 1),
                rep.valid ? std::to_string(rep.degree_in_w) : "invalid");
      } catch (const std::invalid_argument&) {
        // no exact rational leaf-sharing partner; count along the arc instead
        ArcIntersectionReport rep = curve_intersections_arc(pd, field);
        out.add("leaf_intersections", std::to_string(n - 1),
                rep.w_certified ? std::to_string(rep.count) : "uncertified");
      }
      Vec y0 = ps.next_point(n), y1 = ps.next_point(n);
      out.note_probe("generic_pair_x0", y0);
      out.note_probe("generic_pair_x1", y1);
      IntersectionReport gen = curve_intersections(pd, y0, y1);
      if (gen.valid)
        out.add_le("generic_intersection_bound", n - 1, gen.degree_in_w);
      else
        out.add("generic_intersection_bound", "valid", gen.why);
    }
    {
      bool span_ok = true, omega_ok = true, f_ok = true;
      for (int xi = 0; xi < 5; ++xi) {
        Vec x = xi == 0 ? Vec(static_cast<std::size_t>(n), Rat(0)) : ps.next_point(n);
        out.note_probe("tangent_grid_x" + std::to_string(xi + 1), x);
        // parameter probes include every theta_alpha(x)
        std::vector<Rat> ts;
        for (int tv = 0; tv < 5 - std::min(5, d); ++tv) ts.push_back(ps.next_probe());
        for (int al = 0; al < std::min(5, d); ++al)
          ts.push_back(pd.theta[static_cast<std::size_t>(al)].eval(x));
        for (const Rat& t : ts) {
          TangentReport rep = tangent_span_at(pd, field, x, t);
          span_ok = span_ok && rep.valid && rep.span_dim == 3;
          omega_ok = omega_ok && rep.omega_membership;
          f_ok = f_ok && rep.f_completion;
        }
      }
      out.add("tangent_span_grid", "3", span_ok ? "3" : "other");
      out.add("omega_kernel_membership", "1", omega_ok ? "1" : "0");
      out.add("f_completion", "1", f_ok ? "1" : "0");
    }
  } else {
    std::vector<UJet> arc = leaf_arc(pd);
    ArcSpanReport span = span_intersection_arc(pd, arc);
    out.add("span_intersection_arc", std::to_string(n - 1),
            span.certified ? std::to_string(span.intersection) : "uncertified");
    ArcIntersectionReport rep = curve_intersections_arc(pd, field);
    out.add("leaf_intersections", std::to_string(n - 1),
            rep.w_certified ? std::to_string(rep.count) : "uncertified");
    GenericTangentReport tan = tangent_span_generic(pd, field);
    out.add("tangent_span_generic", "3",
            tan.valid && tan.upper_certified ? std::to_string(tan.span_dim) : "uncertified");
    out.add("omega_kernel_membership", "1", tan.omega_membership ? "1" : "0");
    out.add("f_completion", "1", tan.f_completion ? "1" : "0");
  }
}

}  // namespace detail

// Runs every check of the constructive pipeline on a certified web and
// reports machine-readable verdicts. Verdict stability under lowering the
// truncation by one is reported when the order allows it.
inline PipelineResult run_pipeline(const WebGerm& w, std::uint64_t seed) {
  PipelineResult out;
  out.seed = seed;
  detail::pipeline_checks(w, seed, out);
  if (w.order >= 5) {
    PipelineResult low;
    low.seed = seed;
    detail::pipeline_checks(w.truncated(w.order - 1), seed, low);
    out.stability_known = true;
    // Verdicts must agree with the run one order down; a check the lower
    // order cannot certify (trusted truncation exhausted) is skipped, a
    // missing or flipped verdict is instability.
    out.stable = true;
    for (const Check& hc : out.checks) {
      const Check* lc = nullptr;
      for (const Check& c : low.checks)
        if (c.name == hc.name) lc = &c;
      if (!lc) {
        out.stable = false;
        continue;
      }
      if (lc->got.find("uncertified") != std::string::npos) continue;
      if (lc->pass != hc.pass) out.stable = false;
    }
    out.pass = out.pass && out.stable;
  }
  return out;
}

inline std::string render_pipeline(const PipelineResult& res, int n, int d, int J) {
  std::ostringstream out;
  out << "pipeline n=" << n << " d=" << d << " J=" << J << " seed=" << res.seed;
  if (!res.mode.empty()) out << " probes=" << res.mode;
  out << '\n';
  for (const std::string& s : res.probes) out << "# " << s << '\n';
  for (const Check& c : res.checks)
    out << "CHECK " << c.name << " EXPECT " << c.expect << " GOT " << c.got << ' '
        << (c.pass ? "PASS" : "FAIL") << '\n';
  if (res.stability_known)
    out << "CHECK verdicts_stable_at_lower_order EXPECT 1 GOT " << (res.stable ? 1 : 0) << ' '
        << (res.stable ? "PASS" : "FAIL") << '\n';
  out << "PIPELINE " << (res.pass ? "PASS" : "FAIL") << '\n';
  return out.str();
}

}  // namespace webgeom
