#pragma once

#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "webgeom/generators.hpp"
#include "webgeom/jetmap.hpp"
#include "webgeom/projective.hpp"
#include "webgeom/relations.hpp"
#include "webgeom/web.hpp"

namespace webgeom::io {

namespace detail {

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

// Reads the next content line, skipping blanks and '#' comments.
inline std::optional<std::string> next_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line[i] == '#') continue;
    if (line.back() == '\r') line.pop_back();
    return line;
  }
  return std::nullopt;
}

inline long long kv_int(const std::vector<std::string>& toks, const std::string& key) {
  for (const std::string& t : toks) {
    if (t.size() > key.size() + 1 && t.compare(0, key.size(), key) == 0 && t[key.size()] == '=') {
      try {
        return std::stoll(t.substr(key.size() + 1));
      } catch (...) {
        throw parse_error("bad integer for " + key + ": " + t);
      }
    }
  }
  throw parse_error("missing " + key + "=");
}

}  // namespace detail

// --- jets -------------------------------------------------------------

inline void write_mjet(std::ostream& out, const MJet& j) {
  for (const auto& [e, v] : j.c) {
    out << '[';
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) out << ' ';
      out << e[i];
    }
    out << "] " << rat_str(v) << '\n';
  }
}

// Parses jet term lines (starting with '[') from a pre-read line buffer.
inline MJet parse_mjet(const std::vector<std::string>& lines, int n, int J) {
  MJet j(n, J);
  for (const std::string& line : lines) {
    std::size_t close = line.find(']');
    if (line.empty() || line[line.find_first_not_of(" \t")] != '[' || close == std::string::npos)
      throw parse_error("bad jet term line: " + line);
    std::string exps = line.substr(line.find('[') + 1, close - line.find('[') - 1);
    std::vector<std::string> etoks = detail::split_ws(exps);
    if (static_cast<int>(etoks.size()) != n) throw parse_error("bad exponent arity: " + line);
    Exp e;
    for (const std::string& t : etoks) {
      try {
        e.push_back(std::stoi(t));
      } catch (...) {
        throw parse_error("bad exponent: " + line);
      }
      if (e.back() < 0) throw parse_error("negative exponent: " + line);
    }
    std::vector<std::string> rest = detail::split_ws(line.substr(close + 1));
    if (rest.size() != 1) throw parse_error("bad coefficient field: " + line);
    if (exp_degree(e) > J) throw parse_error("exponent above truncation: " + line);
    j.add_term(e, parse_rat(rest[0]));
  }
  return j;
}

// --- web files ---------------------------------------------------------

inline std::string write_web(const WebGerm& w) {
  std::ostringstream out;
  out << "web n=" << w.nvars << " d=" << w.count << " J=" << w.order << '\n';
  for (int a = 0; a < w.count; ++a) {
    out << "u " << a + 1 << ":\n";
    write_mjet(out, w.u[static_cast<std::size_t>(a)]);
  }
  return out.str();
}

inline WebGerm read_web(std::istream& in) {
  auto header = detail::next_line(in);
  if (!header) throw parse_error("empty web file");
  std::vector<std::string> toks = detail::split_ws(*header);
  if (toks.empty() || toks[0] != "web") throw parse_error("expected web header");
  int n = static_cast<int>(detail::kv_int(toks, "n"));
  int d = static_cast<int>(detail::kv_int(toks, "d"));
  int J = static_cast<int>(detail::kv_int(toks, "J"));
  std::vector<MJet> jets;
  std::vector<std::string> block;
  int current = 0;
  auto flush = [&]() {
    if (current > 0) jets.push_back(parse_mjet(block, n, J));
    block.clear();
  };
  while (auto line = detail::next_line(in)) {
    std::vector<std::string> lt = detail::split_ws(*line);
    if (!lt.empty() && lt[0] == "u") {
      flush();
      if (lt.size() != 2 || lt[1].back() != ':') throw parse_error("bad block header: " + *line);
      current = std::stoi(lt[1].substr(0, lt[1].size() - 1));
      if (current != static_cast<int>(jets.size()) + 1)
        throw parse_error("web blocks out of order: " + *line);
    } else if (current > 0) {
      block.push_back(*line);
    } else {
      throw parse_error("unexpected line before first block: " + *line);
    }
  }
  flush();
  if (static_cast<int>(jets.size()) != d) throw parse_error("web block count does not match d");
  try {
    return WebGerm(n, J, std::move(jets));
  } catch (const std::invalid_argument& e) {
    throw parse_error(std::string("invalid web: ") + e.what());
  }
}

// --- jet maps ----------------------------------------------------------

inline std::string write_map(const JetMap& m) {
  std::ostringstream out;
  out << "map n=" << m.nvars << " J=" << m.order << '\n';
  for (int i = 0; i < m.nvars; ++i) {
    out << "phi " << i + 1 << ":\n";
    write_mjet(out, m.comp[static_cast<std::size_t>(i)]);
  }
  return out.str();
}

inline JetMap read_map(std::istream& in) {
  auto header = detail::next_line(in);
  if (!header) throw parse_error("empty map file");
  std::vector<std::string> toks = detail::split_ws(*header);
  if (toks.empty() || toks[0] != "map") throw parse_error("expected map header");
  int n = static_cast<int>(detail::kv_int(toks, "n"));
  int J = static_cast<int>(detail::kv_int(toks, "J"));
  std::vector<MJet> comps;
  std::vector<std::string> block;
  int current = 0;
  auto flush = [&]() {
    if (current > 0) comps.push_back(parse_mjet(block, n, J));
    block.clear();
  };
  while (auto line = detail::next_line(in)) {
    std::vector<std::string> lt = detail::split_ws(*line);
    if (!lt.empty() && lt[0] == "phi") {
      flush();
      current = std::stoi(lt[1].substr(0, lt[1].size() - 1));
    } else if (current > 0) {
      block.push_back(*line);
    } else {
      throw parse_error("unexpected line before first block: " + *line);
    }
  }
  flush();
  if (static_cast<int>(comps.size()) != n) throw parse_error("map component count mismatch");
  try {
    return JetMap(n, J, std::move(comps));
  } catch (const std::invalid_argument& e) {
    throw parse_error(std::string("invalid map: ") + e.what());
  }
}

// --- point lists and curves ---------------------------------------------

inline std::vector<PPoint> read_points(std::istream& in) {
  std::vector<PPoint> pts;
  while (auto line = detail::next_line(in)) {
    std::vector<std::string> toks = detail::split_ws(*line);
    Vec x;
    for (const std::string& t : toks) x.push_back(parse_rat(t));
    try {
      pts.emplace_back(std::move(x));
    } catch (const std::invalid_argument& e) {
      throw parse_error(std::string("bad point: ") + e.what());
    }
    if (pts.size() > 1 && pts.back().dim() != pts.front().dim())
      throw parse_error("points of mixed dimension");
  }
  if (pts.empty()) throw parse_error("empty point file");
  return pts;
}

inline std::string write_rnc(const Rnc& c) {
  std::ostringstream out;
  for (std::size_t j = 0; j < c.basis.rows; ++j) {
    for (std::size_t k = 0; k < c.basis.cols; ++k) {
      if (k) out << ' ';
      out << rat_str(c.basis.at(j, k));
    }
    out << '\n';
  }
  return out.str();
}

inline CurveParam read_curve(std::istream& in) {
  auto header = detail::next_line(in);
  if (!header) throw parse_error("empty curve file");
  std::vector<std::string> toks = detail::split_ws(*header);
  if (toks.empty() || toks[0] != "curve") throw parse_error("expected curve header");
  int n = static_cast<int>(detail::kv_int(toks, "n"));
  int deg = static_cast<int>(detail::kv_int(toks, "deg"));
  std::vector<Vec> gamma;
  while (auto line = detail::next_line(in)) {
    std::vector<std::string> lt = detail::split_ws(*line);
    if (lt.size() < 2 || lt[0] != "gamma") throw parse_error("bad curve line: " + *line);
    Vec g;
    for (std::size_t i = 2; i < lt.size(); ++i) g.push_back(parse_rat(lt[i]));
    gamma.push_back(std::move(g));
  }
  try {
    return CurveParam(n, deg, std::move(gamma));
  } catch (const std::invalid_argument& e) {
    throw parse_error(std::string("invalid curve: ") + e.what());
  }
}

// --- relation space ------------------------------------------------------

inline std::string write_relations(const RelationSpace& rs) {
  std::ostringstream out;
  out << "relations n=" << rs.nvars << " d=" << rs.count << " J=" << rs.order
      << " dim=" << rs.dim() << '\n';
  out << "filtration";
  for (std::size_t v : rs.filtration) out << ' ' << v;
  out << '\n';
  for (std::size_t r = 0; r < rs.basis.size(); ++r) {
    out << "relation " << r + 1 << " valuation=" << rs.basis[r].valuation << '\n';
    for (int a = 0; a < rs.count; ++a) {
      out << "f " << a + 1 << ":";
      const UJet& f = rs.basis[r].f[static_cast<std::size_t>(a)];
      for (int k = 0; k <= f.order; ++k) out << ' ' << rat_str(f.coeff(k));
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace webgeom::io
