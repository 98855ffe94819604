#pragma once

// Run configuration: domain, window and map literals read from TOML-like
// tables, the shorthand accepted by --domain, and an ASCII/SVG renderer for
// two-dimensional domain diagrams. Points in literals use the ambient
// coordinates of the equation file; boxes and functionals use lattice
// coordinates.

#include <filesystem>
#include <sstream>

#include "laurentlab/dynamics.hpp"
#include "laurentlab/reduction.hpp"
#include "laurentlab/verify.hpp"

namespace laurentlab {

struct DomainContext {
  LatticeSpec spec;
  LatticeFrame frame;
  std::optional<ShiftSystem> sys;  // needed by mutate and future
};

inline DomainContext context_of(const EquationDef& eq) { return {eq.spec, eq.frame, eq.system()}; }

namespace detail {

inline mpq_class rational_of(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_string()) {
    mpq_class q;
    if (q.set_str(j.get<std::string>(), 10) != 0) throw ConfigError("not a rational: " + j.get<std::string>(), 0);
    q.canonicalize();
    return q;
  }
  throw ConfigError("expected an integer or a rational string, got " + j.dump(), 0);
}

inline LatticePoint ambient_point(const DomainContext& ctx, const json& j) {
  try {
    return ctx.frame.from_ambient(ctx.spec, j.get<std::vector<long>>());
  } catch (const LatticeError& e) {
    throw ConfigError(std::string(e.what()) + " in " + j.dump(), 0);
  } catch (const json::exception&) {
    throw ConfigError("expected a point, got " + j.dump(), 0);
  }
}

inline const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + " needs '" + key + "'", 0);
  return j.at(key);
}

}  // namespace detail

// map = { matrix = [[2,3]], torsion_images = [], target = { rank = 1, torsion = [] } }
inline LatticeMap map_from_json(const LatticeSpec& source, const json& j) {
  if (!j.is_object()) throw ConfigError("map must be a table", 0);
  auto rows = detail::need(j, "matrix", "map").get<std::vector<std::vector<long>>>();
  auto torsion = j.value("torsion_images", std::vector<std::vector<long>>{});
  LatticeSpec target(static_cast<int>(rows.size()), {});
  if (j.contains("target")) {
    const json& t = j.at("target");
    auto tor = t.value("torsion", std::vector<long>{});
    int rank = t.value("rank", static_cast<int>(rows.size() - tor.size()));
    target = LatticeSpec(rank, tor);
  }
  try {
    return LatticeMap::from_matrix(source, target, rows, torsion);
  } catch (const LatticeError& e) {
    throw ConfigError(std::string("map: ") + e.what(), 0);
  }
}

// Kinds: quadrant, halfspace, intersection, translate, mutate, lift, future.
inline Domain domain_from_json(const DomainContext& ctx, const json& j) {
  if (!j.is_object()) throw ConfigError("domain literal must be a table, got " + j.dump(), 0);
  std::string kind = detail::need(j, "kind", "domain").get<std::string>();
  if (kind == "quadrant") {
    std::vector<Domain> parts;
    for (int i = 0; i < ctx.spec.rank(); ++i) {
      std::vector<mpq_class> w(static_cast<std::size_t>(ctx.spec.rank()), 0);
      w[static_cast<std::size_t>(i)] = 1;
      parts.push_back(Domain::half_space(ctx.spec, w, 0));
    }
    Domain q = Domain::intersection(parts);
    if (j.contains("corner")) return Domain::translate(q, detail::ambient_point(ctx, j.at("corner")));
    return q;
  }
  if (kind == "halfspace") {
    std::vector<mpq_class> w;
    for (const auto& x : detail::need(j, "w", "halfspace")) w.push_back(detail::rational_of(x));
    if (w.size() != static_cast<std::size_t>(ctx.spec.rank()))
      throw ConfigError("halfspace.w needs " + std::to_string(ctx.spec.rank()) + " entries", 0);
    return Domain::half_space(ctx.spec, w, j.contains("c") ? detail::rational_of(j.at("c")) : mpq_class(0));
  }
  if (kind == "intersection") {
    std::vector<Domain> parts;
    for (const auto& p : detail::need(j, "parts", "intersection")) parts.push_back(domain_from_json(ctx, p));
    if (parts.empty()) throw ConfigError("intersection needs at least one part", 0);
    return Domain::intersection(parts);
  }
  if (kind == "translate") {
    return Domain::translate(domain_from_json(ctx, detail::need(j, "base", "translate")),
                             detail::ambient_point(ctx, detail::need(j, "by", "translate")));
  }
  if (kind == "mutate") {
    if (!ctx.sys) throw ConfigError("mutate needs the shifts of an equation", 0);
    Domain base = domain_from_json(ctx, detail::need(j, "base", "mutate"));
    const json& at = detail::need(j, "at", "mutate");
    // Either one point or a list of points applied in order.
    std::vector<json> seq = at.size() && at.at(0).is_array() ? at.get<std::vector<json>>() : std::vector<json>{at};
    for (const auto& p : seq) base = mutate(*ctx.sys, base, detail::ambient_point(ctx, p));
    return base;
  }
  if (kind == "lift") {
    LatticeMap m = map_from_json(ctx.spec, detail::need(j, "map", "lift"));
    DomainContext target{m.target(), LatticeFrame{}, std::nullopt};
    if (!m.well_defined() || !m.surjective()) throw ConfigError("lift needs a well-defined surjective map", 0);
    return Domain::lift(m, domain_from_json(target, detail::need(j, "base", "lift")));
  }
  if (kind == "future") {
    if (!ctx.sys) throw ConfigError("future needs the shifts of an equation", 0);
    std::vector<LatticePoint> gens;
    for (const auto& p : detail::need(j, "gens", "future")) gens.push_back(detail::ambient_point(ctx, p));
    return Domain::future_cones(*ctx.sys, gens);
  }
  throw ConfigError("unknown domain kind '" + kind + "'", 0);
}

// Reads an inline table given on the command line, e.g. { kind = "quadrant" }.
inline json inline_literal(const std::string& text) {
  json doc = parse_config("value = " + text + "\n");
  return doc.at("value");
}

inline json parse_point_token(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == '(' || c == ')') c = ' ';
  json p = json::array();
  std::stringstream ss(t);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      long v = std::stol(part, &used);
      if (part.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(part);
      p.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad point '" + s + "'", 0);
    }
  }
  if (p.empty()) throw ConfigError("bad point '" + s + "'", 0);
  return p;
}

// --domain accepts an inline table or a sequence such as
// "quadrant; mutate@(0,0); mutate@(1,0)". A sequence starting with a
// modifier applies to `base`.
inline json domain_argument(const std::string& arg, const json& base) {
  std::string s = arg;
  auto l = s.find_first_not_of(" \t");
  if (l == std::string::npos) throw ConfigError("empty --domain", 0);
  if (s[l] == '{') return inline_literal(s.substr(l));
  json cur = base;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    auto a = tok.find_first_not_of(" \t"), b = tok.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    tok = tok.substr(a, b - a + 1);
    auto at = tok.find('@');
    std::string head = tok.substr(0, at);
    if (at == std::string::npos) {
      if (head == "quadrant") {
        cur = {{"kind", "quadrant"}};
        continue;
      }
      throw ConfigError("unknown domain token '" + tok + "'", 0);
    }
    json p = parse_point_token(tok.substr(at + 1));
    if (head == "mutate") {
      cur = {{"kind", "mutate"}, {"base", cur}, {"at", p}};
    } else if (head == "translate") {
      cur = {{"kind", "translate"}, {"base", cur}, {"by", p}};
    } else if (head == "quadrant") {
      cur = {{"kind", "quadrant"}, {"corner", p}};
    } else {
      throw ConfigError("unknown domain token '" + tok + "'", 0);
    }
  }
  return cur;
}

// window = { points = [[..], ..] } or { box = [[lo..], [hi..]], max_d = 30 }.
// Without a window, the box [0, 9]^rank is used (or [0, max_d - 1]^rank).
inline std::vector<LatticePoint> window_from_json(const EquationDef& eq, const Domain& H, const json& j,
                                                  std::optional<std::size_t> max_d) {
  DomainContext ctx = context_of(eq);
  if (j.is_object() && j.contains("max_d") && !max_d) max_d = j.at("max_d").get<std::size_t>();
  if (j.is_object() && j.contains("points")) {
    std::vector<LatticePoint> out;
    for (const auto& p : j.at("points")) {
      LatticePoint q = detail::ambient_point(ctx, p);
      if (!H.contains(q)) throw ConfigError("window point " + p.dump() + " is outside the domain", 0);
      if (max_d && d_capped(*ctx.sys, H, q, *max_d) > *max_d) continue;
      out.push_back(q);
    }
    return out;
  }
  std::size_t r = static_cast<std::size_t>(eq.spec.rank());
  Box box{std::vector<long>(r, 0), std::vector<long>(r, max_d ? static_cast<long>(*max_d) - 1 : 9)};
  if (j.is_object() && j.contains("box")) {
    auto b = j.at("box").get<std::vector<std::vector<long>>>();
    if (b.size() != 2 || b[0].size() != r || b[1].size() != r)
      throw ConfigError("window.box needs two corners with " + std::to_string(r) + " coordinates", 0);
    box = Box{b[0], b[1]};
  } else if (j.is_object() && j.contains("range")) {
    auto lh = j.at("range").get<std::vector<long>>();
    if (lh.size() != 2) throw ConfigError("window.range needs [lo, hi]", 0);
    box = Box{std::vector<long>(r, lh[0]), std::vector<long>(r, lh[1])};
  } else if (j.is_object() && !j.empty() && !j.contains("max_d")) {
    throw ConfigError("window needs 'points', 'box', 'range' or 'max_d'", 0);
  }
  return window_points(*ctx.sys, H, box, max_d);
}

// --window accepts an inline table, a list of points "(1,2) (3,4)", or a
// range "lo..hi" meaning the cube [lo, hi]^rank.
inline json window_argument(const std::string& arg) {
  auto l = arg.find_first_not_of(" \t");
  if (l == std::string::npos) throw ConfigError("empty --window", 0);
  if (arg[l] == '{') return inline_literal(arg.substr(l));
  auto dots = arg.find("..");
  if (dots != std::string::npos) {
    try {
      long lo = std::stol(arg.substr(0, dots)), hi = std::stol(arg.substr(dots + 2));
      return {{"range", {lo, hi}}};
    } catch (const std::exception&) {
      throw ConfigError("bad range '" + arg + "'", 0);
    }
  }
  json pts = json::array();
  std::size_t i = 0;
  while ((i = arg.find('(', i)) != std::string::npos) {
    auto k = arg.find(')', i);
    if (k == std::string::npos) throw ConfigError("unbalanced '(' in --window", 0);
    pts.push_back(parse_point_token(arg.substr(i, k - i + 1)));
    i = k + 1;
  }
  if (pts.empty()) throw ConfigError("bad --window '" + arg + "'", 0);
  return {{"points", pts}};
}

struct RunConfig {
  std::string equation_path;
  json domain = {{"kind", "quadrant"}};
  json window = json::object();
  std::optional<std::size_t> max_d;
  std::set<std::string> properties{"laurent", "units", "coprime", "irreducible"};
  std::uint64_t seed = 1;
  int trials = 20;
  int degree_cap = 12;
  unsigned jobs = 1;
  bool strict = false;
  bool allow_unknown = false;
  std::optional<json> map;
  std::string out;

  json to_json() const {
    json j;
    j["equation"] = equation_path;
    j["domain"] = domain;
    j["window"] = window;
    j["max_d"] = max_d ? json(*max_d) : json(nullptr);
    j["properties"] = properties;
    j["seed"] = seed;
    j["trials"] = trials;
    j["degree_cap"] = degree_cap;
    j["jobs"] = jobs;
    j["strict"] = strict;
    j["allow_unknown"] = allow_unknown;
    j["map"] = map ? *map : json(nullptr);
    j["out"] = out;
    return j;
  }

  VerifyOptions verify_options() const {
    VerifyOptions o;
    o.properties = properties;
    o.seed = seed;
    o.trials = trials;
    o.degree_cap = degree_cap;
    o.jobs = jobs;
    return o;
  }
};

inline const std::set<std::string>& known_properties() {
  static const std::set<std::string> k{"laurent", "units", "coprime", "irreducible"};
  return k;
}

inline std::set<std::string> parse_properties(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string p;
  while (std::getline(ss, p, ',')) {
    auto a = p.find_first_not_of(" \t"), b = p.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    p = p.substr(a, b - a + 1);
    if (!known_properties().count(p)) throw ConfigError("unknown property '" + p + "'", 0);
    out.insert(p);
  }
  if (out.empty()) throw ConfigError("no properties selected", 0);
  return out;
}

// A file with an `equation` key is a run file; anything else is read as an
// equation file with the defaults above. Run files may also carry the
// equation inline under `rule`.
inline std::pair<RunConfig, EquationDef> load_run(const std::string& path) {
  json doc = parse_config(read_file(path));
  RunConfig rc;
  EquationDef eq;
  if (doc.contains("equation")) {
    std::filesystem::path p(doc.at("equation").get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(path).parent_path() / p;
    rc.equation_path = p.string();
    eq = load_equation(rc.equation_path);
  } else {
    rc.equation_path = path;
    eq = equation_from_json(doc);
  }
  if (doc.contains("domain")) rc.domain = doc.at("domain");
  if (doc.contains("window")) rc.window = doc.at("window");
  if (doc.contains("max_d")) rc.max_d = doc.at("max_d").get<std::size_t>();
  if (doc.contains("properties")) {
    std::string joined;
    for (const auto& p : doc.at("properties")) joined += p.get<std::string>() + ",";
    rc.properties = parse_properties(joined);
  }
  if (doc.contains("seed")) rc.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("trials")) rc.trials = doc.at("trials").get<int>();
  if (doc.contains("degree_cap")) rc.degree_cap = doc.at("degree_cap").get<int>();
  if (doc.contains("jobs")) rc.jobs = doc.at("jobs").get<unsigned>();
  if (doc.contains("map")) rc.map = doc.at("map");
  if (doc.contains("out")) rc.out = doc.at("out").get<std::string>();
  return {rc, eq};
}

// Domain diagram over a 2-D box (1-D lattices draw a single row). Torsion
// coordinates are collapsed: a cell counts as a member if any sheet is.
struct Diagram {
  std::vector<long> lo, hi;
  std::vector<std::string> rows;  // top row = largest second coordinate
  std::size_t members = 0, boundary = 0, cone = 0;
};

// Cell codes: '.' outside, 'o' member, '#' initial boundary, '*' past cone of
// the marked point, '@' the marked point.
inline Diagram render_diagram(const EquationDef& eq, const Domain& H, const Box& box,
                              std::optional<LatticePoint> mark) {
  ShiftSystem sys = eq.system();
  if (eq.spec.rank() < 1 || eq.spec.rank() > 2) throw ConfigError("diagrams need a lattice of rank 1 or 2", 0);
  std::set<LatticePoint> cone;
  if (mark) {
    if (!H.contains(*mark)) throw ConfigError("marked point is outside the domain", 0);
    for (const auto& p : past_cone(sys, H, *mark).points) cone.insert(p);
  }
  Diagram d{box.lo, box.hi, {}, 0, 0, 0};
  bool two = eq.spec.rank() == 2;
  long ylo = two ? box.lo[1] : 0, yhi = two ? box.hi[1] : 0;
  if (box.hi[0] < box.lo[0] || yhi < ylo) return d;
  std::size_t sheets = 1;
  for (long t : eq.spec.torsion()) sheets *= static_cast<std::size_t>(t);
  for (long y = yhi; y >= ylo; --y) {
    std::string row;
    for (long x = box.lo[0]; x <= box.hi[0]; ++x) {
      char c = '.';
      for (std::size_t s = 0; s < sheets; ++s) {
        std::vector<long> coords{x};
        if (two) coords.push_back(y);
        std::size_t rest = s;
        for (long t : eq.spec.torsion()) {
          coords.push_back(static_cast<long>(rest % static_cast<std::size_t>(t)));
          rest /= static_cast<std::size_t>(t);
        }
        LatticePoint p = eq.spec.point(coords);
        if (!H.contains(p)) continue;
        char here = initial_boundary_contains(sys, H, p) ? '#' : 'o';
        if (cone.count(p)) here = (mark && p == *mark) ? '@' : '*';
        auto rank = [](char ch) { return std::string(".o#*@").find(ch); };
        if (rank(here) > rank(c)) c = here;
      }
      if (c != '.') ++d.members;
      if (c == '#') ++d.boundary;
      if (c == '*' || c == '@') ++d.cone;
      row += c;
    }
    d.rows.push_back(row);
  }
  return d;
}

inline std::string diagram_ascii(const Diagram& d) {
  std::string s;
  for (const auto& r : d.rows) s += r + "\n";
  return s;
}

inline std::string diagram_svg(const Diagram& d) {
  const int cell = 24;
  std::size_t w = d.rows.empty() ? 0 : d.rows[0].size(), h = d.rows.size();
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * cell + cell << "\" height=\"" << h * cell + cell
    << "\">\n";
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      char ch = d.rows[r][c];
      if (ch == '.') continue;
      std::size_t cx = c * cell + cell, cy = r * cell + cell;
      const char* fill = ch == '#' ? "black" : ch == '@' ? "red" : ch == '*' ? "gray" : "white";
      o << "  <circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"7\" fill=\"" << fill << "\" stroke=\"black\"/>\n";
    }
  o << "</svg>\n";
  return o.str();
}

}  // namespace laurentlab
