// laurentlab command-line front end.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "laurentlab/run.hpp"

using namespace laurentlab;

namespace {

enum Exit { kOk = 0, kPropertyFail = 2, kUnknownStrict = 3, kConfig = 4 };

struct Flags {
  std::string file;
  std::string domain, window, properties, out, map;
  std::optional<std::size_t> max_d;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials, degree_cap;
  std::optional<unsigned> jobs;
  bool strict = false, allow_unknown = false;
  // subcommand specific
  std::string at, oracle;
  std::vector<std::string> points;
  std::optional<unsigned> n;
  std::string emit;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--domain", f.domain, "domain literal { kind = ... } or shorthand such as 'quadrant; mutate@(0,1)'");
  app->add_option("--window", f.window, "window literal { box = [[..],[..]] }, points '(1,2) (3,4)' or range 'lo..hi'");
  app->add_option("--max-d", f.max_d, "keep window points with d_H(h) <= max_d");
  app->add_option("--properties", f.properties, "comma list of laurent,units,coprime,irreducible");
  app->add_option("--seed", f.seed, "random seed");
  app->add_option("--trials", f.trials, "specialization trials for irreducibility");
  app->add_option("--degree-cap", f.degree_cap, "degree cap for univariate factorization");
  app->add_option("--jobs", f.jobs, "worker threads");
  app->add_flag("--strict", f.strict, "exit 3 when a verdict is Unknown");
  app->add_flag("--allow-unknown", f.allow_unknown, "count Unknown verdicts as acceptable");
  app->add_option("--out", f.out, "write the JSON report (diagram: .svg or text) to this path");
}

std::pair<RunConfig, EquationDef> configure(const Flags& f) {
  auto [rc, eq] = load_run(f.file);
  if (!f.domain.empty()) rc.domain = domain_argument(f.domain, rc.domain);
  if (!f.window.empty()) rc.window = window_argument(f.window);
  if (f.max_d) rc.max_d = f.max_d;
  if (!f.properties.empty()) rc.properties = parse_properties(f.properties);
  if (f.seed) rc.seed = *f.seed;
  if (f.trials) rc.trials = *f.trials;
  if (f.degree_cap) rc.degree_cap = *f.degree_cap;
  if (f.jobs) rc.jobs = *f.jobs;
  if (!f.map.empty()) rc.map = inline_literal(f.map);
  if (!f.out.empty()) rc.out = f.out;
  rc.strict = f.strict;
  rc.allow_unknown = f.allow_unknown;
  return {rc, eq};
}

void write_json(const RunConfig& rc, const json& j) {
  if (rc.out.empty()) return;
  std::ofstream o(rc.out);
  if (!o) throw ConfigError("cannot write " + rc.out, 0);
  o << j.dump(2) << "\n";
}

int verdict_exit(Verdict v, const RunConfig& rc) {
  if (v == Verdict::Fail) return kPropertyFail;
  if (v == Verdict::Unknown) {
    std::cerr << "warning: some verdicts are unknown\n";
    return rc.strict ? kUnknownStrict : kOk;
  }
  return kOk;
}

std::vector<json> point_list(const EquationDef& eq, const std::vector<LatticePoint>& v) {
  std::vector<json> out;
  for (const auto& p : v) out.push_back(point_json(eq, p));
  return out;
}

int cmd_validate(const Flags& f) {
  auto [rc, eq] = configure(f);
  AssumptionReport r = validate_equation(eq, {rc.trials, rc.degree_cap, rc.seed});
  json j;
  j["equation"] = eq.name;
  j["config"] = rc.to_json();
  j["items"] = json::array();
  for (const auto& i : r.items) {
    j["items"].push_back({{"name", i.name}, {"status", to_string(i.status)}, {"detail", i.detail}});
    std::cout << "  " << to_string(i.status) << "  " << i.name << (i.detail.empty() ? "" : ": " + i.detail) << "\n";
  }
  bool unknown = r.any(AssumptionItem::Status::Unknown);
  j["verdict"] = !r.passed() ? "fail" : unknown ? "unknown" : "pass";
  std::cout << eq.name << ": " << j["verdict"].get<std::string>() << "\n";
  write_json(rc, j);
  if (!r.passed()) return kConfig;
  if (unknown) {
    std::cerr << "warning: irreducibility of the rule is unknown\n";
    if (rc.strict && !rc.allow_unknown) return kUnknownStrict;
  }
  return kOk;
}

int cmd_iterate(const Flags& f) {
  auto [rc, eq] = configure(f);
  Domain H = domain_from_json(context_of(eq), rc.domain);
  auto w = window_from_json(eq, H, rc.window, rc.max_d);
  Evolution ev(eq, H);
  ev.register_boundary(w);
  json j;
  j["equation"] = eq.name;
  j["domain"] = H.describe();
  j["config"] = rc.to_json();
  j["points"] = json::array();
  bool all = true;
  for (const auto& p : w) {
    IterateResult r = ev.at(p);
    json e{{"point", point_json(eq, p)}};
    if (const auto* poly = std::get_if<LaurentPoly>(&r)) {
      e["value"] = ev.format(*poly);
      std::cout << eq.point_text(p) << " = " << ev.format(*poly) << "\n";
    } else {
      const auto& nl = std::get<NonLaurent>(r);
      all = false;
      e["non_laurent"] = {{"at", point_json(eq, nl.at)}, {"divisor", ev.format(nl.divisor)}};
      std::cout << eq.point_text(p) << " is not Laurent (division by " << ev.format(nl.divisor) << " fails at "
                << eq.point_text(nl.at) << ")\n";
    }
    j["points"].push_back(e);
  }
  write_json(rc, j);
  return all ? kOk : kPropertyFail;
}

int cmd_verify(const Flags& f) {
  auto [rc, eq] = configure(f);
  Domain H = domain_from_json(context_of(eq), rc.domain);
  auto w = window_from_json(eq, H, rc.window, rc.max_d);
  Evolution ev(eq, H);
  VerificationReport r = verify(ev, w, rc.verify_options());
  json j = to_json(ev, r);
  j["config"] = rc.to_json();
  j["overall"] = to_string(r.overall(rc.allow_unknown));
  std::cout << summary(ev, r) << "overall: " << j["overall"].get<std::string>() << "\n";
  write_json(rc, j);
  return verdict_exit(r.overall(rc.allow_unknown), rc);
}

int cmd_mutate(const Flags& f) {
  auto [rc, eq] = configure(f);
  DomainContext ctx = context_of(eq);
  Domain H = domain_from_json(ctx, rc.domain);
  LatticePoint h0 = detail::ambient_point(ctx, parse_point_token(f.at));
  const ShiftSystem& sys = *ctx.sys;
  Domain H2 = mutate(sys, H, h0);
  LatticePoint added = eq.spec.sub(h0, sys.minimum());
  auto w = window_from_json(eq, H, rc.window, rc.max_d);
  std::vector<LatticePoint> gained, lost, law_violations;
  for (const auto& p : w) {
    bool before = initial_boundary_contains(sys, H, p), after = H2.contains(p) && initial_boundary_contains(sys, H2, p);
    if (after && !before) gained.push_back(p);
    if (before && !after) lost.push_back(p);
    bool want = (before && p != h0) || p == added;
    if (after != want) law_violations.push_back(p);
  }
  if (H2.contains(added) && initial_boundary_contains(sys, H2, added) &&
      std::find(gained.begin(), gained.end(), added) == gained.end())
    gained.push_back(added);
  json j;
  j["equation"] = eq.name;
  j["config"] = rc.to_json();
  j["removed"] = point_json(eq, h0);
  j["added_boundary"] = point_json(eq, added);
  j["boundary_gained"] = point_list(eq, gained);
  j["boundary_lost"] = point_list(eq, lost);
  j["law_violations"] = point_list(eq, law_violations);
  j["mutated_domain"] = {{"kind", "mutate"}, {"base", rc.domain}, {"at", point_json(eq, h0)}};
  std::cout << "removed " << eq.point_text(h0) << ", new boundary point " << eq.point_text(added) << "\n";
  json d = json::array();
  for (const auto& s : f.points) {
    LatticePoint p = detail::ambient_point(ctx, parse_point_token(s));
    std::size_t before = d_capped(sys, H, p, 1000000), after = d_capped(sys, H2, p, 1000000);
    d.push_back({{"point", point_json(eq, p)}, {"d_before", before}, {"d_after", after}});
    std::cout << "d(" << eq.point_text(p) << "): " << before << " -> " << after << "\n";
  }
  j["d"] = d;
  std::cout << "boundary update law " << (law_violations.empty() ? "holds" : "fails") << " on " << w.size()
            << " window points\n";
  write_json(rc, j);
  return law_violations.empty() ? kOk : kPropertyFail;
}

int cmd_reduce(const Flags& f) {
  auto [rc, eq] = configure(f);
  if (!rc.map) throw ConfigError("reduce needs a map (run file 'map' or --map)", 0);
  LatticeMap phi = map_from_json(eq.spec, *rc.map);
  ReducedEquation red = reduce_equation(phi, eq);
  if (f.properties.empty()) rc.properties = {"laurent"};
  DomainContext tctx = context_of(red.eq);
  Domain target = domain_from_json(tctx, f.domain.empty() ? json{{"kind", "quadrant"}} : rc.domain);
  auto w = window_from_json(red.eq, target, rc.window, rc.max_d);
  Evolution ev(red.eq, target);
  VerificationReport r = verify(ev, w, rc.verify_options());
  FactoredLaurent cert = certify_laurent_factored(red.eq, target, w);
  std::string text = equation_to_text(red.eq);
  json j = to_json(ev, r);
  j["config"] = rc.to_json();
  j["images"] = point_list(red.eq, red.check.images);
  j["flags"] = red.flags;
  j["reduced_equation"] = text;
  j["factored_certificate"] = {{"verdict", to_string(cert.verdict())}, {"unknown", point_list(red.eq, cert.unknown)}};
  j["overall"] = to_string(r.overall(rc.allow_unknown));
  std::cout << text;
  for (const auto& fl : red.flags) std::cout << "note: " << fl << "\n";
  std::cout << summary(ev, r) << "overall: " << j["overall"].get<std::string>() << "\n";
  if (!f.emit.empty()) {
    std::ofstream o(f.emit);
    if (!o) throw ConfigError("cannot write " + f.emit, 0);
    o << text;
  }
  write_json(rc, j);
  return verdict_exit(r.overall(rc.allow_unknown), rc);
}

int cmd_oracle(const Flags& f) {
  const std::string& name = f.oracle;
  unsigned n = f.n.value_or(name == "lyness-reduction" ? 12 : 20);
  OracleReport rep;
  RunConfig rc;
  if (!f.out.empty()) rc.out = f.out;
  if (name == "monomial-formula") {
    rep = verify_monomial_formula(n);
  } else if (name == "lyness-reduction") {
    rep = lyness_reduction_check(n);
  } else if (name == "growth") {
    GrowthCheck g = superlinearity(n);
    rep.oracle = "growth";
    rep.pass = g.superlinear && g.in_band;
    rep.checked = 1;
    rep.data = {{"n", n}, {"E_half", g.at_half}, {"E_n", g.at_n}, {"E_double", g.at_double}, {"ratio", g.ratio},
                {"superlinear", g.superlinear}, {"in_band", g.in_band}};
  } else if (name == "numeric" || name == "factored-laurent" || name == "commutation") {
    if (f.file.empty()) throw ConfigError("oracle " + name + " needs an equation or run file", 0);
    auto [cfg, eq] = configure(f);
    rc = cfg;
    if (name == "commutation") {
      if (!rc.map) throw ConfigError("commutation needs a map", 0);
      LatticeMap phi = map_from_json(eq.spec, *rc.map);
      ReducedEquation red = reduce_equation(phi, eq);
      DomainContext tctx = context_of(red.eq);
      Domain target = domain_from_json(tctx, {{"kind", "quadrant"}});
      Domain lifted = lift_domain(phi, target);
      std::vector<LatticePoint> w = window_from_json(eq, lifted, rc.window, rc.max_d);
      CommutationReport c = commutation_check(phi, eq, target, w, rc.seed);
      rep.oracle = "commutation";
      rep.pass = c.pass();
      rep.checked = c.points;
      rep.data = {{"singular_draws", c.singular_draws}, {"seed", rc.seed}, {"mismatches", point_list(eq, c.mismatches)}};
    } else {
      Domain H = domain_from_json(context_of(eq), rc.domain);
      auto w = window_from_json(eq, H, rc.window, rc.max_d);
      if (name == "numeric") {
        Evolution ev(eq, H);
        rep = numeric_consistency(ev, w, rc.seed);
      } else {
        FactoredLaurent c = certify_laurent_factored(eq, H, w);
        rep.oracle = "factored_laurent";
        rep.pass = c.verdict() == Verdict::Pass;
        rep.checked = w.size();
        rep.data = {{"atoms", c.atoms.size()}, {"unknown", point_list(eq, c.unknown)}};
        if (!c.unknown.empty()) {
          // the certificate is sufficient only, so a miss is Unknown rather than Fail
          json j = rep.to_json();
          j["verdict"] = "unknown";
          std::cout << "factored_laurent: unknown at " << c.unknown.size() << " of " << w.size() << " points\n";
          write_json(rc, j);
          return verdict_exit(Verdict::Unknown, rc);
        }
      }
    }
  } else {
    throw ConfigError("unknown oracle '" + name +
                          "' (monomial-formula, lyness-reduction, growth, numeric, factored-laurent, commutation)",
                      0);
  }
  json j = rep.to_json();
  std::cout << rep.oracle << ": " << (rep.pass ? "pass" : "fail") << " (" << rep.checked << " checked)"
            << (rep.detail.empty() ? "" : ", " + rep.detail) << "\n";
  write_json(rc, j);
  return rep.pass ? kOk : kPropertyFail;
}

int cmd_diagram(const Flags& f) {
  auto [rc, eq] = configure(f);
  DomainContext ctx = context_of(eq);
  Domain H = domain_from_json(ctx, rc.domain);
  std::size_t r = static_cast<std::size_t>(eq.spec.rank());
  Box box{std::vector<long>(r, 0), std::vector<long>(r, 7)};
  if (rc.window.contains("box")) {
    auto b = rc.window.at("box").get<std::vector<std::vector<long>>>();
    if (b.size() != 2 || b[0].size() != r || b[1].size() != r) throw ConfigError("diagram box needs two corners", 0);
    box = Box{b[0], b[1]};
  }
  std::optional<LatticePoint> mark;
  if (!f.points.empty()) mark = detail::ambient_point(ctx, parse_point_token(f.points.front()));
  Diagram d = render_diagram(eq, H, box, mark);
  std::string ascii = diagram_ascii(d);
  std::cout << ascii;
  if (mark) std::cout << "past cone of " << eq.point_text(*mark) << ": " << d.cone << " points\n";
  if (!rc.out.empty()) {
    std::ofstream o(rc.out);
    if (!o) throw ConfigError("cannot write " + rc.out, 0);
    bool svg = rc.out.size() >= 4 && rc.out.substr(rc.out.size() - 4) == ".svg";
    o << (svg ? diagram_svg(d) : ascii);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"laurentlab: lattice equations and the Laurent property"};
  app.require_subcommand(1);
  Flags f;

  auto* validate = app.add_subcommand("validate", "check the standing assumptions of an equation");
  auto* iterate = app.add_subcommand("iterate", "print iterates on a window");
  auto* verifyc = app.add_subcommand("verify", "verify Laurent, unit, coprime and irreducibility properties");
  auto* mutatec = app.add_subcommand("mutate", "mutate a domain at a minimal point and check the boundary update");
  auto* reduce = app.add_subcommand("reduce", "reduce an equation along a lattice map");
  auto* oracle = app.add_subcommand("oracle", "run an independent oracle");
  auto* diagram = app.add_subcommand("diagram", "draw a domain, its initial boundary and a past cone");

  for (auto* sc : {validate, iterate, verifyc, mutatec, reduce, diagram}) {
    sc->add_option("file", f.file, "equation (.eq) or run file")->required();
    add_common(sc, f);
  }
  mutatec->add_option("at", f.at, "point to remove, e.g. 0,1")->required();
  mutatec->add_option("--point", f.points, "report d before and after at this point");
  reduce->add_option("--map", f.map, "map literal { matrix = [[..]], torsion_images = [] }");
  reduce->add_option("--emit", f.emit, "write the reduced equation file here");
  diagram->add_option("--point", f.points, "mark the past cone of this point");
  oracle->add_option("name", f.oracle, "monomial-formula | lyness-reduction | growth | numeric | factored-laurent | commutation")
      ->required();
  oracle->add_option("file", f.file, "equation or run file (numeric, factored-laurent, commutation)");
  oracle->add_option("--n", f.n, "largest index for the seven-term oracles");
  oracle->add_option("--map", f.map, "map literal for commutation");
  add_common(oracle, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }

  try {
    if (*validate) return cmd_validate(f);
    if (*iterate) return cmd_iterate(f);
    if (*verifyc) return cmd_verify(f);
    if (*mutatec) return cmd_mutate(f);
    if (*reduce) return cmd_reduce(f);
    if (*oracle) return cmd_oracle(f);
    if (*diagram) return cmd_diagram(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
