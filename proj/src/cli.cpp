#include "idpv/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "idpv/expr_parser.hpp"
#include "idpv/pvgalois.hpp"

namespace idpv {

namespace {

using nlohmann::json;

json series_json(const Series& s) {
  json out = json::array();
  for (int i = 0; i <= s.order(); ++i) out.push_back(s[i].to_string());
  return out;
}

json poly_json(const Poly& p) {
  json out = json::array();
  for (const auto& c : p.coeffs()) out.push_back(c.to_string());
  return out;
}

json relation_json(const RelPoly& r, const std::vector<std::string>& names) {
  json terms = json::array();
  for (const auto& [m, c] : r.sorted_terms()) terms.push_back({{"monomial", m}, {"coefficients", poly_json(c)}});
  return {{"text", relpoly_to_string(r, names)}, {"terms", terms}};
}

json equation_json(const MPoly<Scalar>& e, const std::vector<std::string>& names) {
  json terms = json::array();
  for (const auto& [m, c] : e.sorted_terms()) terms.push_back({{"monomial", m}, {"coefficient", c.to_string()}});
  return {{"text", equation_to_string(e, names)}, {"terms", terms}};
}

json relations_json(const RelationSet& rs) {
  json rel = json::array();
  for (const auto& r : rs.relations) rel.push_back(relation_json(r, rs.symbols));
  json red = json::array();
  for (const auto& r : rs.reduced) red.push_back(relation_json(r, rs.symbols));
  return {{"symbols", rs.symbols},
          {"generators", rel},
          {"reduced", red},
          {"kernel_dim", rs.kernel_dim},
          {"bounds", {{"d", rs.d}, {"e", rs.e}}},
          {"certified_to", rs.order}};
}

class Runner {
 public:
  Runner(const Manifest& m, const RunOptions& o) : m_(m), opts_(o) {}

  json checks = json::object();
  json payload = json::object();
  bool passed = true;

  void add(const std::string& name, const CheckReport& r) {
    checks[name] = r.to_json();
    passed = passed && r.passed();
  }

  void check() {
    const Bounds& b = m_.bounds;
    const Instance inst = instantiate(m_, std::max(b.N, 2 * b.K));
    const IdRing& base = inst.base;
    std::vector<BaseElem> samples{base.t(), base.from_poly(parse_poly("t^3 - 2*t + 1", inst.field))};
    for (std::size_t i = 0; i < (base.inverted() ? base.inverted()->size() : 0); ++i) {
      samples.push_back(base.inverse_of(i));
      samples.push_back(base.t() * base.inverse_of(i) * base.inverse_of(i));
    }
    add("base_iteration_rule", check_iteration_rule(base, samples, b.K));
    add("base_homomorphism", check_homomorphism(base, samples[0], samples.back(), b.K));
    add("module_valid", validate_module(inst.module));
    add("module_iteration_rule", check_module_iteration(inst.module, b.K));
    add("cocycle", check_cocycle(inst.module, b.K, b.K));
    if (inst.cover) add("cover", validate_cover(*inst.cover, inst.module));
    payload["rank"] = inst.module.rank();
    payload["A"] = a_json(inst.module, b.K);
  }

  void solve() {
    const Bounds& b = m_.bounds;
    const Instance inst = instantiate(m_, b.N);
    const FundamentalMatrix f = fundamental_matrix(inst.module, inst.point, b.N);
    add("constant_basis", verify_constant_basis(inst.module, f, b.K));
    json fm = json::array();
    for (Eigen::Index i = 0; i < f.f.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < f.f.cols(); ++k) row.push_back(series_json(f.f.entry(i, k)));
      fm.push_back(row);
    }
    payload["F"] = fm;
    payload["point"] = f.point.to_string();
    payload["certified_to"] = f.order;
  }

  void pv() {
    const Bounds& b = m_.bounds;
    const Instance inst = instantiate(m_, b.N);
    const PvPresentation p = pv_generators(inst.module, inst.cover, inst.point, b.N);
    const RelationSet rs = mine_relations(p, b.d, b.e, opts_.threads);
    json images = json::object();
    for (std::size_t i = 0; i < p.symbols.size(); ++i) images[p.symbols[i]] = series_json(p.images[i]);
    payload["presentation"] = {{"symbols", p.symbols}, {"images", images}, {"cover", p.is_cover()}, {"point", p.point.to_string()}};
    if (p.is_cover()) {
      json wp = json::array();
      for (const auto& a : p.wide_partition) wp.push_back(a.to_string("t"));
      payload["presentation"]["partition"] = wp;
    }
    payload["relations"] = relations_json(rs);
    add("relations_vanish", vanish(p, rs));
    add("id_stable_ideal", check_id_stable_ideal(rs, p, b.K));
    if (p.is_cover()) {
      const PvPresentation pf = pv_generators(inst.module, std::nullopt, inst.point, b.N);
      const RelationSet fr = mine_relations(pf, b.d, b.e, opts_.threads);
      add("cover_matches_free", compare_presentations(fr, pf, rs, p));
    }
  }

  void galois() {
    const Bounds& b = m_.bounds;
    const Instance inst = instantiate(m_, b.N);
    const PvPresentation p = pv_generators(inst.module, inst.cover, inst.point, b.N);
    const RelationSet rs = mine_relations(p, b.d, b.e, opts_.threads);
    payload["relations"] = relations_json(rs);
    add("relations_vanish", vanish(p, rs));

    const GroupEquations g = stabilizer_equations(rs, p, b.d_z);
    json eqs = json::array();
    for (const auto& e : g.equations) eqs.push_back(equation_json(e, g.variables));
    payload["group"] = {{"variables", g.variables}, {"equations", eqs}, {"rank", g.rank}};
    if (g.equations.empty()) payload["group"]["note"] = "no equations up to the degree bound";
    CheckReport id("identity satisfies the group equations");
    id.expect(g.identity_ok, {"identity in the zero set", "Z = 1", {}, g.identity_ok ? "0" : "nonzero", "0"});
    add("group_identity", id);

    std::optional<PvPresentation> free;
    std::optional<RelationSet> free_rs;
    if (p.is_cover()) {
      free = pv_generators(inst.module, std::nullopt, inst.point, b.N);
      free_rs = mine_relations(*free, b.d, b.e, opts_.threads);
    }
    const PvPresentation& pf = free ? *free : p;
    const RelationSet& rf = free_rs ? *free_rs : rs;
    const TensorConstants tc = tensor_constants_check(pf, rf, b.d, b.K);
    add("tensor_constants", tc.report);
    payload["tensor_constants"] = {{"dimension", tc.dimension}, {"basis", tc.basis}, {"degree", b.d}};

    if (g.rank == 1) {
      const Poly gen = group_generator(g);
      payload["group"]["generator"] = {{"text", gen.is_zero() ? "0" : gen.to_string("z")}, {"coefficients", poly_json(gen)}};
      const unsigned k = gen.is_zero() ? 0u : static_cast<unsigned>(gen.degree());
      const DiagonalInvariants full = diagonal_invariants(rf, pf, k, b.d);
      CheckReport base_only("invariants of the mined group lie in the base ring");
      base_only.expect(full.only_base, {"invariant monomials reduce to base elements", "mu_" + std::to_string(k), {},
                                        full.only_base ? "base" : join(full.generators), "base"});
      add("full_group_invariants", base_only);
    }
    if (m_.subgroup) {
      const DiagonalInvariants inv = diagonal_invariants(rf, pf, *m_.subgroup, b.d);
      json j = {{"subgroup", "mu_" + std::to_string(*m_.subgroup)},
                {"generators", inv.generators},
                {"weights", inv.weights},
                {"only_base", inv.only_base}};
      if (inv.relations) j["relations"] = relations_json(*inv.relations);
      payload["invariants"] = j;
    }
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
    return s;
  }

  static CheckReport vanish(const PvPresentation& p, const RelationSet& rs) {
    CheckReport r("relations vanish on the images");
    for (std::size_t i = 0; i < rs.relations.size(); ++i) {
      const Series s = evaluate(p, rs.relations[i]);
      r.expect(s.is_zero(), {"evaluation is zero to the certified order", relpoly_to_string(rs.relations[i], rs.symbols),
                             {static_cast<long long>(i)}, s.is_zero() ? "0" : "nonzero", "0"});
    }
    return r;
  }

  static json a_json(const IdModule& m, int k) {
    const MatSeries<BaseElem> a = m.a_to(k);
    json out = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        json cell = json::array();
        for (int n = 0; n <= k; ++n) cell.push_back(a[n](i, j).to_string());
        row.push_back(cell);
      }
      out.push_back(row);
    }
    return out;
  }

  const Manifest& m_;
  const RunOptions& opts_;
};

Manifest with_overrides(Manifest m, const RunOptions& o) {
  if (o.order) m.bounds.N = *o.order;
  if (o.tdeg) m.bounds.K = *o.tdeg;
  if (o.deg) m.bounds.d = *o.deg;
  if (o.coeff_deg) m.bounds.e = *o.coeff_deg;
  if (o.zdeg) m.bounds.d_z = *o.zdeg;
  if (o.point) m.point = *o.point;
  // Re-validate through the canonical form so overrides obey the same rules.
  return parse_manifest(serialize_manifest(m));
}

json error_report(const std::string& command, const std::string& code, const std::string& message) {
  return {{"command", command}, {"error", {{"code", code}, {"message", message}}}, {"passed", false}};
}

}  // namespace

RunResult run(const std::string& command, const Manifest& input, const RunOptions& opts) {
  RunResult res;
  try {
    const Manifest m = with_overrides(input, opts);
    Runner r(m, opts);
    if (command == "check") {
      r.check();
    } else if (command == "solve") {
      r.solve();
    } else if (command == "pv") {
      r.pv();
    } else if (command == "galois") {
      r.galois();
    } else {
      res.exit_code = 2;
      res.report = error_report(command, "UnknownCommand", "expected check, solve, pv or galois");
      return res;
    }
    res.report = {{"command", command}, {"inputs", manifest_to_json(m)}, {"checks", r.checks}, {"payload", r.payload},
                  {"passed", r.passed}};
    res.exit_code = r.passed ? 0 : 1;
  } catch (const Error& e) {
    res.exit_code = 2;
    res.report = error_report(command, std::string(errc_name(e.code())), e.what());
  }
  return res;
}

RunResult run_file(const std::string& command, const std::string& path, const RunOptions& opts) {
  std::ifstream in(path);
  if (!in) {
    RunResult r;
    r.exit_code = 2;
    r.report = error_report(command, "IoError", "cannot read " + path);
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return run(command, parse_manifest(ss.str()), opts);
  } catch (const Error& e) {
    RunResult r;
    r.exit_code = 2;
    r.report = error_report(command, std::string(errc_name(e.code())), e.what());
    return r;
  }
}

std::string render_structured(const json& report) { return report.dump(2) + "\n"; }

std::string render_text(const json& report) {
  std::ostringstream os;
  const std::string cmd = report.value("command", std::string("?"));
  if (report.contains("error")) {
    os << "idpv " << cmd << ": error " << report["error"]["code"].get<std::string>() << "\n  "
       << report["error"]["message"].get<std::string>() << "\n";
    return os.str();
  }
  os << "idpv " << cmd << ": " << (report["passed"].get<bool>() ? "PASS" : "FAIL") << "\n";
  for (const auto& [name, c] : report["checks"].items()) {
    os << "  [" << (c["passed"].get<bool>() ? "pass" : "FAIL") << "] " << name << " (" << c["checks"].get<long long>()
       << " checks, " << c["failures"].get<long long>() << " failures)\n";
    for (const auto& v : c["violations"]) {
      os << "      " << v["law"].get<std::string>() << ": " << v["sample"].get<std::string>() << " lhs=" << v["lhs"].get<std::string>()
         << " rhs=" << v["rhs"].get<std::string>() << "\n";
    }
  }
  const json& p = report["payload"];
  if (p.contains("F")) {
    os << "  F to order " << p["certified_to"].get<int>() << " at t = " << p["point"].get<std::string>() << "\n";
    for (std::size_t i = 0; i < p["F"].size(); ++i) {
      for (std::size_t k = 0; k < p["F"][i].size(); ++k) {
        os << "    F[" << i << "][" << k << "] =";
        for (const auto& c : p["F"][i][k]) os << " " << c.get<std::string>();
        os << "\n";
      }
    }
  }
  if (p.contains("presentation")) {
    os << "  symbols:";
    for (const auto& s : p["presentation"]["symbols"]) os << " " << s.get<std::string>();
    os << "\n";
  }
  auto relations = [&](const json& r, const std::string& indent) {
    os << indent << "relations (d=" << r["bounds"]["d"].get<int>() << ", e=" << r["bounds"]["e"].get<int>()
       << ", certified to order " << r["certified_to"].get<int>() << "):\n";
    for (const auto& x : r["generators"]) os << indent << "  " << x["text"].get<std::string>() << "\n";
  };
  if (p.contains("relations")) relations(p["relations"], "  ");
  if (p.contains("group")) {
    os << "  group equations:";
    if (p["group"]["equations"].empty()) os << " none up to the degree bound";
    os << "\n";
    for (const auto& e : p["group"]["equations"]) os << "    " << e["text"].get<std::string>() << "\n";
    if (p["group"].contains("generator")) os << "  generator: " << p["group"]["generator"]["text"].get<std::string>() << "\n";
  }
  if (p.contains("tensor_constants")) {
    os << "  constants of the tensor model: dimension " << p["tensor_constants"]["dimension"].get<int>() << ", basis";
    for (const auto& s : p["tensor_constants"]["basis"]) os << " " << s.get<std::string>();
    os << "\n";
  }
  if (p.contains("invariants")) {
    const json& inv = p["invariants"];
    os << "  invariants of " << inv["subgroup"].get<std::string>() << ":";
    if (inv["only_base"].get<bool>()) os << " base ring only";
    for (const auto& s : inv["generators"]) os << " " << s.get<std::string>();
    os << "\n";
    if (inv.contains("relations")) relations(inv["relations"], "    ");
  }
  return os.str();
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterative derivations, Picard-Vessiot rings and Galois group equations"};
  app.require_subcommand(1);
  std::string path;
  std::string format = "structured";
  RunOptions opts;
  int order = 0;
  int tdeg = 0;
  int deg = 0;
  int coeff_deg = -1;
  int zdeg = 0;
  std::string point;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"check", "verify the iteration rule, the module and the cocycle identity"},
      {"solve", "fundamental solution matrix at the point"},
      {"pv", "Picard-Vessiot generators and their relations"},
      {"galois", "stabilizer equations, tensor constants and invariants"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("manifest", path, "manifest file (JSON)")->required();
    sub->add_option("--format", format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    sub->add_option("--order", order, "series order N")->check(CLI::PositiveNumber);
    sub->add_option("--tdeg", tdeg, "order K in T")->check(CLI::PositiveNumber);
    sub->add_option("--deg", deg, "symbol degree bound d")->check(CLI::PositiveNumber);
    sub->add_option("--coeff-deg", coeff_deg, "coefficient degree bound e")->check(CLI::NonNegativeNumber);
    sub->add_option("--zdeg", zdeg, "degree bound d_z for group equations")->check(CLI::PositiveNumber);
    sub->add_option("--point", point, "expansion point c");
    sub->add_option("--threads", opts.threads, "threads for relation mining")->check(CLI::PositiveNumber);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (order > 0) opts.order = order;
  if (tdeg > 0) opts.tdeg = tdeg;
  if (deg > 0) opts.deg = deg;
  if (coeff_deg >= 0) opts.coeff_deg = coeff_deg;
  if (zdeg > 0) opts.zdeg = zdeg;
  if (!point.empty()) opts.point = point;
  const std::string command = app.get_subcommands().front()->get_name();
  const RunResult r = run_file(command, path, opts);
  out << (format == "text" ? render_text(r.report) : render_structured(r.report));
  if (r.exit_code == 2) err << r.report["error"]["message"].get<std::string>() << "\n";
  return r.exit_code;
}

}  // namespace idpv
