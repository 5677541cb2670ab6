#include "idpv/manifest.hpp"

#include <set>

#include "idpv/expr_parser.hpp"

namespace idpv {

namespace {

using nlohmann::json;

struct Context {
  std::string_view text;

  [[noreturn]] void semantic(const std::string& path, const std::string& msg) const {
    throw Error(Errc::SemanticError, path + ": " + msg);
  }

  std::pair<int, int> line_col(std::size_t offset) const {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  // Position of an expression string inside the manifest text (first match).
  std::string where(const std::string& raw, int expr_column) const {
    const std::size_t at = text.find("\"" + raw + "\"");
    if (at == std::string_view::npos) return "";
    const auto [line, col] = line_col(at + 1 + static_cast<std::size_t>(expr_column - 1));
    return "line " + std::to_string(line) + ", column " + std::to_string(col) + " ";
  }

  Expr expression(const json& v, const std::string& path) const {
    std::string raw;
    if (v.is_string()) {
      raw = v.get<std::string>();
    } else if (v.is_number_integer()) {
      raw = std::to_string(v.get<long long>());
    } else {
      semantic(path, "expected an expression string");
    }
    try {
      return parse_expression(raw);
    } catch (const Error& e) {
      throw Error(Errc::ParseError, where(raw, column_of(e)) + "(" + path + ") " + strip(e.what()));
    }
  }

  template <class F>
  auto evaluate(const json& v, const std::string& path, F&& f) const {
    const Expr e = expression(v, path);
    try {
      return f(e);
    } catch (const Error& err) {
      if (err.code() == Errc::ParseError) {
        const std::string raw = v.is_string() ? v.get<std::string>() : std::to_string(v.get<long long>());
        throw Error(Errc::ParseError, where(raw, column_of(err)) + "(" + path + ") " + strip(err.what()));
      }
      throw Error(Errc::SemanticError, path + ": " + err.what());
    }
  }

  static int column_of(const Error& e) {
    const std::string w = strip(e.what());
    if (w.rfind("column ", 0) != 0) return 1;
    return std::stoi(w.substr(7));
  }

  static std::string strip(const std::string& what) {
    const std::string prefix = "ParseError: ";
    return what.rfind(prefix, 0) == 0 ? what.substr(prefix.size()) : what;
  }
};

long long get_int(const Context& cx, const json& v, const std::string& path, long long lo) {
  if (!v.is_number_integer()) cx.semantic(path, "expected an integer");
  const long long x = v.get<long long>();
  if (x < lo) cx.semantic(path, "must be at least " + std::to_string(lo));
  return x;
}

void only_keys(const Context& cx, const json& obj, const std::string& path, const std::set<std::string>& keys) {
  if (!obj.is_object()) cx.semantic(path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!keys.count(k)) cx.semantic(path, "unknown key '" + k + "'");
  }
}

// Accepts the short form {char, base: "poly", D: [[...]], N, ...}; m and
// numerator describe a radicand (numerator t by default), and a nonempty
// inverted list without a kind means a localized base.
json normalize(const Context& cx, json j) {
  if (!j.is_object()) cx.semantic("manifest", "expected a JSON object");
  json out = json::object();
  json field = j.contains("field") ? j["field"] : json::object();
  json base = j.contains("base") ? j["base"] : json::object();
  json module = j.contains("module") ? j["module"] : json::object();
  json bounds = j.contains("bounds") ? j["bounds"] : json::object();
  if (base.is_string()) base = json{{"kind", base}};
  for (const auto& [k, v] : j.items()) {
    if (k == "field" || k == "base" || k == "module" || k == "bounds" || k == "cover" || k == "point" || k == "subgroup") continue;
    if (k == "char") {
      field["char"] = v;
    } else if (k == "inverted") {
      base["inverted"] = v;
    } else if (k == "A" || k == "D" || k == "radicand" || k == "rank") {
      module[k] = v;
    } else if (k == "m" || k == "numerator") {
      module["radicand"][k] = v;
    } else if (k == "N" || k == "K" || k == "d" || k == "e" || k == "d_z") {
      bounds[k] = v;
    } else {
      cx.semantic("manifest", "unknown key '" + k + "'");
    }
  }
  if (j.contains("m") && !module["radicand"].contains("numerator")) module["radicand"]["numerator"] = "t";
  if (base.is_object() && !base.contains("kind") && base.contains("inverted") && !base["inverted"].empty()) {
    base["kind"] = "localized";
  }
  out["field"] = field;
  out["base"] = base;
  out["module"] = module;
  out["bounds"] = bounds;
  if (j.contains("cover")) out["cover"] = j["cover"];
  if (j.contains("point")) out["point"] = j["point"];
  if (j.contains("subgroup")) out["subgroup"] = j["subgroup"].is_object() ? j["subgroup"] : json{{"mu", j["subgroup"]}};
  return out;
}

std::vector<std::vector<std::string>> read_matrix(const Context& cx, const json& v, const std::string& path, int& rank) {
  if (!v.is_array() || v.empty()) cx.semantic(path, "expected a nonempty square matrix");
  const int r = static_cast<int>(v.size());
  if (rank > 0 && rank != r) cx.semantic(path, "matrix size " + std::to_string(r) + " does not match rank " + std::to_string(rank));
  rank = r;
  std::vector<std::vector<std::string>> out;
  for (int i = 0; i < r; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != r) cx.semantic(path, "expected a square matrix");
    std::vector<std::string> cells;
    for (const auto& c : row) cells.push_back(c.is_string() ? c.get<std::string>() : c.dump());
    out.push_back(std::move(cells));
  }
  return out;
}

std::string cell_path(const std::string& base, std::size_t i, std::size_t j) {
  return base + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

Field make_field(std::uint64_t p) {
  try {
    return Field(p);
  } catch (const Error& e) {
    throw Error(Errc::SemanticError, std::string("field.char: ") + e.what());
  }
}

}  // namespace

Manifest parse_manifest(std::string_view text) {
  const Context cx{text};
  json raw;
  try {
    raw = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = cx.line_col(e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    const std::size_t cut = msg.find("syntax error");
    if (cut != std::string::npos) msg = msg.substr(cut);
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
  }
  const json j = normalize(cx, raw);
  Manifest m;

  only_keys(cx, j["field"], "field", {"char"});
  if (!j["field"].contains("char")) cx.semantic("field", "missing 'char'");
  m.characteristic = static_cast<std::uint64_t>(get_int(cx, j["field"]["char"], "field.char", 0));
  const Field f = make_field(m.characteristic);

  only_keys(cx, j["base"], "base", {"kind", "inverted"});
  m.base_kind = j["base"].value("kind", std::string("poly"));
  if (m.base_kind != "poly" && m.base_kind != "localized") cx.semantic("base.kind", "expected \"poly\" or \"localized\"");
  std::vector<Poly> inverted;
  if (j["base"].contains("inverted")) {
    const json& inv = j["base"]["inverted"];
    if (!inv.is_array()) cx.semantic("base.inverted", "expected a list of polynomials");
    if (m.base_kind == "poly" && !inv.empty()) cx.semantic("base.inverted", "only a localized base inverts polynomials");
    for (std::size_t i = 0; i < inv.size(); ++i) {
      const std::string path = "base.inverted[" + std::to_string(i) + "]";
      const Poly g = cx.evaluate(inv[i], path, [&](const Expr& e) { return expr_to_poly(e, f); });
      if (g.is_zero()) cx.semantic(path, "cannot invert zero");
      inverted.push_back(g);
      m.inverted.push_back(g.to_string("t"));
    }
  }
  const IdRing base = m.base_kind == "poly" ? IdRing::polynomial(f) : IdRing::localized(f, inverted);

  const json& mod = j["module"];
  only_keys(cx, mod, "module", {"rank", "A", "D", "radicand"});
  const int kinds = static_cast<int>(mod.contains("A")) + static_cast<int>(mod.contains("D")) + static_cast<int>(mod.contains("radicand"));
  if (kinds != 1) cx.semantic("module", "exactly one of A, D, radicand is required");
  int rank = mod.contains("rank") ? static_cast<int>(get_int(cx, mod["rank"], "module.rank", 1)) : 0;
  if (mod.contains("radicand")) {
    const json& rad = mod["radicand"];
    only_keys(cx, rad, "module.radicand", {"m", "numerator"});
    if (!rad.contains("m") || !rad.contains("numerator")) cx.semantic("module.radicand", "needs 'm' and 'numerator'");
    if (rank > 1) cx.semantic("module.rank", "a radicand module has rank 1");
    rank = 1;
    m.module_kind = Manifest::ModuleKind::Radicand;
    m.radicand_m = static_cast<unsigned>(get_int(cx, rad["m"], "module.radicand.m", 1));
    const BaseElem num = cx.evaluate(rad["numerator"], "module.radicand.numerator", [&](const Expr& e) { return expr_to_base(e, base); });
    m.radicand_numerator = base_to_text(num);
  } else {
    const bool is_a = mod.contains("A");
    const std::string path = is_a ? "module.A" : "module.D";
    m.module_kind = is_a ? Manifest::ModuleKind::A : Manifest::ModuleKind::D;
    const auto cells = read_matrix(cx, mod[is_a ? "A" : "D"], path, rank);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::vector<std::string> row;
      for (std::size_t k = 0; k < cells.size(); ++k) {
        const json v = cells[i][k];
        const std::string p = cell_path(path, i, k);
        if (is_a) {
          row.push_back(base_poly_to_text(cx.evaluate(v, p, [&](const Expr& e) { return expr_to_base_poly(e, base); })));
        } else {
          row.push_back(base_to_text(cx.evaluate(v, p, [&](const Expr& e) { return expr_to_base(e, base); })));
        }
      }
      m.matrix.push_back(std::move(row));
    }
  }
  m.rank = rank;

  if (j.contains("cover")) {
    const json& c = j["cover"];
    only_keys(cx, c, "cover", {"x", "n", "a", "bases"});
    if (!c.contains("x") || !c.contains("n") || !c.contains("a")) cx.semantic("cover", "needs 'x', 'n' and 'a'");
    if (!c["x"].is_array() || !c["n"].is_array() || !c["a"].is_array() || c["x"].size() != c["n"].size() ||
        c["x"].size() != c["a"].size() || c["x"].empty()) {
      cx.semantic("cover", "'x', 'n' and 'a' must be lists of the same nonzero length");
    }
    Manifest::Cover cover;
    for (std::size_t i = 0; i < c["x"].size(); ++i) {
      const std::string s = std::to_string(i);
      cover.x.push_back(cx.evaluate(c["x"][i], "cover.x[" + s + "]", [&](const Expr& e) { return expr_to_poly(e, f); }).to_string("t"));
      cover.n.push_back(static_cast<int>(get_int(cx, c["n"][i], "cover.n[" + s + "]", 0)));
      cover.a.push_back(base_to_text(cx.evaluate(c["a"][i], "cover.a[" + s + "]", [&](const Expr& e) { return expr_to_base(e, base); })));
    }
    if (c.contains("bases")) {
      const json& bs = c["bases"];
      if (!bs.is_array() || bs.size() != c["x"].size()) cx.semantic("cover.bases", "expected one matrix per piece");
      for (std::size_t i = 0; i < bs.size(); ++i) {
        const std::string path = "cover.bases[" + std::to_string(i) + "]";
        int r = rank;
        const auto cells = read_matrix(cx, bs[i], path, r);
        std::vector<std::vector<std::string>> mat;
        for (std::size_t p = 0; p < cells.size(); ++p) {
          std::vector<std::string> row;
          for (std::size_t q = 0; q < cells.size(); ++q) {
            row.push_back(base_to_text(cx.evaluate(json(cells[p][q]), cell_path(path, p, q), [&](const Expr& e) { return expr_to_base(e, base); })));
          }
          mat.push_back(std::move(row));
        }
        cover.bases.push_back(std::move(mat));
      }
    }
    m.cover = std::move(cover);
  }

  if (j.contains("point")) {
    const json& pt = j["point"];
    const std::string s = pt.is_string() ? pt.get<std::string>() : pt.dump();
    try {
      m.point = Scalar::parse(s, f).to_string();
    } catch (const Error& e) {
      cx.semantic("point", e.what());
    }
  }

  const json& b = j["bounds"];
  only_keys(cx, b, "bounds", {"N", "K", "d", "e", "d_z"});
  if (b.contains("N")) m.bounds.N = static_cast<int>(get_int(cx, b["N"], "bounds.N", 1));
  if (b.contains("K")) m.bounds.K = static_cast<int>(get_int(cx, b["K"], "bounds.K", 1));
  if (b.contains("d")) m.bounds.d = static_cast<int>(get_int(cx, b["d"], "bounds.d", 1));
  if (b.contains("e")) m.bounds.e = static_cast<int>(get_int(cx, b["e"], "bounds.e", 0));
  if (b.contains("d_z")) m.bounds.d_z = static_cast<int>(get_int(cx, b["d_z"], "bounds.d_z", 1));

  if (j.contains("subgroup")) {
    only_keys(cx, j["subgroup"], "subgroup", {"mu"});
    m.subgroup = static_cast<unsigned>(get_int(cx, j["subgroup"]["mu"], "subgroup.mu", 0));
    if (m.rank != 1) cx.semantic("subgroup", "diagonal subgroups are supported for rank 1 only");
  }

  // Semantic checks that need the built objects.
  const Instance inst = instantiate(m, 2);
  if (inst.cover) {
    const CheckReport rep = validate_cover(*inst.cover, inst.module);
    if (!rep.passed()) {
      const Violation& v = rep.violations().front();
      cx.semantic("cover", v.law + " (" + v.sample + ")");
    }
  }
  return m;
}

Instance instantiate(const Manifest& m, int order) {
  const Field f = make_field(m.characteristic);
  std::vector<Poly> inverted;
  for (const auto& s : m.inverted) inverted.push_back(parse_poly(s, f));
  const IdRing base = m.base_kind == "poly" ? IdRing::polynomial(f) : IdRing::localized(f, inverted);
  const int r = m.rank;
  auto build = [&]() -> IdModule {
    switch (m.module_kind) {
      case Manifest::ModuleKind::A: {
        std::vector<std::vector<std::vector<BaseElem>>> cells(static_cast<std::size_t>(r));
        int top = 0;
        for (int i = 0; i < r; ++i) {
          for (int k = 0; k < r; ++k) {
            cells[static_cast<std::size_t>(i)].push_back(
                expr_to_base_poly(parse_expression(m.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]), base));
            top = std::max(top, static_cast<int>(cells[static_cast<std::size_t>(i)].back().size()) - 1);
          }
        }
        MatSeries<BaseElem> a(r, r, top);
        for (int n = 0; n <= top; ++n) a[n] = BaseMatrix::Constant(r, r, BaseElem(0));
        for (int i = 0; i < r; ++i) {
          for (int k = 0; k < r; ++k) {
            const auto& c = cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
            for (std::size_t n = 0; n < c.size(); ++n) a[static_cast<int>(n)](i, k) = c[n];
          }
        }
        return make_module(base, a, true);
      }
      case Manifest::ModuleKind::D: {
        if (m.characteristic != 0) {
          throw Error(Errc::SemanticError,
                      "module.D: the derivation-matrix builder divides by n + 1 and needs characteristic 0; give A or a radicand");
        }
        BaseMatrix d(r, r);
        for (int i = 0; i < r; ++i) {
          for (int k = 0; k < r; ++k) d(i, k) = parse_base(m.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], base);
        }
        return from_derivation_matrix(base, d, order);
      }
      case Manifest::ModuleKind::Radicand:
        return radicand_module(base, parse_base(m.radicand_numerator, base), m.radicand_m, order);
    }
    throw Error(Errc::SemanticError, "module: unknown kind");
  };
  std::optional<IdModule> module;
  try {
    module = build();
  } catch (const Error& e) {
    if (e.code() == Errc::SemanticError) throw;
    throw Error(Errc::SemanticError, std::string("module: ") + e.what());
  }
  const CheckReport valid = validate_module(*module);
  if (!valid.passed()) {
    const Violation& v = valid.violations().front();
    throw Error(Errc::SemanticError, "module: " + v.law + " (" + v.sample + ")");
  }
  std::optional<LocalCoverData> cover;
  if (m.cover) {
    LocalCoverData c;
    for (std::size_t i = 0; i < m.cover->x.size(); ++i) {
      c.x.push_back(parse_poly(m.cover->x[i], f));
      c.n.push_back(m.cover->n[i]);
      c.a.push_back(parse_base(m.cover->a[i], base));
    }
    for (const auto& mat : m.cover->bases) {
      BaseMatrix b(r, r);
      for (int i = 0; i < r; ++i) {
        for (int k = 0; k < r; ++k) b(i, k) = parse_base(mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], base);
      }
      c.bases.push_back(b);
    }
    cover = std::move(c);
  }
  return Instance{f, base, *module, cover, Scalar::parse(m.point, f)};
}

nlohmann::json manifest_to_json(const Manifest& m) {
  json j;
  j["field"] = {{"char", m.characteristic}};
  j["base"] = {{"kind", m.base_kind}, {"inverted", m.inverted}};
  json mod = {{"rank", m.rank}};
  switch (m.module_kind) {
    case Manifest::ModuleKind::A:
      mod["A"] = m.matrix;
      break;
    case Manifest::ModuleKind::D:
      mod["D"] = m.matrix;
      break;
    case Manifest::ModuleKind::Radicand:
      mod["radicand"] = {{"m", m.radicand_m}, {"numerator", m.radicand_numerator}};
      break;
  }
  j["module"] = mod;
  if (m.cover) {
    json c = {{"x", m.cover->x}, {"n", m.cover->n}, {"a", m.cover->a}};
    if (!m.cover->bases.empty()) c["bases"] = m.cover->bases;
    j["cover"] = c;
  }
  j["point"] = m.point;
  j["bounds"] = {{"N", m.bounds.N}, {"K", m.bounds.K}, {"d", m.bounds.d}, {"e", m.bounds.e}, {"d_z", m.bounds.d_z}};
  if (m.subgroup) j["subgroup"] = {{"mu", *m.subgroup}};
  return j;
}

std::string serialize_manifest(const Manifest& m) { return manifest_to_json(m).dump(2) + "\n"; }

}  // namespace idpv
