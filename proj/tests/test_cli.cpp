#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "idpv/cli.hpp"

using namespace idpv;

namespace {

std::string manifest_path(const std::string& name) { return std::string(IDPV_EXAMPLES_DIR) + "/" + name + ".json"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Errc code_of(std::string_view text) {
  try {
    parse_manifest(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return Errc::ParseError;
}

std::string message_of(std::string_view text) {
  try {
    parse_manifest(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

struct Proc {
  int status = -1;
  std::string out;
};

Proc run_binary(const std::string& args) {
  Proc p;
  const std::string cmd = std::string(IDPV_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  p.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return p;
}

}  // namespace

TEST_CASE("minimal and shorthand manifests") {
  const Manifest m = parse_manifest(R"({"char": 0, "base": "poly", "D": [[1]], "N": 8})");
  CHECK(m.characteristic == 0);
  CHECK(m.base_kind == "poly");
  CHECK(m.module_kind == Manifest::ModuleKind::D);
  CHECK(m.matrix == std::vector<std::vector<std::string>>{{"1"}});
  CHECK(m.bounds.N == 8);
  CHECK(m.bounds.K == 8);
  CHECK(m.bounds.d_z == 3);

  const Manifest r = parse_manifest(R"({"char": 5, "m": 3, "inverted": ["t"], "point": 1})");
  CHECK(r.characteristic == 5);
  CHECK(r.base_kind == "localized");
  CHECK(r.module_kind == Manifest::ModuleKind::Radicand);
  CHECK(r.radicand_m == 3);
  CHECK(r.point == "1");
}

TEST_CASE("D-builder in positive characteristic is rejected") {
  const std::string text = R"({"char": 5, "base": "poly", "D": [[1]]})";
  CHECK(code_of(text) == Errc::SemanticError);
  CHECK(message_of(text).find("characteristic 0") != std::string::npos);
}

TEST_CASE("parse errors carry positions") {
  CHECK(code_of("{\"char\": 0,\n  \"D\": [[1]]\n  oops}") == Errc::ParseError);
  CHECK(message_of("{\"char\": 0,\n  \"D\": [[1]]\n  oops}").find("line 3") != std::string::npos);

  const std::string bad_expr = "{\"char\": 0,\n \"D\": [[\"t + * 2\"]]}";
  CHECK(code_of(bad_expr) == Errc::ParseError);
  const std::string msg = message_of(bad_expr);
  CHECK(msg.find("line 2") != std::string::npos);
  CHECK(msg.find("column") != std::string::npos);

  CHECK(code_of(R"({"char": 0, "D": [[1]], "colour": 3})") == Errc::SemanticError);
  CHECK(code_of(R"({"char": 4, "D": [[1]]})") == Errc::SemanticError);
  CHECK(code_of(R"({"char": 0, "D": [[1]], "A": [["1"]]})") == Errc::SemanticError);
  CHECK(code_of(R"({"char": 0, "D": [[1]], "N": -1})") == Errc::SemanticError);
  CHECK(code_of(R"({"char": 0, "D": [["1/t"]]})") == Errc::ParseError);
}

TEST_CASE("canonical serialization round-trips") {
  for (const char* name : {"exp", "trivial", "radicand3", "radicand3_char5", "radicand6", "badpoint", "cover_exp", "airy", "exp_sum"}) {
    CAPTURE(name);
    const Manifest m = parse_manifest(read_file(manifest_path(name)));
    const std::string s = serialize_manifest(m);
    CHECK(serialize_manifest(parse_manifest(s)) == s);
  }
  const Manifest odd = parse_manifest(R"j({"char": 0, "inverted": ["t", "t - 1"], "D": [["(t^2 - t) / 2 + 3/(t^2 - t)"]]})j");
  const std::string s = serialize_manifest(odd);
  CHECK(serialize_manifest(parse_manifest(s)) == s);
}

TEST_CASE("check on exp") {
  const RunResult r = run_file("check", manifest_path("exp"), {});
  CHECK(r.exit_code == 0);
  CHECK(r.report["passed"] == true);
  CHECK(r.report["checks"]["base_iteration_rule"]["passed"] == true);
  CHECK(r.report["checks"]["cocycle"]["passed"] == true);
  CHECK(r.report["checks"]["module_iteration_rule"]["passed"] == true);
}

TEST_CASE("galois on the cube root radicand") {
  const RunResult r = run_file("galois", manifest_path("radicand3"), {});
  CHECK(r.exit_code == 0);
  CHECK(render_structured(r.report).find("z^3 - 1") != std::string::npos);
  CHECK(render_text(r.report).find("z^3 - 1") != std::string::npos);
}

TEST_CASE("solve at a bad point is an input error") {
  const RunResult r = run_file("solve", manifest_path("badpoint"), {});
  CHECK(r.exit_code == 2);
  CHECK(r.report["error"]["code"] == "BadPoint");
  RunOptions moved;
  moved.point = "2";
  CHECK(run_file("solve", manifest_path("badpoint"), moved).exit_code == 0);
  CHECK(run_file("solve", manifest_path("missing"), {}).exit_code == 2);
}

TEST_CASE("overrides and bounds errors") {
  RunOptions low;
  low.order = 6;
  const RunResult r = run_file("pv", manifest_path("exp"), low);
  CHECK(r.exit_code == 2);
  CHECK(r.report["error"]["code"] == "InsufficientOrder");
  RunOptions o;
  o.order = 12;
  const RunResult s = run_file("solve", manifest_path("exp"), o);
  CHECK(s.exit_code == 0);
  CHECK(s.report["inputs"]["bounds"]["N"] == 12);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  for (const char* cmd : {"pv", "galois"}) {
    CAPTURE(cmd);
    RunOptions one;
    RunOptions four;
    four.threads = 4;
    const std::string a = render_structured(run_file(cmd, manifest_path("radicand3"), one).report);
    const std::string b = render_structured(run_file(cmd, manifest_path("radicand3"), one).report);
    const std::string c = render_structured(run_file(cmd, manifest_path("radicand3"), four).report);
    CHECK(a == b);
    CHECK(a == c);
  }
}

TEST_CASE("command line binary") {
  const Proc ok = run_binary("check " + manifest_path("exp"));
  CHECK(ok.status == 0);
  CHECK(ok.out.find("\"passed\": true") != std::string::npos);
  const Proc text = run_binary("pv " + manifest_path("exp") + " --format text");
  CHECK(text.status == 0);
  CHECK(text.out.find("g0*g1 - 1") != std::string::npos);
  const Proc bad = run_binary("solve " + manifest_path("badpoint"));
  CHECK(bad.status == 2);
  CHECK(bad.out.find("BadPoint") != std::string::npos);
  CHECK(run_binary("frobnicate " + manifest_path("exp")).status == 2);
  const Proc a = run_binary("galois " + manifest_path("exp") + " --threads 1");
  const Proc b = run_binary("galois " + manifest_path("exp") + " --threads 3");
  CHECK(a.out == b.out);
}
