#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "idpv/manifest.hpp"

namespace idpv {

struct RunOptions {
  std::optional<int> order;      // N
  std::optional<int> tdeg;       // K
  std::optional<int> deg;        // d
  std::optional<int> coeff_deg;  // e
  std::optional<int> zdeg;       // d_z
  std::optional<std::string> point;
  int threads = 1;
};

struct RunResult {
  int exit_code = 0;  // 0 all checks pass, 1 a check failed, 2 input error
  nlohmann::json report;
};

/// command is one of check, solve, pv, galois.
RunResult run(const std::string& command, const Manifest& m, const RunOptions& opts);
/// Reads and parses the manifest file, then runs; input errors become exit 2.
RunResult run_file(const std::string& command, const std::string& path, const RunOptions& opts);

std::string render_text(const nlohmann::json& report);
/// Sorted keys, two-space indent, trailing newline.
std::string render_structured(const nlohmann::json& report);

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace idpv
