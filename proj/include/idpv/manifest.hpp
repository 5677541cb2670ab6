#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "idpv/idmodule.hpp"

namespace idpv {

struct Bounds {
  int N = 16;
  int K = 8;
  int d = 3;
  int e = 2;
  int d_z = 3;
};

/// Input description for the command line tool. Expressions are stored in
/// canonical text, so serialize(parse(serialize(m))) == serialize(m).
struct Manifest {
  enum class ModuleKind { A, D, Radicand };

  std::uint64_t characteristic = 0;
  std::string base_kind = "poly";  // "poly" or "localized"
  std::vector<std::string> inverted;

  int rank = 1;
  ModuleKind module_kind = ModuleKind::D;
  std::vector<std::vector<std::string>> matrix;  // A (polynomial in T) or D
  unsigned radicand_m = 0;
  std::string radicand_numerator;

  struct Cover {
    std::vector<std::string> x;
    std::vector<int> n;
    std::vector<std::string> a;
    std::vector<std::vector<std::vector<std::string>>> bases;
  };
  std::optional<Cover> cover;

  std::string point = "0";
  Bounds bounds;
  /// mu_k for diagonal invariants; 0 is the whole multiplicative group.
  std::optional<unsigned> subgroup;
};

/// Parses and validates. Throws ParseError (with line and column) for bad
/// JSON or expressions and SemanticError for well-formed but invalid input.
Manifest parse_manifest(std::string_view text);

nlohmann::json manifest_to_json(const Manifest& m);
std::string serialize_manifest(const Manifest& m);

struct Instance {
  Field field;
  IdRing base;
  IdModule module;
  std::optional<LocalCoverData> cover;
  Scalar point;
};

/// Builds the ring, module (A known to T-order `order`) and cover.
Instance instantiate(const Manifest& m, int order);

}  // namespace idpv
