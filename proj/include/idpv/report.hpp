#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace idpv {

/// One failed instance of a law: which sample, at which indices (i, j or a
/// series cell), and the two sides that disagree.
struct Violation {
  std::string law;
  std::string sample;
  std::vector<long long> indices;
  std::string lhs;
  std::string rhs;
};

/// Outcome of a verification. Only the first kMaxStored violations are kept
/// verbatim; `failures` counts all of them.
class CheckReport {
 public:
  static constexpr std::size_t kMaxStored = 20;

  explicit CheckReport(std::string name = {}) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  bool passed() const noexcept { return failures_ == 0; }
  std::size_t checks() const noexcept { return checks_; }
  std::size_t failures() const noexcept { return failures_; }
  const std::vector<Violation>& violations() const noexcept { return violations_; }

  void count(std::size_t n = 1) { checks_ += n; }
  void fail(Violation v) {
    ++failures_;
    if (violations_.size() < kMaxStored) violations_.push_back(std::move(v));
  }
  /// Records one comparison; returns whether it held.
  bool expect(bool ok, Violation v) {
    ++checks_;
    if (!ok) fail(std::move(v));
    return ok;
  }
  void absorb(const CheckReport& other) {
    checks_ += other.checks_;
    failures_ += other.failures_;
    for (const auto& v : other.violations_) {
      if (violations_.size() < kMaxStored) violations_.push_back(v);
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json out;
    out["law"] = name_;
    out["passed"] = passed();
    out["checks"] = checks_;
    out["failures"] = failures_;
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& v : violations_) {
      vs.push_back({{"law", v.law}, {"sample", v.sample}, {"indices", v.indices}, {"lhs", v.lhs}, {"rhs", v.rhs}});
    }
    out["violations"] = vs;
    return out;
  }

 private:
  std::string name_;
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::vector<Violation> violations_;
};

}  // namespace idpv
