#pragma once

#include <string>
#include <vector>

namespace qsphere {

/// One verification record. `anchor` carries the mathematical claim being
/// checked, as a formula, so failures are self-describing.
struct CheckResult {
  std::string id;
  std::string anchor;
  bool pass = false;
  std::string residue;  // empty when pass
  double millis = 0.0;
};

struct Report {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  void append(const Report& o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
  }
  std::vector<std::string> failed_ids() const {
    std::vector<std::string> out;
    for (auto& c : checks)
      if (!c.pass) out.push_back(c.id);
    return out;
  }
};

}  // namespace qsphere
