#pragma once

#include <string>
#include <vector>

namespace ordkit {

// Structured verdict emitted by verification operations. `detail` carries a
// witness on failure (or a short derivation note on success).
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string title;
  std::vector<Check> checks;

  void add(const std::string& name, bool pass, const std::string& detail = "") {
    checks.push_back({name, pass, detail});
  }
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
};

}  // namespace ordkit
