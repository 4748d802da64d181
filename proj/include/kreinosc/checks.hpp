#pragma once
#include <string>
#include <vector>

namespace kreinosc {

// One verified identity: descriptive name, the guard depth the check ran
// under (0 = whole truncated space / exact symbol identity), and the largest
// residual found.
struct IdentityCheck {
  std::string identity;
  int guard = 0;
  double max_residual = 0.0;
};

inline double worst_residual(const std::vector<IdentityCheck>& checks) {
  double w = 0.0;
  for (const auto& c : checks) w = std::max(w, c.max_residual);
  return w;
}

}  // namespace kreinosc
