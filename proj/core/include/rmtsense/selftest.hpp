#pragma once

#include <string>
#include <vector>

namespace rmtsense {

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;

  bool passed() const;
};

/// Oracle identities across the library: quadrature against closed forms, the
/// k = 1 and k = 2 density anchors, density normalization, the Q-function round
/// trip, a 2x2 eigenvalue check against the characteristic polynomial, and the
/// LRT statistic against trace minus log-determinant.
SelftestReport run_selftest();

}  // namespace rmtsense
