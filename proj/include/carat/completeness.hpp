#pragma once

#include <string>
#include <vector>

#include "carat/geom.hpp"

namespace carat::completeness {

struct Witness {
  int axis = 0;                     // 1-based coordinate
  std::string kind;                 // "axis_violation" or "unbounded_domain"
  std::vector<double> ray;          // certified LP recession direction
  std::vector<int> blocking_rows;   // rows with a_j < 0 (axis_violation only)
  bool reduced_infeasible = false;  // axis slice had empty interior
};

struct CompletenessReport {
  std::string verdict;  // "c_complete" | "not_c_complete" | "not_applicable"
  bool bounded = false;
  std::vector<geom::AxisStatus> axis_results;
  std::vector<Witness> witnesses;
};

// Bounded domains: complete iff every coordinate hyperplane touched by the closure
// is met by the domain itself. Unbounded domains are out of certified scope.
CompletenessReport zwonek_check(const geom::ReinhardtDomain& D);

}  // namespace carat::completeness
