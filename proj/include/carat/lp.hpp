#pragma once

#include <vector>

namespace carat::lp {

enum class Rel { LE, EQ };

struct Row {
  std::vector<double> a;
  Rel rel = Rel::LE;
  double b = 0.0;
};

// maximize c·x subject to rows; variables are >= 0 unless marked free.
struct Problem {
  std::vector<double> c;
  std::vector<Row> rows;
  std::vector<bool> free_var;  // empty = all variables >= 0
};

enum class Status { Optimal, Unbounded, Infeasible };

struct Solution {
  Status status;
  double value = 0.0;            // +inf when unbounded, NaN when infeasible
  std::vector<double> x;         // optimal point (last basic point when unbounded)
  std::vector<double> dual;      // one multiplier per row (optimal only)
  std::vector<double> ray;       // certified improving direction (unbounded only)
  int iterations = 0;
};

inline constexpr double kFeasTol = 1e-9;

Solution solve(const Problem& p);

// sup of c·u over the closed polyhedron {u : a_i·u <= b_i, u free}.
// rows must be nonempty-feasible; throws EmptyDomainError otherwise.
struct PolyMax {
  bool unbounded = false;
  double value = 0.0;
  std::vector<double> arg;  // maximizer when bounded
  std::vector<double> ray;  // recession direction with c·ray > 0 when unbounded
};

PolyMax max_linear_over_polytope(const std::vector<Row>& closure_rows, const std::vector<double>& c);

}  // namespace carat::lp
