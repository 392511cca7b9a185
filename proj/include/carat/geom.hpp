#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "carat/lp.hpp"

namespace carat::geom {

using cplx = std::complex<double>;

// (num/den)*sqrt(rad); exact carrier for constraint coefficients that arrive as
// integers or sqrt tokens, so certificate arithmetic can stay exact.
struct Surd {
  long long num = 0;
  long long den = 1;
  long long rad = 1;
  double value() const;
  bool is_rational() const { return rad == 1 || num == 0; }
};

struct Constraint {
  std::vector<double> a;
  double b = 0.0;
  std::vector<Surd> a_exact;  // empty when some entry has no exact form
  bool has_exact() const { return !a_exact.empty(); }
};

// closed polyhedron {u : a_i·u <= b_i}; the open domain image is the strict version
struct LogPolytope {
  int n = 0;
  std::vector<lp::Row> rows;
};

struct AxisStatus {
  int j = 0;  // 1-based coordinate
  bool closure_meets = false;
  bool interior_meets = false;
};

class ReinhardtDomain {
public:
  ReinhardtDomain(int n, std::string label, std::vector<Constraint> constraints);

  static ReinhardtDomain parse(const std::string& json_text);
  static ReinhardtDomain parse_file(const std::string& path);

  int n() const { return n_; }
  const std::string& label() const { return label_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  LogPolytope log_polytope() const;

  bool contains(const std::vector<cplx>& z) const;
  AxisStatus axis_status(int j) const;  // j is 1-based
  bool is_bounded() const;
  // sup of u_j over the closure; unbounded carries the recession ray
  lp::PolyMax log_sup(int j) const;  // j is 1-based
  // per-coordinate modulus bound exp(sup u_j) for bounded domains
  std::vector<double> modulus_bounds() const;

  // active rows (0-based indices) at a boundary point with all zeta_j != 0;
  // throws InputError when zeta is interior/exterior beyond 1e-9 log-scale
  std::vector<int> boundary_contact(const std::vector<cplx>& zeta) const;

  std::vector<double> log_abs(const std::vector<cplx>& z) const;

private:
  int n_;
  std::string label_;
  std::vector<Constraint> constraints_;
};

// strict feasibility margin of {a_i·u < b_i}: optimum of max t s.t. a_i·u + t <= b_i, t <= 1.
// the open set is nonempty iff the margin is > 0
double strict_feasibility_margin(const LogPolytope& poly);

inline lp::PolyMax max_linear(const LogPolytope& poly, const std::vector<double>& c) {
  return lp::max_linear_over_polytope(poly.rows, c);
}

}  // namespace carat::geom
