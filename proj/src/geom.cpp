#include "carat/geom.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "carat/errors.hpp"

namespace carat::geom {

namespace {

using nlohmann::json;

constexpr double kBoundaryTol = 1e-9;

struct TokenValue {
  double value;
  std::optional<Surd> exact;
};

TokenValue parse_value_token(const json& v, const char* where) {
  if (v.is_number()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError(std::string("non-finite value in ") + where);
    TokenValue out{x, std::nullopt};
    if (std::rint(x) == x && std::abs(x) < 1e15)
      out.exact = Surd{static_cast<long long>(std::rint(x)), 1, 1};
    return out;
  }
  if (v.is_object() && v.contains("expr") && v.contains("of")) {
    const std::string expr = v.at("expr").get<std::string>();
    const double of = v.at("of").get<double>();
    if (expr == "sqrt") {
      if (!(of >= 0)) throw InputError(std::string("sqrt of negative value in ") + where);
      TokenValue out{std::sqrt(of), std::nullopt};
      if (std::rint(of) == of && of < 1e15)
        out.exact = Surd{1, 1, static_cast<long long>(std::rint(of))};
      return out;
    }
    if (expr == "log") {
      if (!(of > 0)) throw InputError(std::string("log of non-positive value in ") + where);
      return {std::log(of), std::nullopt};
    }
    throw InputError("unknown expr token '" + expr + "' in " + where);
  }
  throw InputError(std::string("expected number or expr token in ") + where);
}

}  // namespace

double Surd::value() const {
  return static_cast<double>(num) / static_cast<double>(den) * std::sqrt(static_cast<double>(rad));
}

ReinhardtDomain::ReinhardtDomain(int n, std::string label, std::vector<Constraint> constraints)
    : n_(n), label_(std::move(label)), constraints_(std::move(constraints)) {
  if (n_ < 1) throw InputError("domain dimension must be >= 1");
  if (constraints_.empty()) throw InputError("domain needs at least one constraint");
  for (const Constraint& c : constraints_) {
    if (static_cast<int>(c.a.size()) != n_) throw InputError("constraint length mismatch");
    if (!c.a_exact.empty() && static_cast<int>(c.a_exact.size()) != n_)
      throw InputError("exact constraint length mismatch");
    bool nonzero = false;
    for (double v : c.a) {
      if (!std::isfinite(v)) throw InputError("non-finite constraint coefficient");
      nonzero = nonzero || v != 0.0;
    }
    if (!std::isfinite(c.b)) throw InputError("non-finite constraint bound");
    if (!nonzero && c.b <= 0.0) throw EmptyDomainError("constraint 0 < b fails, log-image empty");
  }
  if (strict_feasibility_margin(log_polytope()) <= lp::kFeasTol)
    throw EmptyDomainError("log-image has empty interior");
}

ReinhardtDomain ReinhardtDomain::parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("domain file is not valid JSON: ") + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const std::string label = j.value("label", std::string("unnamed"));
    std::vector<Constraint> cons;
    for (const json& jc : j.at("constraints")) {
      Constraint c;
      bool all_exact = true;
      for (const json& ja : jc.at("a")) {
        TokenValue tv = parse_value_token(ja, "constraints.a");
        c.a.push_back(tv.value);
        if (tv.exact)
          c.a_exact.push_back(*tv.exact);
        else
          all_exact = false;
      }
      if (!all_exact) c.a_exact.clear();
      c.b = parse_value_token(jc.at("b"), "constraints.b").value;
      cons.push_back(std::move(c));
    }
    return ReinhardtDomain(n, label, std::move(cons));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed domain file: ") + e.what());
  }
}

ReinhardtDomain ReinhardtDomain::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open domain file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

LogPolytope ReinhardtDomain::log_polytope() const {
  LogPolytope poly;
  poly.n = n_;
  for (const Constraint& c : constraints_) poly.rows.push_back({c.a, lp::Rel::LE, c.b});
  return poly;
}

std::vector<double> ReinhardtDomain::log_abs(const std::vector<cplx>& z) const {
  if (static_cast<int>(z.size()) != n_) throw InputError("point dimension mismatch");
  std::vector<double> u(n_);
  for (int j = 0; j < n_; ++j) {
    if (z[j] == cplx(0.0, 0.0)) throw InputError("log_abs at a point with a zero coordinate");
    u[j] = std::log(std::abs(z[j]));
  }
  return u;
}

bool ReinhardtDomain::contains(const std::vector<cplx>& z) const {
  if (static_cast<int>(z.size()) != n_) throw InputError("point dimension mismatch");
  for (const Constraint& c : constraints_) {
    bool auto_ok = false;
    bool blocked = false;
    double lhs = 0.0;
    for (int j = 0; j < n_; ++j) {
      if (z[j] == cplx(0.0, 0.0)) {
        if (c.a[j] < 0.0) blocked = true;
        if (c.a[j] > 0.0) auto_ok = true;
      } else if (c.a[j] != 0.0) {
        lhs += c.a[j] * std::log(std::abs(z[j]));
      }
    }
    if (blocked) return false;
    if (auto_ok) continue;
    if (!(lhs < c.b)) return false;
  }
  return true;
}

AxisStatus ReinhardtDomain::axis_status(int j) const {
  if (j < 1 || j > n_) throw InputError("axis index out of range");
  const int jj = j - 1;
  AxisStatus st;
  st.j = j;

  std::vector<double> c(n_, 0.0);
  c[jj] = -1.0;  // minimize u_j
  st.closure_meets = max_linear(log_polytope(), c).unbounded;

  bool sign_ok = true;
  for (const Constraint& con : constraints_)
    if (con.a[jj] < 0.0) sign_ok = false;
  if (!sign_ok) {
    st.interior_meets = false;
    return st;
  }
  LogPolytope reduced;
  reduced.n = n_ - 1;
  for (const Constraint& con : constraints_) {
    if (con.a[jj] != 0.0) continue;
    lp::Row r;
    r.b = con.b;
    for (int k = 0; k < n_; ++k)
      if (k != jj) r.a.push_back(con.a[k]);
    reduced.rows.push_back(std::move(r));
  }
  st.interior_meets = reduced.rows.empty() || strict_feasibility_margin(reduced) > lp::kFeasTol;
  return st;
}

lp::PolyMax ReinhardtDomain::log_sup(int j) const {
  if (j < 1 || j > n_) throw InputError("axis index out of range");
  std::vector<double> c(n_, 0.0);
  c[j - 1] = 1.0;
  return max_linear(log_polytope(), c);
}

bool ReinhardtDomain::is_bounded() const {
  for (int j = 1; j <= n_; ++j)
    if (log_sup(j).unbounded) return false;
  return true;
}

std::vector<double> ReinhardtDomain::modulus_bounds() const {
  std::vector<double> out;
  for (int j = 1; j <= n_; ++j) {
    const lp::PolyMax mx = log_sup(j);
    if (mx.unbounded) throw NumericError("modulus_bounds on an unbounded domain");
    out.push_back(std::exp(mx.value));
  }
  return out;
}

std::vector<int> ReinhardtDomain::boundary_contact(const std::vector<cplx>& zeta) const {
  const std::vector<double> u = log_abs(zeta);
  std::vector<int> active;
  for (int i = 0; i < static_cast<int>(constraints_.size()); ++i) {
    const Constraint& c = constraints_[i];
    double lhs = 0.0;
    for (int j = 0; j < n_; ++j) lhs += c.a[j] * u[j];
    if (lhs > c.b + kBoundaryTol) throw InputError("point lies outside the domain closure");
    if (lhs >= c.b - kBoundaryTol) active.push_back(i);
  }
  if (active.empty()) throw InputError("point is interior, not a boundary point");
  return active;
}

double strict_feasibility_margin(const LogPolytope& poly) {
  lp::Problem p;
  const int n = poly.n;
  p.c.assign(n + 1, 0.0);
  p.c[n] = 1.0;
  p.free_var.assign(n + 1, true);
  for (const lp::Row& r : poly.rows) {
    lp::Row q;
    q.a = r.a;
    q.a.push_back(1.0);
    q.rel = lp::Rel::LE;
    q.b = r.b;
    p.rows.push_back(std::move(q));
  }
  lp::Row cap;
  cap.a.assign(n + 1, 0.0);
  cap.a[n] = 1.0;
  cap.rel = lp::Rel::LE;
  cap.b = 1.0;
  p.rows.push_back(std::move(cap));
  const lp::Solution sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal) throw ConditioningError("feasibility probe did not solve");
  return sol.value;
}

}  // namespace carat::geom
