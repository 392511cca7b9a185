#include "carat/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "carat/errors.hpp"

namespace carat::lp {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kBlowup = 1e14;

struct Standard {
  // scaled/flipped system A x_std = b, b >= 0, x_std >= 0
  int m = 0, ncols = 0, nsplit = 0;
  std::vector<std::vector<double>> A;   // m x ncols, pristine copy
  std::vector<double> b;
  std::vector<double> cost;             // phase-2 objective over x_std
  std::vector<int> slack_col;           // per row, -1 if none
  std::vector<int> art_col;             // per row, -1 if none
  std::vector<double> scale;            // s_i: original row divided by s_i
  std::vector<double> flip;             // +1/-1 applied after scaling
  std::vector<bool> is_art;             // per column
  // mapping std column -> (orig var, sign); slacks/artificials map to (-1, 0)
  std::vector<int> var_of;
  std::vector<double> sign_of;
};

void validate(const Problem& p) {
  const std::size_t n = p.c.size();
  if (n == 0) throw InputError("lp: empty objective");
  if (!p.free_var.empty() && p.free_var.size() != n) throw InputError("lp: free_var length mismatch");
  for (double v : p.c)
    if (!std::isfinite(v)) throw InputError("lp: non-finite objective entry");
  for (const Row& r : p.rows) {
    if (r.a.size() != n) throw InputError("lp: row dimension mismatch");
    if (!std::isfinite(r.b)) throw InputError("lp: non-finite bound");
    for (double v : r.a)
      if (!std::isfinite(v)) throw InputError("lp: non-finite coefficient");
  }
}

Standard build_standard(const Problem& p) {
  const int n = static_cast<int>(p.c.size());
  const int m = static_cast<int>(p.rows.size());
  auto is_free = [&](int j) { return !p.free_var.empty() && p.free_var[j]; };

  Standard s;
  s.m = m;
  for (int j = 0; j < n; ++j) {
    s.var_of.push_back(j);
    s.sign_of.push_back(1.0);
    if (is_free(j)) {
      s.var_of.push_back(j);
      s.sign_of.push_back(-1.0);
    }
  }
  s.nsplit = static_cast<int>(s.var_of.size());

  s.scale.assign(m, 1.0);
  s.flip.assign(m, 1.0);
  std::vector<std::vector<double>> rowdata(m);
  std::vector<double> rowb(m);
  for (int i = 0; i < m; ++i) {
    double mx = 0.0;
    for (double v : p.rows[i].a) mx = std::max(mx, std::abs(v));
    s.scale[i] = mx > 0.0 ? mx : 1.0;
    rowdata[i].resize(s.nsplit);
    for (int k = 0; k < s.nsplit; ++k)
      rowdata[i][k] = s.sign_of[k] * p.rows[i].a[s.var_of[k]] / s.scale[i];
    rowb[i] = p.rows[i].b / s.scale[i];
  }

  s.slack_col.assign(m, -1);
  s.art_col.assign(m, -1);
  int ncols = s.nsplit;
  for (int i = 0; i < m; ++i)
    if (p.rows[i].rel == Rel::LE) s.slack_col[i] = ncols++;
  // flip after slack placement so a flipped LE row carries slack coefficient -1
  std::vector<double> slack_coeff(m, 1.0);
  for (int i = 0; i < m; ++i) {
    if (rowb[i] < 0.0) {
      s.flip[i] = -1.0;
      for (double& v : rowdata[i]) v = -v;
      rowb[i] = -rowb[i];
      slack_coeff[i] = -1.0;
    }
  }
  for (int i = 0; i < m; ++i)
    if (s.slack_col[i] < 0 || slack_coeff[i] < 0.0) s.art_col[i] = ncols++;

  s.ncols = ncols;
  s.A.assign(m, std::vector<double>(ncols, 0.0));
  s.b = rowb;
  s.is_art.assign(ncols, false);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < s.nsplit; ++k) s.A[i][k] = rowdata[i][k];
    if (s.slack_col[i] >= 0) s.A[i][s.slack_col[i]] = slack_coeff[i];
    if (s.art_col[i] >= 0) {
      s.A[i][s.art_col[i]] = 1.0;
      s.is_art[s.art_col[i]] = true;
    }
  }
  s.cost.assign(ncols, 0.0);
  for (int k = 0; k < s.nsplit; ++k) s.cost[k] = s.sign_of[k] * p.c[s.var_of[k]];
  return s;
}

struct Tableau {
  int m, ncols;
  std::vector<std::vector<double>> T;  // m x ncols working matrix
  std::vector<double> rhs;             // length m, >= 0
  std::vector<double> z;               // reduced-cost row
  double zval = 0.0;
  std::vector<int> basis;              // basic column per row
  std::vector<bool> barred;            // columns forbidden to enter
  std::vector<bool> is_art;            // per column
  int iterations = 0;

  void pivot(int pr, int pc) {
    const double pv = T[pr][pc];
    const double inv = 1.0 / pv;
    for (int j = 0; j < ncols; ++j) T[pr][j] *= inv;
    rhs[pr] *= inv;
    if (rhs[pr] < 0.0 && rhs[pr] > -kFeasTol) rhs[pr] = 0.0;
    if (rhs[pr] == 0.0) rhs[pr] = 0.0;  // normalize -0
    T[pr][pc] = 1.0;
    double mx = 0.0;
    for (int i = 0; i < m; ++i) {
      if (i == pr) continue;
      const double f = T[i][pc];
      if (f == 0.0) continue;
      for (int j = 0; j < ncols; ++j) T[i][j] -= f * T[pr][j];
      T[i][pc] = 0.0;
      rhs[i] -= f * rhs[pr];
      if (rhs[i] < 0.0 && rhs[i] > -kFeasTol) rhs[i] = 0.0;
      for (int j = 0; j < ncols; ++j) mx = std::max(mx, std::abs(T[i][j]));
    }
    const double zf = z[pc];
    if (zf != 0.0) {
      for (int j = 0; j < ncols; ++j) z[j] -= zf * T[pr][j];
      z[pc] = 0.0;
      zval += zf * rhs[pr];
    }
    basis[pr] = pc;
    ++iterations;
    if (mx > kBlowup) throw ConditioningError("lp: tableau magnitude exceeded 1e14");
  }

  // Bland: entering = smallest index with reduced cost > tol among unbarred columns.
  int entering() const {
    for (int j = 0; j < ncols; ++j)
      if (!barred[j] && z[j] > kFeasTol) return j;
    return -1;
  }

  // A basic artificial already at value 0 is forced out the moment the entering
  // column touches its row (either pivot sign keeps feasibility since the rhs is 0),
  // so it can never turn positive again. Otherwise: min-ratio, ties to smallest
  // basic variable index (Bland).
  int leaving(int pc) const {
    for (int i = 0; i < m; ++i)
      if (is_art[basis[i]] && rhs[i] <= kFeasTol && std::abs(T[i][pc]) > kPivotTol) return i;
    int best = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T[i][pc] <= kPivotTol) continue;
      const double ratio = rhs[i] / T[i][pc];
      if (best < 0 || ratio < best_ratio - 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }
};

// price out the basic columns so z has zeros on the basis
void install_objective(Tableau& t, const std::vector<double>& cost) {
  t.z = cost;
  t.zval = 0.0;
  for (int i = 0; i < t.m; ++i) {
    const int jb = t.basis[i];
    const double f = t.z[jb];
    if (f == 0.0) continue;
    for (int j = 0; j < t.ncols; ++j) t.z[j] -= f * t.T[i][j];
    t.z[jb] = 0.0;
    t.zval += f * t.rhs[i];
  }
}

// duals of the scaled standard system via B^T y = c_B on the pristine matrix
std::vector<double> solve_duals(const Standard& s, const std::vector<int>& basis) {
  const int m = s.m;
  std::vector<std::vector<double>> M(m, std::vector<double>(m + 1, 0.0));
  for (int col = 0; col < m; ++col) {
    const int jb = basis[col];
    for (int i = 0; i < m; ++i) M[col][i] = s.A[i][jb];  // row col of B^T
    M[col][m] = s.cost[jb];
  }
  for (int k = 0; k < m; ++k) {
    int piv = k;
    for (int i = k + 1; i < m; ++i)
      if (std::abs(M[i][k]) > std::abs(M[piv][k])) piv = i;
    std::swap(M[k], M[piv]);
    if (std::abs(M[k][k]) < 1e-13) {
      M[k][k] = 1.0;
      M[k][m] = 0.0;
      for (int j = k + 1; j < m; ++j) M[k][j] = 0.0;
      continue;
    }
    for (int i = k + 1; i < m; ++i) {
      const double f = M[i][k] / M[k][k];
      if (f == 0.0) continue;
      for (int j = k; j <= m; ++j) M[i][j] -= f * M[k][j];
    }
  }
  std::vector<double> y(m, 0.0);
  for (int k = m - 1; k >= 0; --k) {
    double acc = M[k][m];
    for (int j = k + 1; j < m; ++j) acc -= M[k][j] * y[j];
    y[k] = acc / M[k][k];
  }
  return y;
}

std::vector<double> to_original_point(const Standard& s, const Tableau& t, int n) {
  std::vector<double> xstd(s.ncols, 0.0);
  for (int i = 0; i < t.m; ++i) xstd[t.basis[i]] = t.rhs[i];
  std::vector<double> x(n, 0.0);
  for (int k = 0; k < s.nsplit; ++k) x[s.var_of[k]] += s.sign_of[k] * xstd[k];
  return x;
}

}  // namespace

Solution solve(const Problem& p) {
  validate(p);
  const int n = static_cast<int>(p.c.size());
  const int m = static_cast<int>(p.rows.size());
  auto is_free = [&](int j) { return !p.free_var.empty() && p.free_var[j]; };

  Solution sol;
  if (m == 0) {
    for (int j = 0; j < n; ++j) {
      const bool improving = is_free(j) ? p.c[j] != 0.0 : p.c[j] > 0.0;
      if (improving) {
        sol.status = Status::Unbounded;
        sol.value = std::numeric_limits<double>::infinity();
        sol.x.assign(n, 0.0);
        sol.ray.assign(n, 0.0);
        sol.ray[j] = p.c[j] > 0.0 ? 1.0 : -1.0;
        return sol;
      }
    }
    sol.status = Status::Optimal;
    sol.value = 0.0;
    sol.x.assign(n, 0.0);
    return sol;
  }

  Standard s = build_standard(p);
  Tableau t;
  t.m = m;
  t.ncols = s.ncols;
  t.T = s.A;
  t.rhs = s.b;
  t.basis.assign(m, -1);
  t.barred.assign(s.ncols, false);
  t.is_art = s.is_art;
  for (int i = 0; i < m; ++i)
    t.basis[i] = s.art_col[i] >= 0 ? s.art_col[i] : s.slack_col[i];

  // phase 1: maximize -sum(artificials)
  bool any_art = false;
  for (int i = 0; i < m; ++i) any_art = any_art || s.art_col[i] >= 0;
  if (any_art) {
    std::vector<double> c1(s.ncols, 0.0);
    for (int i = 0; i < m; ++i)
      if (s.art_col[i] >= 0) c1[s.art_col[i]] = -1.0;
    install_objective(t, c1);
    while (true) {
      const int pc = t.entering();
      if (pc < 0) break;
      const int pr = t.leaving(pc);
      if (pr < 0) throw ConditioningError("lp: phase-1 unbounded");
      t.pivot(pr, pc);
    }
    if (t.zval < -1e-7) {
      sol.status = Status::Infeasible;
      sol.value = std::numeric_limits<double>::quiet_NaN();
      sol.iterations = t.iterations;
      return sol;
    }
    // drive remaining basic artificials out where a nonzero non-artificial entry exists;
    // rows without one are redundant and keep their artificial pinned at zero
    for (int i = 0; i < m; ++i) {
      if (!t.is_art[t.basis[i]]) continue;
      for (int j = 0; j < t.ncols; ++j) {
        if (t.is_art[j]) continue;
        if (std::abs(t.T[i][j]) > kPivotTol) {
          t.pivot(i, j);
          break;
        }
      }
    }
    for (int j = 0; j < t.ncols; ++j)
      if (t.is_art[j]) t.barred[j] = true;
  }

  // phase 2
  install_objective(t, s.cost);
  while (true) {
    const int pc = t.entering();
    if (pc < 0) break;
    const int pr = t.leaving(pc);
    if (pr < 0) {
      // unbounded: assemble the improving ray
      std::vector<double> raystd(s.ncols, 0.0);
      raystd[pc] = 1.0;
      for (int i = 0; i < m; ++i) raystd[t.basis[i]] = -t.T[i][pc];
      std::vector<double> ray(n, 0.0);
      for (int k = 0; k < s.nsplit; ++k) ray[s.var_of[k]] += s.sign_of[k] * raystd[k];
      // re-verify against the original data
      double growth = 0.0;
      double nrm = 0.0;
      for (int j = 0; j < n; ++j) {
        growth += p.c[j] * ray[j];
        nrm = std::max(nrm, std::abs(ray[j]));
        if (!is_free(j) && ray[j] < -1e-8) throw ConditioningError("lp: ray violates nonnegativity");
      }
      if (!(growth > 1e-10 * std::max(1.0, nrm))) throw ConditioningError("lp: ray fails to improve");
      for (const Row& r : p.rows) {
        double d = 0.0;
        double rn = 0.0;
        for (int j = 0; j < n; ++j) {
          d += r.a[j] * ray[j];
          rn = std::max(rn, std::abs(r.a[j]));
        }
        const double tol = 1e-8 * std::max(1.0, rn * nrm);
        if (r.rel == Rel::LE ? d > tol : std::abs(d) > tol)
          throw ConditioningError("lp: ray violates constraints");
      }
      sol.status = Status::Unbounded;
      sol.value = std::numeric_limits<double>::infinity();
      sol.x = to_original_point(s, t, n);
      sol.ray = std::move(ray);
      sol.iterations = t.iterations;
      return sol;
    }
    t.pivot(pr, pc);
  }

  sol.status = Status::Optimal;
  sol.x = to_original_point(s, t, n);
  sol.value = 0.0;
  for (int j = 0; j < n; ++j) sol.value += p.c[j] * sol.x[j];
  const std::vector<double> y = solve_duals(s, t.basis);
  sol.dual.assign(m, 0.0);
  for (int i = 0; i < m; ++i) sol.dual[i] = s.flip[i] * y[i] / s.scale[i];
  sol.iterations = t.iterations;
  return sol;
}

PolyMax max_linear_over_polytope(const std::vector<Row>& closure_rows, const std::vector<double>& c) {
  Problem p;
  p.c = c;
  p.rows = closure_rows;
  for (Row& r : p.rows) r.rel = Rel::LE;
  p.free_var.assign(c.size(), true);
  const Solution sol = solve(p);
  if (sol.status == Status::Infeasible) throw EmptyDomainError("polytope is empty");
  PolyMax out;
  if (sol.status == Status::Unbounded) {
    out.unbounded = true;
    out.ray = sol.ray;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value = sol.value;
  out.arg = sol.x;
  return out;
}

}  // namespace carat::lp
