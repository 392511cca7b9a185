#include "carat/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include <doctest.h>

#include "carat/errors.hpp"
#include "carat/rng.hpp"

using carat::lp::Problem;
using carat::lp::Rel;
using carat::lp::Row;
using carat::lp::Solution;
using carat::lp::Status;

namespace {

Problem make(std::vector<double> c, std::vector<Row> rows, std::vector<bool> free_var = {}) {
  Problem p;
  p.c = std::move(c);
  p.rows = std::move(rows);
  p.free_var = std::move(free_var);
  return p;
}

// exhaustive oracle: every n-subset of {rows as equalities} U {x_j = 0 planes}
// defines a candidate vertex; the optimum of a bounded feasible LP sits on one.
struct OracleResult {
  bool feasible = false;
  double value = 0.0;
};

OracleResult vertex_oracle(const Problem& p) {
  const int n = static_cast<int>(p.c.size());
  auto is_free = [&](int j) { return !p.free_var.empty() && p.free_var[j]; };

  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (const Row& r : p.rows) planes.push_back({r.a, r.b});
  for (int j = 0; j < n; ++j) {
    if (is_free(j)) continue;
    std::vector<double> a(n, 0.0);
    a[j] = 1.0;
    planes.push_back({a, 0.0});
  }

  OracleResult out;
  const int P = static_cast<int>(planes.size());
  auto feasible_point = [&](const std::vector<double>& x) {
    for (int j = 0; j < n; ++j)
      if (!is_free(j) && x[j] < -1e-7) return false;
    for (const Row& r : p.rows) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += r.a[j] * x[j];
      if (r.rel == Rel::LE && lhs > r.b + 1e-7) return false;
      if (r.rel == Rel::EQ && std::abs(lhs - r.b) > 1e-7) return false;
    }
    return true;
  };
  auto consider = [&](const std::vector<int>& sel) {
    std::vector<std::vector<double>> M(n, std::vector<double>(n + 1));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) M[i][j] = planes[sel[i]].a[j];
      M[i][n] = planes[sel[i]].b;
    }
    for (int k = 0; k < n; ++k) {
      int piv = k;
      for (int i = k + 1; i < n; ++i)
        if (std::abs(M[i][k]) > std::abs(M[piv][k])) piv = i;
      if (std::abs(M[piv][k]) < 1e-10) return;
      std::swap(M[k], M[piv]);
      for (int i = 0; i < n; ++i) {
        if (i == k) continue;
        const double f = M[i][k] / M[k][k];
        if (f == 0.0) continue;
        for (int j = k; j <= n; ++j) M[i][j] -= f * M[k][j];
      }
    }
    std::vector<double> x(n);
    for (int k = 0; k < n; ++k) x[k] = M[k][n] / M[k][k];
    if (!feasible_point(x)) return;
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += p.c[j] * x[j];
    if (!out.feasible || v > out.value) out.value = v;
    out.feasible = true;
  };
  // iterate subsets of size n
  std::vector<int> sel(n);
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == n) {
      consider(sel);
      return;
    }
    for (int i = start; i < P; ++i) {
      sel[depth] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return out;
}

Problem random_bounded_problem(carat::SplitMix64& rng, bool with_free, bool with_eq) {
  const int n = 1 + static_cast<int>(rng.next() % 3);  // 1..3
  const int m = 1 + static_cast<int>(rng.next() % 4);  // 1..4
  Problem p;
  p.c.resize(n);
  for (double& v : p.c) v = std::floor(rng.uniform(-3.0, 3.0) * 4.0) / 4.0;
  p.free_var.assign(n, false);
  if (with_free) p.free_var[rng.next() % n] = true;
  for (int i = 0; i < m; ++i) {
    Row r;
    r.a.resize(n);
    for (double& v : r.a) v = std::floor(rng.uniform(-2.0, 2.0) * 4.0) / 4.0;
    bool zero = true;
    for (double v : r.a) zero = zero && v == 0.0;
    if (zero) r.a[0] = 1.0;
    r.b = std::floor(rng.uniform(-1.0, 3.0) * 4.0) / 4.0;
    r.rel = (with_eq && i == 0 && rng.next() % 2 == 0) ? Rel::EQ : Rel::LE;
    p.rows.push_back(std::move(r));
  }
  // box rows keep everything bounded so the vertex oracle is complete
  for (int j = 0; j < n; ++j) {
    Row up;
    up.a.assign(n, 0.0);
    up.a[j] = 1.0;
    up.b = 5.0;
    p.rows.push_back(up);
    if (p.free_var[j]) {
      Row dn;
      dn.a.assign(n, 0.0);
      dn.a[j] = -1.0;
      dn.b = 5.0;
      p.rows.push_back(dn);
    }
  }
  return p;
}

double primal_residual(const Problem& p, const Solution& s) {
  double res = 0.0;
  for (std::size_t j = 0; j < p.c.size(); ++j)
    if ((p.free_var.empty() || !p.free_var[j]) && s.x[j] < 0.0) res = std::max(res, -s.x[j]);
  for (const Row& r : p.rows) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < p.c.size(); ++j) lhs += r.a[j] * s.x[j];
    if (r.rel == Rel::LE)
      res = std::max(res, lhs - r.b);
    else
      res = std::max(res, std::abs(lhs - r.b));
  }
  return res;
}

}  // namespace

TEST_CASE("single upper bound on a free variable") {
  auto p = make({1.0}, {{{1.0}, Rel::LE, 3.0}}, {true});
  const Solution s = carat::lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.x[0] == doctest::Approx(3.0));
}

TEST_CASE("box maximum") {
  auto p = make({1.0, 1.0}, {{{1.0, 0.0}, Rel::LE, 1.0}, {{0.0, 1.0}, Rel::LE, 1.0}});
  const Solution s = carat::lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == doctest::Approx(2.0));
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
}

TEST_CASE("unbounded ray reported and certified") {
  auto p = make({1.0}, {{{-1.0}, Rel::LE, 0.0}}, {true});
  const Solution s = carat::lp::solve(p);
  REQUIRE(s.status == Status::Unbounded);
  REQUIRE(s.ray.size() == 1);
  CHECK(s.ray[0] > 0.0);
  CHECK(std::isinf(s.value));
}

TEST_CASE("infeasible system detected") {
  auto p = make({1.0}, {{{1.0}, Rel::LE, -1.0}, {{-1.0}, Rel::LE, -2.0}});
  const Solution s = carat::lp::solve(p);
  CHECK(s.status == Status::Infeasible);
}

TEST_CASE("equality rows and negative bounds") {
  // max x+y s.t. x+y = -1, x,y free -> value -1
  auto p = make({1.0, 1.0}, {{{1.0, 1.0}, Rel::EQ, -1.0}}, {true, true});
  const Solution s = carat::lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == doctest::Approx(-1.0));
  CHECK(s.dual.size() == 1);
  CHECK(s.dual[0] == doctest::Approx(1.0));
}

TEST_CASE("degenerate redundant rows") {
  auto p = make({1.0, 1.0},
                {{{1.0, 1.0}, Rel::LE, 1.0},
                 {{2.0, 2.0}, Rel::LE, 2.0},
                 {{1.0, 1.0}, Rel::EQ, 1.0}});
  const Solution s = carat::lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.value == doctest::Approx(1.0));
}

TEST_CASE("dimension mismatch raises input error") {
  auto p = make({1.0, 2.0}, {{{1.0}, Rel::LE, 1.0}});
  CHECK_THROWS_AS(carat::lp::solve(p), carat::InputError);
}

TEST_CASE("no rows: bounded only when no improving direction") {
  auto p0 = make({0.0, -1.0}, {});
  const Solution s0 = carat::lp::solve(p0);
  CHECK(s0.status == Status::Optimal);
  CHECK(s0.value == 0.0);

  auto p1 = make({0.0, -1.0}, {}, {false, true});
  const Solution s1 = carat::lp::solve(p1);
  REQUIRE(s1.status == Status::Unbounded);
  CHECK(s1.ray[1] < 0.0);
}

TEST_CASE("polytope helper: origin vertex, unbounded direction, empty domain") {
  using carat::lp::max_linear_over_polytope;
  const std::vector<Row> quad = {{{1.0, 0.0}, Rel::LE, 0.0}, {{0.0, 1.0}, Rel::LE, 0.0}};
  const auto m1 = max_linear_over_polytope(quad, {1.0, 1.0});
  CHECK_FALSE(m1.unbounded);
  CHECK(m1.value == doctest::Approx(0.0));

  const std::vector<Row> strip = {{{0.0, 1.0}, Rel::LE, 0.0}};
  const auto m2 = max_linear_over_polytope(strip, {1.0, 0.0});
  CHECK(m2.unbounded);
  REQUIRE(m2.ray.size() == 2);
  CHECK(m2.ray[0] > 0.0);

  const std::vector<Row> empty = {{{1.0}, Rel::LE, -1.0}, {{-1.0}, Rel::LE, -2.0}};
  CHECK_THROWS_AS(max_linear_over_polytope(empty, {1.0}), carat::EmptyDomainError);
}

TEST_CASE("irrational objective over the wedge polytope") {
  const double r2 = std::sqrt(2.0);
  const double ln2 = std::log(2.0);
  const std::vector<Row> rows = {
      {{1.0, 0.0}, Rel::LE, ln2}, {{0.0, 1.0}, Rel::LE, ln2}, {{1.0, r2}, Rel::LE, 0.0}};
  const auto m = carat::lp::max_linear_over_polytope(rows, {70.0, 99.0});
  REQUIRE_FALSE(m.unbounded);
  CHECK(m.value == doctest::Approx((99.0 - 70.0 * r2) * ln2).epsilon(1e-10));
  CHECK(m.value == doctest::Approx(0.0035008326).epsilon(1e-5));
}

TEST_CASE("vertex oracle agreement on random bounded instances") {
  carat::SplitMix64 rng(0x15ca1eULL);
  int optimal_seen = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Problem p = random_bounded_problem(rng, trial % 3 == 0, trial % 4 == 0);
    const OracleResult oracle = vertex_oracle(p);
    const Solution s = carat::lp::solve(p);
    if (!oracle.feasible) {
      CHECK(s.status == Status::Infeasible);
      continue;
    }
    REQUIRE(s.status == Status::Optimal);
    ++optimal_seen;
    CHECK(s.value == doctest::Approx(oracle.value).epsilon(1e-9).scale(1.0));
  }
  CHECK(optimal_seen > 100);
}

TEST_CASE("strong duality and complementary slackness on random instances") {
  carat::SplitMix64 rng(0xd0a11edULL);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Problem p = random_bounded_problem(rng, trial % 2 == 0, trial % 5 == 0);
    const Solution s = carat::lp::solve(p);
    if (s.status != Status::Optimal) continue;
    ++checked;
    double bnorm = 0.0;
    for (const Row& r : p.rows) bnorm = std::max(bnorm, std::abs(r.b));
    CHECK(primal_residual(p, s) <= 1e-9 * (1.0 + bnorm));

    double dual_value = 0.0;
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
      dual_value += s.dual[i] * p.rows[i].b;
      if (p.rows[i].rel == Rel::LE) CHECK(s.dual[i] >= -1e-8);
    }
    CHECK(std::abs(dual_value - s.value) <= 1e-8 * (1.0 + std::abs(s.value)));

    double cs = 0.0;
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < p.c.size(); ++j) lhs += p.rows[i].a[j] * s.x[j];
      cs = std::max(cs, std::abs(s.dual[i] * (p.rows[i].b - lhs)));
    }
    CHECK(cs <= 1e-8 * (1.0 + std::abs(s.value)));
  }
  CHECK(checked > 100);
}

TEST_CASE("row permutation leaves the value unchanged") {
  carat::SplitMix64 rng(0x5eedULL);
  for (int trial = 0; trial < 60; ++trial) {
    Problem p = random_bounded_problem(rng, true, true);
    const Solution s1 = carat::lp::solve(p);
    std::reverse(p.rows.begin(), p.rows.end());
    const Solution s2 = carat::lp::solve(p);
    REQUIRE(s1.status == s2.status);
    if (s1.status == Status::Optimal) CHECK(s1.value == doctest::Approx(s2.value).epsilon(1e-9));
  }
}

TEST_CASE("identical input twice gives bit-identical results") {
  carat::SplitMix64 rng(0xbeefULL);
  for (int trial = 0; trial < 40; ++trial) {
    const Problem p = random_bounded_problem(rng, trial % 2 == 1, false);
    const Solution s1 = carat::lp::solve(p);
    const Solution s2 = carat::lp::solve(p);
    REQUIRE(s1.status == s2.status);
    if (s1.status != Status::Optimal) continue;
    REQUIRE(s1.x.size() == s2.x.size());
    CHECK(std::memcmp(s1.x.data(), s2.x.data(), s1.x.size() * sizeof(double)) == 0);
    CHECK(s1.value == s2.value);
  }
}

TEST_CASE("scale invariance via row equilibration") {
  // same geometry at wildly different row scales
  auto p1 = make({1.0, 1.0}, {{{1.0, 1.0}, Rel::LE, 1.0}, {{1.0, -1.0}, Rel::LE, 0.0}});
  auto p2 = make({1.0, 1.0}, {{{1e8, 1e8}, Rel::LE, 1e8}, {{1e-6, -1e-6}, Rel::LE, 0.0}});
  const Solution s1 = carat::lp::solve(p1);
  const Solution s2 = carat::lp::solve(p2);
  REQUIRE(s1.status == Status::Optimal);
  REQUIRE(s2.status == Status::Optimal);
  CHECK(s1.value == doctest::Approx(s2.value).epsilon(1e-10));
}
