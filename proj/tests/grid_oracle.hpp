#pragma once

// exhaustive oracles for small envelope instances, independent of the
// simplex solver: a step-grid sweep over the probability simplex and an
// exact basic-solution enumeration

#include <cmath>
#include <limits>
#include <vector>

#include "carat/edwards.hpp"

namespace testoracle {

// min of phi-mean over grid measures (masses in multiples of `step`) whose
// Jensen rows hold within `slack`; the last two masses are swept as an
// interval in closed form, the rest by recursion
inline double grid_dual(const carat::edwards::EnvelopeInstance& inst, double step,
                        double slack) {
  const size_t P = inst.points.size();
  const size_t G = inst.generators.size();
  std::vector<std::vector<double>> psi(G, std::vector<double>(P));
  std::vector<double> need(G);
  for (size_t g = 0; g < G; ++g) {
    for (size_t i = 0; i < P; ++i) psi[g][i] = inst.psi(g, i);
    need[g] = inst.psi(g, 0) - slack;
  }
  const long U = std::lround(1.0 / step);

  if (P == 1) return inst.phi[0];

  double best = std::numeric_limits<double>::infinity();

  const auto leaf_pair = [&](long R, double pphi, const std::vector<double>& ppsi) {
    // masses m and R-m on the last two points; constraints are linear in m
    const size_t a = P - 2;
    const size_t b = P - 1;
    double lo = 0.0;
    double hi = static_cast<double>(R);
    for (size_t g = 0; g < G; ++g) {
      const double base = ppsi[g] + R * psi[g][b];
      const double d = psi[g][a] - psi[g][b];
      const double rhs = need[g] * U - base;  // d * m >= rhs
      if (std::fabs(d) < 1e-15) {
        if (rhs > 1e-9 * U) return;  // unsatisfiable at this prefix
      } else if (d > 0.0) {
        lo = std::max(lo, rhs / d);
      } else {
        hi = std::min(hi, rhs / d);
      }
    }
    const long mlo = std::lround(std::ceil(lo - 1e-9));
    const long mhi = std::lround(std::floor(hi + 1e-9));
    if (mlo > mhi) return;
    for (const long m : {mlo, mhi}) {
      const double v = (pphi + m * inst.phi[a] + (R - m) * inst.phi[b]) / U;
      best = std::min(best, v);
    }
  };

  // prefix sums are rebuilt per level rather than updated and reverted in
  // place: +=/-= pairs do not cancel exactly, and the drift after ~1e5
  // reversals is enough to reject a leaf whose constraints hold with equality
  const auto descend = [&](const auto& self, size_t i, long left, double pphi,
                           const std::vector<double>& ppsi) -> void {
    if (i == P - 2) {
      leaf_pair(left, pphi, ppsi);
      return;
    }
    std::vector<double> next(G);
    for (long m = 0; m <= left; ++m) {
      for (size_t g = 0; g < G; ++g) next[g] = ppsi[g] + m * psi[g][i];
      self(self, i + 1, left - m, pphi + m * inst.phi[i], next);
    }
  };
  descend(descend, 0, U, 0.0, std::vector<double>(G, 0.0));
  return best;
}

// exact minimum over the vertices of {mu >= 0, sum mu = 1, psi mu >= psi(x0)}
inline double vertex_dual(const carat::edwards::EnvelopeInstance& inst) {
  const size_t P = inst.points.size();
  const size_t G = inst.generators.size();
  std::vector<std::vector<double>> rows;  // candidate active rows beyond the sum row
  std::vector<double> rhs;
  for (size_t g = 0; g < G; ++g) {
    std::vector<double> r(P);
    for (size_t i = 0; i < P; ++i) r[i] = inst.psi(g, i);
    rows.push_back(std::move(r));
    rhs.push_back(inst.psi(g, 0));
  }
  for (size_t i = 0; i < P; ++i) {
    std::vector<double> r(P, 0.0);
    r[i] = 1.0;
    rows.push_back(std::move(r));
    rhs.push_back(0.0);
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<size_t> pick(P > 0 ? P - 1 : 0);
  std::vector<std::vector<double>> A;
  std::vector<double> b;

  const auto try_basis = [&]() {
    A.assign(P, std::vector<double>(P + 1, 0.0));
    for (size_t j = 0; j < P; ++j) A[0][j] = 1.0;
    A[0][P] = 1.0;
    for (size_t k = 0; k + 1 < P; ++k) {
      for (size_t j = 0; j < P; ++j) A[k + 1][j] = rows[pick[k]][j];
      A[k + 1][P] = rhs[pick[k]];
    }
    // gaussian elimination with partial pivoting
    for (size_t col = 0; col < P; ++col) {
      size_t piv = col;
      for (size_t r = col + 1; r < P; ++r)
        if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
      if (std::fabs(A[piv][col]) < 1e-12) return;  // singular basis
      std::swap(A[col], A[piv]);
      for (size_t r = 0; r < P; ++r) {
        if (r == col) continue;
        const double f = A[r][col] / A[col][col];
        if (f == 0.0) continue;
        for (size_t j = col; j <= P; ++j) A[r][j] -= f * A[col][j];
      }
    }
    std::vector<double> mu(P);
    for (size_t j = 0; j < P; ++j) mu[j] = A[j][P] / A[j][j];
    for (const double m : mu)
      if (m < -1e-9) return;
    for (size_t g = 0; g < G; ++g) {
      double mean = 0.0;
      for (size_t j = 0; j < P; ++j) mean += mu[j] * rows[g][j];
      if (mean < rhs[g] - 1e-9) return;
    }
    double v = 0.0;
    for (size_t j = 0; j < P; ++j) v += mu[j] * inst.phi[j];
    best = std::min(best, v);
  };

  const size_t M = rows.size();
  const auto choose = [&](const auto& self, size_t from, size_t k) -> void {
    if (k == pick.size()) {
      try_basis();
      return;
    }
    for (size_t c = from; c < M; ++c) {
      pick[k] = c;
      self(self, c + 1, k + 1);
    }
  };
  if (P == 1) {
    try_basis();
  } else {
    choose(choose, 0, 0);
  }
  return best;
}

}  // namespace testoracle
