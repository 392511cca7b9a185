#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "carat/geom.hpp"
#include "carat/peak.hpp"

namespace carat::booster {

using cplx = geom::cplx;

// f_k evaluated at a domain point, k = 1..K
using FamilyEval = std::function<cplx(int k, const std::vector<cplx>& z)>;

// Cayley-transform series turning a weak peak family into a strict peak
// function: h = sum 2^{-k} (1+f~_k)/(1-f~_k) with f~_k = f_k/(1+eps_k),
// F = (h-1)/(h+1).
struct BoosterFunction {
  FamilyEval f;
  int K = 40;

  static double eps_k(int k);  // 4^{-k}
  cplx f_tilde(int k, const std::vector<cplx>& z) const;
  // the k-th peak neighborhood |f_k(z) - 1| < eps_k
  bool in_U(int k, const std::vector<cplx>& z) const;
};

BoosterFunction from_family(const peak::WeakPeakFamily& fam, int K = -1);

// true iff z lies in the disc |z - 1/(1+eps)| < eps/(1+eps), equivalently
// Re((1+z)/(1-z)) > 1/eps; both forms are evaluated and must agree
bool cayley_threshold(double eps, cplx z);

struct Evaluation {
  cplx h;
  cplx F;
  cplx gap;               // 1 - F, computed as 2/(h+1)
  double tail_hint = 0.0;  // size scale of the first dropped term past K
};

Evaluation evaluate(const BoosterFunction& b, const std::vector<cplx>& z);
cplx evaluate_F(const BoosterFunction& b, const std::vector<cplx>& z);

// guaranteed bound for |F - 1| on U_k
double peak_gap_bound(int k);

struct UkStat {
  int k = 0;
  int samples = 0;
  double worst_gap = 0.0;  // max |1 - F| among grid points inside U_k
  double bound = 0.0;      // peak_gap_bound(k)
  double min_re_h = 0.0;
};

struct PeakReport {
  bool pass = false;
  double max_abs_F = 0.0;  // over the grid, must stay < 1
  std::vector<cplx> worst_point;
  double zeta_gap = 0.0;    // |F(zeta) - 1|
  double zeta_bound = 0.0;  // 2^{-K}
  std::vector<UkStat> uk;
  std::string failure;  // empty on pass, else names the offending point
};

PeakReport verify_peak(const BoosterFunction& b, const std::vector<std::vector<cplx>>& grid,
                       const std::vector<cplx>& zeta);

// seeded rejection sample of count domain points: log moduli uniform over
// [ln b_j - 6, ln b_j] below the certified coordinate bounds, phases uniform
std::vector<std::vector<cplx>> sample_domain_grid(const geom::ReinhardtDomain& D, int count,
                                                  std::uint64_t seed);

}  // namespace carat::booster
