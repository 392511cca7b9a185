#pragma once

#include <complex>
#include <vector>

#include "carat/geom.hpp"

namespace carat::hyperbolic {

using geom::cplx;

// atanh(|a-b| / |1 - conj(b)a|); requires |a| < 1 and |b| < 1
double poincare(cplx a, cplx b);

// c * z^beta with integer exponents
struct MonomialMap {
  cplx coeff{1.0, 0.0};
  std::vector<long long> beta;
  cplx eval(const std::vector<cplx>& z) const;
};

// monomial maps D -> closed unit disc with LP-certified sup bounds
struct BoundedMapFamily {
  std::vector<MonomialMap> maps;
  std::vector<double> sup_bounds;
};

// scaled coordinate maps z_j / sup_D |z_j|; requires a bounded domain
BoundedMapFamily coordinate_family(const geom::ReinhardtDomain& D);

// max over the family of poincare(f(z), f(w)); both points must lie in D
double caratheodory_lb(const geom::ReinhardtDomain& D, const BoundedMapFamily& family,
                       const std::vector<cplx>& z, const std::vector<cplx>& w);

struct ProbeResult {
  bool divergent = false;
  double sup_modulus = 0.0;
  double lb_max = 0.0;
  double threshold = 0.0;
};

// numeric probe of metric escape along a sequence: sup of |f(z_n)| over the family
// and whether the distance lower bound from base exceeds the threshold
ProbeResult escape_probe(const geom::ReinhardtDomain& D, const BoundedMapFamily& family,
                         const std::vector<cplx>& base, const std::vector<std::vector<cplx>>& seq,
                         double threshold = 10.0);

}  // namespace carat::hyperbolic
