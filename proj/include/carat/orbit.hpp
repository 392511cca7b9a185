#pragma once

#include <vector>

#include "carat/geom.hpp"

namespace carat::orbit {

using cplx = geom::cplx;

// boundary orbit data: alpha > 0 and a base point on |z| * |w|^alpha = 1
struct OrbitSpec {
  double alpha = 0.0;
  cplx z0;
  cplx w0;
  long N = 0;  // default sample schedule, overridable per call

  void validate() const;
};

struct OrbitPoint {
  cplx z;
  cplx w;
};

// (z0 e^{-i alpha t_k}, w0 e^{i t_k}) for t_k = 2 pi k / N, k = 0..N-1
std::vector<OrbitPoint> orbit_points(const OrbitSpec& spec, long N);

struct DiscrepancyReport {
  double value = 0.0;
  long N = 0;
  // a period q <= 64 with q * alpha within 1e-9 of an integer was found, so
  // the density mechanism degenerates to finitely many angles
  bool rational_alpha = false;
  long period = 0;
};

// exact star discrepancy of {k alpha mod 1 : k = 1..N} by the sorted formula
DiscrepancyReport orbit_discrepancy(double alpha, long N);

}  // namespace carat::orbit
