#include "carat/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carat/errors.hpp"

namespace carat::orbit {

void OrbitSpec::validate() const {
  if (!(alpha > 0.0)) throw InputError("orbit exponent must be positive");
  const double id = std::abs(z0) * std::pow(std::abs(w0), alpha);
  if (std::fabs(id - 1.0) > 1e-12)
    throw InputError("base point must satisfy |z| * |w|^alpha = 1");
}

std::vector<OrbitPoint> orbit_points(const OrbitSpec& spec, long N) {
  spec.validate();
  if (N < 1) throw InputError("orbit needs at least one sample");
  std::vector<OrbitPoint> pts;
  pts.reserve(static_cast<size_t>(N));
  for (long k = 0; k < N; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(N);
    pts.push_back({spec.z0 * std::polar(1.0, -spec.alpha * t), spec.w0 * std::polar(1.0, t)});
  }
  return pts;
}

DiscrepancyReport orbit_discrepancy(double alpha, long N) {
  if (!(alpha > 0.0)) throw InputError("orbit exponent must be positive");
  if (N < 2) throw InputError("discrepancy needs at least two samples");

  DiscrepancyReport rep;
  rep.N = N;
  for (long q = 1; q <= 64; ++q) {
    const double m = q * alpha;
    if (std::fabs(m - std::round(m)) < 1e-9) {
      rep.rational_alpha = true;
      rep.period = q;
      break;
    }
  }

  std::vector<double> xs;
  xs.reserve(static_cast<size_t>(N));
  for (long k = 1; k <= N; ++k) xs.push_back(std::fmod(static_cast<double>(k) * alpha, 1.0));
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (long i = 1; i <= N; ++i) {
    const double x = xs[static_cast<size_t>(i - 1)];
    d = std::max(d, x - static_cast<double>(i - 1) / static_cast<double>(N));
    d = std::max(d, static_cast<double>(i) / static_cast<double>(N) - x);
  }
  rep.value = d;
  return rep;
}

}  // namespace carat::orbit
