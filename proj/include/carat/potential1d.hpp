#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "carat/geom.hpp"

namespace carat::potential1d {

using cplx = geom::cplx;

// finite-atom probability measure in the plane; continuous measures enter as
// atom clouds
struct PlanarMeasure {
  struct Atom {
    cplx p;
    double w = 0.0;
  };
  std::vector<Atom> atoms;

  void validate() const;
  // total weight of atoms sitting exactly at zeta
  double mass_at(cplx zeta) const;

  static PlanarMeasure parse(const std::string& json_text);
  static PlanarMeasure parse_file(const std::string& path);
};

// membership predicate plus a seeded uniform sampler; estimates are blocked
// so the draw schedule is fixed regardless of evaluation order
struct PlanarDomainSampler {
  std::function<bool(cplx)> contains;
  std::uint64_t seed = 0;

  static PlanarDomainSampler unit_disc(std::uint64_t seed);
  // unit disc minus the slit [0,1)
  static PlanarDomainSampler slit_disc(std::uint64_t seed);
};

// M(xi) = sum w_i / |p_i - xi|; +inf exactly when xi hits an atom
double newton_potential(const PlanarMeasure& mu, cplx xi);

// mean of |w - zeta| * M(w) over the disc D(zeta, r); the atom at zeta
// contributes its weight exactly, the rest by radial Gauss-Legendre (64)
// crossed with an angular trapezoid (256)
double prop11_functional(const PlanarMeasure& mu, cplx zeta, double r);

// Monte Carlo fraction of D(zeta, r) where |w - zeta| * M(w) > eps
double pi_set_density(const PlanarMeasure& mu, cplx zeta, double eps, double r, long samples,
                      std::uint64_t seed);

struct DensityEstimate {
  double ratio = 0.0;
  double std_error = 0.0;
  long inside = 0;
  long total = 0;
};

// Monte Carlo estimate of area(D(zeta, r) cap D) / (pi r^2)
DensityEstimate density_ratio(const PlanarDomainSampler& D, cplx zeta, double r, long samples);

// polynomial in one variable, coefficients by ascending degree, never empty
struct Poly {
  std::vector<cplx> coef{cplx(0.0, 0.0)};

  int degree() const { return static_cast<int>(coef.size()) - 1; }
  cplx eval(cplx z) const;
};

// |f(zeta)| <= sum w_i |f(p_i)| + tol
bool modulus_jensen_check(const Poly& f, const PlanarMeasure& mu, cplx zeta, double tol = 1e-12);

// g with f(z) = g(z) * (z - eta) + f(eta), by synthetic division
Poly difference_quotient(const Poly& f, cplx eta);

struct CauchyResult {
  std::vector<cplx> eta;
  // first level nu with no admissible point, or -1 when all nu_max succeeded
  int failure_index = -1;

  bool complete() const { return failure_index < 0; }
};

// for each nu = 1..nu_max find eta in D with |zeta - eta| * M(eta) <= 2^-nu,
// searching 16 rays from zeta over dyadic radii 2^-e, e = 1..nu+4, with the
// exponent grid refined to half then quarter steps before giving up
CauchyResult extract_cauchy(const PlanarMeasure& mu, cplx zeta, const PlanarDomainSampler& D,
                            int nu_max);

}  // namespace carat::potential1d
