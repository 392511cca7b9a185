#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "carat/geom.hpp"
#include "carat/int128.hpp"

namespace carat::peak {

using geom::cplx;
using geom::ReinhardtDomain;

// Supporting direction at a boundary point: the averaged unit normal of the
// active faces. xi·u < level holds strictly inside the log image.
struct SupportFunctional {
  std::vector<double> xi;
  double level = 0.0;
  std::vector<int> active_rows;   // 0-based constraint indices
  std::vector<int> sign_pattern;  // sign of xi_j
  std::vector<geom::Surd> xi_exact;  // empty when no exact carrier survives
  bool has_exact() const { return !xi_exact.empty(); }
};

SupportFunctional support_functional(const ReinhardtDomain& D, const std::vector<cplx>& zeta);

struct DiophantineApprox {
  long long q = 0;
  std::vector<long long> beta;
  double eps = 0.0;
  std::vector<double> errors;  // |q*xi_j - beta_j|
};

// Smallest q in [2, q_max] with beta = round(q*xi) within eps per coordinate
// and sign(beta_j) = sign(xi_j), beta_j = 0 iff xi_j = 0.
DiophantineApprox diophantine(const std::vector<double>& xi, double eps, long long q_max = 100000);

// Monomial quotient z^beta / zeta^beta, evaluated in log space so that
// eval(zeta) == 1 exactly. Exponents are integer-valued doubles; above 2^53
// phases degrade but moduli stay honest.
struct MonomialPeak {
  std::vector<cplx> zeta;
  std::vector<double> beta;
  cplx eval(const std::vector<cplx>& z) const;
  double log_abs_from_logs(const std::vector<double>& u) const;  // beta·(u - u(zeta))
};

struct PeakCertificate {
  std::string domain_label;
  std::vector<cplx> zeta;
  std::vector<cplx> eta;
  DiophantineApprox dio;
  double sup_log = 0.0;    // LP-exact log of the sup bound, >= 0
  double sup_bound = 1.0;  // exp(sup_log)
  cplx value_at_eta;
  double R = 0.0;  // exp(xi'·(u(eta) - u(zeta))) for the rescaled direction
  bool sketch_based = false;  // built through a zero-coordinate projection
  MonomialPeak g;
};

// Full pipeline at one boundary point. Coordinates of zeta equal to zero are
// projected out and the certificate is rebuilt on the reduced domain.
PeakCertificate build_certificate(const ReinhardtDomain& D, const std::vector<cplx>& zeta,
                                  std::optional<std::vector<cplx>> eta, double eps,
                                  long long q_max = 100000);

// Disc-automorphism renormalization: maps a value field with |f| <= 1+eps,
// f(zeta)=1 to one vanishing at the marked value w0 and still fixing 1.
struct MobiusNormalizer {
  double eps = 0.0;
  cplx w0;
  cplx apply(cplx f) const;       // exact 1 at f==1, exact 0 at f==w0
  double bound_excess() const;    // sup|output| <= 1 + bound_excess
};

MobiusNormalizer mobius_normalize(double eps, cplx w0);

struct FamilyMember {
  int k = 0;
  double eps_k = 0.0;  // 4^{-k}
  MonomialPeak g;
  MobiusNormalizer mobius;
  double cert_excess = 0.0;   // sup|g| <= 1 + cert_excess (LP-certified)
  double bound_excess = 0.0;  // sup|f_k| <= 1 + bound_excess <= 1 + eps_k
  i128 q = 0;
  std::string q_repr;
  // interior ray u(zeta) + t*dir, t in (0,1]; moduli move, phases stay zeta's
  std::vector<double> dir;
  double log_g_rate = 0.0;  // d/dt log g along the ray, < 0

  cplx eval(const std::vector<cplx>& z) const;
  cplx eval_at_t(double t) const;
  std::vector<cplx> point_at_t(double t) const;
};

struct WeakPeakFamily {
  std::string domain_label;
  std::vector<cplx> zeta;
  std::vector<cplx> eta;
  std::vector<FamilyMember> members;
};

// K maps with |f_k| < 1 + 4^{-k} on the domain (LP-certified), f_k(zeta) = 1
// and f_k(eta) = 0 exactly. Throws InputError naming the failing k when the
// integerization cannot reach the required precision.
WeakPeakFamily weak_peak_family(const ReinhardtDomain& D, const std::vector<cplx>& zeta,
                                std::optional<std::vector<cplx>> eta, int K);

struct ProjectedPoint {
  ReinhardtDomain domain;
  std::vector<cplx> point;
  std::vector<int> kept;  // 0-based original coordinates that survive
};

// Drops the zero coordinates of zeta; rows riding on a dropped coordinate are
// discarded when the sign allows approaching the axis and rejected otherwise.
ProjectedPoint project_zero_coords(const ReinhardtDomain& D, const std::vector<cplx>& zeta);

// Chebyshev-style default interior point: maximizes the minimum constraint
// slack in log coordinates (capped at 1), realized with positive real parts.
std::vector<cplx> default_interior_point(const ReinhardtDomain& D);

}  // namespace carat::peak
