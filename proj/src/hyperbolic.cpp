#include "carat/hyperbolic.hpp"

#include <cmath>

#include "carat/errors.hpp"

namespace carat::hyperbolic {

double poincare(cplx a, cplx b) {
  if (!(std::abs(a) < 1.0) || !(std::abs(b) < 1.0))
    throw InputError("poincare: arguments must lie strictly inside the unit disc");
  const double num = std::abs(a - b);
  if (num == 0.0) return 0.0;
  const double den = std::abs(cplx(1.0, 0.0) - std::conj(b) * a);
  const double m = num / den;
  return std::atanh(m);
}

cplx MonomialMap::eval(const std::vector<cplx>& z) const {
  if (z.size() != beta.size()) throw InputError("monomial map dimension mismatch");
  cplx acc = coeff;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    const long long e = beta[j];
    if (e == 0) continue;
    if (z[j] == cplx(0.0, 0.0)) {
      if (e > 0) return cplx(0.0, 0.0);
      throw InputError("monomial map: negative power at a zero coordinate");
    }
    acc *= std::exp(static_cast<double>(e) * std::log(z[j]));
  }
  return acc;
}

BoundedMapFamily coordinate_family(const geom::ReinhardtDomain& D) {
  BoundedMapFamily fam;
  const std::vector<double> bounds = D.modulus_bounds();
  for (int j = 0; j < D.n(); ++j) {
    MonomialMap m;
    m.coeff = cplx(1.0 / bounds[j], 0.0);
    m.beta.assign(D.n(), 0);
    m.beta[j] = 1;
    fam.maps.push_back(std::move(m));
    fam.sup_bounds.push_back(1.0);
  }
  return fam;
}

double caratheodory_lb(const geom::ReinhardtDomain& D, const BoundedMapFamily& family,
                       const std::vector<cplx>& z, const std::vector<cplx>& w) {
  if (!D.contains(z) || !D.contains(w)) throw InputError("caratheodory_lb: point outside the domain");
  double best = 0.0;
  for (const MonomialMap& f : family.maps) best = std::max(best, poincare(f.eval(z), f.eval(w)));
  return best;
}

ProbeResult escape_probe(const geom::ReinhardtDomain& D, const BoundedMapFamily& family,
                         const std::vector<cplx>& base, const std::vector<std::vector<cplx>>& seq,
                         double threshold) {
  if (seq.empty()) throw InputError("escape_probe: empty sequence");
  if (!D.contains(base)) throw InputError("escape_probe: base point outside the domain");
  ProbeResult out;
  out.threshold = threshold;
  for (const auto& zn : seq) {
    if (!D.contains(zn)) throw InputError("escape_probe: sequence point outside the domain");
    for (const MonomialMap& f : family.maps) out.sup_modulus = std::max(out.sup_modulus, std::abs(f.eval(zn)));
    out.lb_max = std::max(out.lb_max, caratheodory_lb(D, family, base, zn));
  }
  out.divergent = out.lb_max > threshold;
  return out;
}

}  // namespace carat::hyperbolic
