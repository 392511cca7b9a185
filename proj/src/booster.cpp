#include "carat/booster.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "carat/errors.hpp"
#include "carat/rng.hpp"

namespace carat::booster {

namespace {

std::string point_repr(const std::vector<cplx>& z) {
  std::ostringstream os;
  os << "(";
  for (size_t j = 0; j < z.size(); ++j) {
    if (j) os << ", ";
    os << z[j].real() << (z[j].imag() < 0 ? "-" : "+") << std::fabs(z[j].imag()) << "i";
  }
  os << ")";
  return os.str();
}

}  // namespace

double BoosterFunction::eps_k(int k) { return std::ldexp(1.0, -2 * k); }

namespace {

// premise |f| < 1 + eps, compared as |f| - 1 < eps so that eps below one ulp
// of 1.0 still separates f = 1 (allowed) from genuine violations
cplx checked_value(const FamilyEval& f, int k, const std::vector<cplx>& z) {
  const cplx fk = f(k, z);
  if (std::abs(fk) - 1.0 >= BoosterFunction::eps_k(k)) {
    std::ostringstream msg;
    msg << "family premise |f_k| < 1 + eps_k fails at k=" << k << ": |f|=" << std::abs(fk);
    throw CertificateViolation(msg.str());
  }
  return fk;
}

}  // namespace

cplx BoosterFunction::f_tilde(int k, const std::vector<cplx>& z) const {
  return checked_value(f, k, z) / (1.0 + eps_k(k));
}

bool BoosterFunction::in_U(int k, const std::vector<cplx>& z) const {
  return std::abs(f(k, z) - cplx(1.0, 0.0)) < eps_k(k);
}

BoosterFunction from_family(const peak::WeakPeakFamily& fam, int K) {
  const int n = static_cast<int>(fam.members.size());
  if (K < 0) K = n;
  if (K < 1 || K > n) throw InputError("truncation length must lie in 1..family size");
  BoosterFunction b;
  b.K = K;
  b.f = [fam](int k, const std::vector<cplx>& z) { return fam.members[k - 1].eval(z); };
  return b;
}

bool cayley_threshold(double eps, cplx z) {
  if (!(eps > 0.0)) throw InputError("cayley threshold needs eps > 0");
  if (z == cplx(1.0, 0.0)) return true;  // limit of Re((1+z)/(1-z)) is +inf
  const double center = 1.0 / (1.0 + eps);
  const double radius = eps / (1.0 + eps);
  const double disc_margin = std::abs(z - cplx(center, 0.0)) - radius;
  const cplx w = (cplx(1.0, 0.0) + z) / (cplx(1.0, 0.0) - z);
  const double re_margin = w.real() - 1.0 / eps;
  const bool by_disc = disc_margin < 0.0;
  const bool by_re = re_margin > 0.0;
  if (by_disc != by_re && std::fabs(disc_margin) > 1e-10 && std::fabs(re_margin) > 1e-10)
    throw NumericError("cayley threshold forms disagree away from the boundary");
  return by_disc;
}

Evaluation evaluate(const BoosterFunction& b, const std::vector<cplx>& z) {
  if (b.K < 1) throw InputError("booster needs K >= 1");
  cplx h(0.0, 0.0);
  double tail = 0.0;
  for (int k = 1; k <= b.K; ++k) {
    const double e = BoosterFunction::eps_k(k);
    const cplx fk = checked_value(b.f, k, z);
    const cplx one(1.0, 0.0);
    // (1+f~)/(1-f~) with denominators cleared; (1-f) is formed before adding
    // eps, so the term stays finite and accurate even when eps < ulp(1)
    const cplx den = (one - fk) + e;
    const cplx term = ((one + fk) + e) / den;
    if (!(term.real() > 0.0)) throw NumericError("cayley term lost its positive real part");
    h += std::ldexp(1.0, -k) * term;
    if (k == b.K) tail = std::ldexp(1.0, -k) * (2.0 + e) / std::abs(den);
  }
  Evaluation ev;
  ev.h = h;
  ev.gap = 2.0 / (h + cplx(1.0, 0.0));
  // past |h| = 1e6 the quotient form would waste the digits that place F
  // next to 1, and h(zeta) is genuinely infinite; the limit is the contract
  ev.F = std::abs(h) > 1e6 ? cplx(1.0, 0.0) - ev.gap
                           : (h - cplx(1.0, 0.0)) / (h + cplx(1.0, 0.0));
  ev.tail_hint = tail;
  return ev;
}

cplx evaluate_F(const BoosterFunction& b, const std::vector<cplx>& z) {
  return evaluate(b, z).F;
}

double peak_gap_bound(int k) {
  if (k < 1) throw InputError("peak gap bound needs k >= 1");
  return 2.0 / (std::ldexp(1.0, k) + 1.0);
}

PeakReport verify_peak(const BoosterFunction& b, const std::vector<std::vector<cplx>>& grid,
                       const std::vector<cplx>& zeta) {
  PeakReport rep;
  rep.zeta_bound = std::ldexp(1.0, -b.K);

  std::vector<UkStat> stats(b.K);
  for (int k = 1; k <= b.K; ++k) {
    stats[k - 1].k = k;
    stats[k - 1].bound = peak_gap_bound(k);
    stats[k - 1].min_re_h = std::numeric_limits<double>::infinity();
  }

  auto fail = [&rep](const std::string& what, const std::vector<cplx>& at) {
    if (rep.failure.empty()) rep.failure = what + " at " + point_repr(at);
  };

  for (const auto& z : grid) {
    const Evaluation ev = evaluate(b, z);
    const double mod = std::abs(ev.F);
    if (mod > rep.max_abs_F) {
      rep.max_abs_F = mod;
      rep.worst_point = z;
    }
    if (!(mod < 1.0)) fail("|F| reached 1", z);
    for (int k = 1; k <= b.K; ++k) {
      if (!b.in_U(k, z)) continue;
      UkStat& st = stats[k - 1];
      ++st.samples;
      const double gap = std::abs(ev.gap);
      st.worst_gap = std::max(st.worst_gap, gap);
      st.min_re_h = std::min(st.min_re_h, ev.h.real());
      if (gap > st.bound + 1e-6) fail("peak gap bound broken on U_" + std::to_string(k), z);
      if (ev.h.real() < std::ldexp(1.0, k) * (1.0 - 1e-9))
        fail("Re h fell under 2^k on U_" + std::to_string(k), z);
    }
  }

  const Evaluation at_peak = evaluate(b, zeta);
  rep.zeta_gap = std::abs(at_peak.gap);
  if (rep.zeta_gap > rep.zeta_bound) fail("peak value drifted from 1", zeta);

  for (const auto& st : stats)
    if (st.samples > 0) rep.uk.push_back(st);
  rep.pass = rep.failure.empty();
  return rep;
}

std::vector<std::vector<cplx>> sample_domain_grid(const geom::ReinhardtDomain& D, int count,
                                                  std::uint64_t seed) {
  if (count < 0) throw InputError("grid size must be nonnegative");
  const std::vector<double> bounds = D.modulus_bounds();
  SplitMix64 rng(seed);
  std::vector<std::vector<cplx>> grid;
  grid.reserve(static_cast<size_t>(count));
  long attempts = 0;
  const long cap = 1000L * (count + 1);
  while (static_cast<int>(grid.size()) < count) {
    if (++attempts > cap) throw NumericError("domain grid rejection sampling stalled");
    std::vector<cplx> z(bounds.size());
    for (size_t j = 0; j < bounds.size(); ++j) {
      const double top = std::log(bounds[j]);
      const double u = rng.uniform(top - 6.0, top);
      const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
      z[j] = std::polar(std::exp(u), th);
    }
    if (D.contains(z)) grid.push_back(std::move(z));
  }
  return grid;
}

}  // namespace carat::booster
