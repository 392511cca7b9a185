#include "carat/peak.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "carat/errors.hpp"
#include "carat/lp.hpp"
#include "carat/surd.hpp"

namespace carat::peak {

namespace {

constexpr long long kFamilyBruteCap = 2000000;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> log_moduli(const std::vector<cplx>& z) {
  std::vector<double> u(z.size());
  for (size_t j = 0; j < z.size(); ++j) {
    if (z[j] == cplx(0.0, 0.0)) throw InputError("zero coordinate has no log modulus");
    u[j] = std::log(std::abs(z[j]));
  }
  return u;
}

// direction xi scaled so its smallest nonzero entry is 1 in modulus
struct ScaledDirection {
  std::vector<double> xi;
  std::vector<geom::Surd> xi_exact;
  double level = 0.0;  // xi·u(zeta) = max of xi·u over the closure
  bool has_exact() const { return !xi_exact.empty(); }
};

ScaledDirection rescale(const SupportFunctional& sf, const std::vector<double>& u0) {
  int arg = -1;
  double mn = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < sf.xi.size(); ++j) {
    const double a = std::fabs(sf.xi[j]);
    if (a > 0.0 && a < mn) {
      mn = a;
      arg = static_cast<int>(j);
    }
  }
  if (arg < 0) throw NumericError("supporting direction vanished");
  ScaledDirection out;
  out.xi.resize(sf.xi.size());
  for (size_t j = 0; j < sf.xi.size(); ++j) out.xi[j] = sf.xi[j] == 0.0 ? 0.0 : sf.xi[j] / mn;
  if (sf.has_exact()) {
    try {
      const geom::Surd denom = surd::abs(sf.xi_exact[arg]);
      std::vector<geom::Surd> ex(sf.xi.size());
      for (size_t j = 0; j < sf.xi.size(); ++j) ex[j] = surd::div(sf.xi_exact[j], denom);
      for (size_t j = 0; j < sf.xi.size(); ++j)
        if (std::fabs(ex[j].value() - out.xi[j]) > 1e-9 * (1.0 + std::fabs(out.xi[j])))
          throw NumericError("exact direction drifted from the floating one");
      out.xi_exact = std::move(ex);
    } catch (const InputError&) {
    } catch (const NumericError&) {
    }
  }
  out.level = dot(out.xi, u0);
  return out;
}

std::optional<DiophantineApprox> brute_search(const std::vector<double>& xi, double eps,
                                              long long q_min, long long q_max) {
  for (long long q = std::max(2LL, q_min); q <= q_max; ++q) {
    DiophantineApprox d;
    d.q = q;
    d.eps = eps;
    bool ok = true;
    for (double x : xi) {
      const double t = static_cast<double>(q) * x;
      const long long b = std::llround(t);
      const double err = std::fabs(t - static_cast<double>(b));
      const bool zero_ok = (x == 0.0) == (b == 0);
      const bool sign_ok = !((x > 0.0 && b < 0) || (x < 0.0 && b > 0));
      if (err > eps || !zero_ok || !sign_ok) {
        ok = false;
        break;
      }
      d.beta.push_back(b);
      d.errors.push_back(err);
    }
    if (ok) return d;
  }
  return std::nullopt;
}

// LP-exact log of sup|z^beta/zeta^beta| over the closure; nullopt = unbounded
std::optional<double> direct_sup_log(const geom::LogPolytope& poly,
                                     const std::vector<double>& beta,
                                     const std::vector<double>& u0) {
  const auto mx = geom::max_linear(poly, beta);
  if (mx.unbounded) return std::nullopt;
  const double v = mx.value - dot(beta, u0);
  if (v < -1e-7) throw NumericError("sup bound fell below the peak value");
  return std::max(0.0, v);
}

// candidate exponent vector with a certified sup bound
struct Candidate {
  i128 q = 0;
  std::vector<i128> beta;
  std::vector<double> beta_dbl;
  std::vector<double> errors;
  std::vector<double> r_vec;  // beta - q*xi', exact residuals
  double sup_log = 0.0;
};

i128 lcm128(i128 a, i128 b) {
  i128 g = a;
  i128 h = b;
  while (h != 0) {
    const i128 t = g % h;
    g = h;
    h = t;
  }
  return (a / g) * b;
}

// Sup bound for huge exponents without forming beta·u: with r = beta - q*xi',
// max(beta·u) = q*level + max(r·u on the xi'-max face) once a penalty LP
// certifies that the face carries the maximum for every t >= M.
std::optional<double> certified_sup_log(const geom::LogPolytope& poly,
                                        const std::vector<double>& xi, double level,
                                        const std::vector<double>& r_vec, double q_dbl,
                                        const std::vector<double>& u0) {
  double rmax = 0.0;
  for (const double r : r_vec) rmax = std::max(rmax, std::fabs(r));
  double l_face = 0.0;
  if (rmax > 0.0) {
    // solve with a unit-scale objective so residuals ~1e-10 stay above the
    // simplex pivot tolerance, then scale the value back
    geom::LogPolytope face = poly;
    face.rows.push_back(lp::Row{xi, lp::Rel::EQ, level});
    lp::Problem fp;
    fp.c.resize(r_vec.size());
    for (size_t j = 0; j < r_vec.size(); ++j) fp.c[j] = r_vec[j] / rmax;
    fp.rows = face.rows;
    fp.free_var.assign(xi.size(), true);
    const auto fsol = lp::solve(fp);
    if (fsol.status != lp::Status::Optimal) return std::nullopt;
    l_face = fsol.value * rmax;
  }

  const double M = std::min(q_dbl, 1e8);
  std::vector<double> obj(xi.size());
  for (size_t j = 0; j < xi.size(); ++j) obj[j] = r_vec[j] + M * xi[j];
  const auto pen = geom::max_linear(poly, obj);
  if (pen.unbounded) return std::nullopt;
  const double vc = pen.value - M * level;
  const double tol = 1e-5 + 1e-13 * M;
  if (vc > l_face + tol) return std::nullopt;  // an off-face vertex still wins at M
  const double v = l_face - dot(r_vec, u0);
  if (v < -1e-7) throw NumericError("sup bound fell below the peak value");
  return std::max(0.0, v);
}

struct ExactParts {
  std::vector<int> rational;    // coordinate indices
  std::vector<i128> num;        // rational values num/den
  std::vector<i128> den;
  std::vector<int> irrational;  // coordinate indices sharing one surd modulus
  std::vector<int> irr_sign;
  geom::Surd alpha;  // |xi'_j| for the irrational block
  i128 L = 1;        // lcm of rational denominators
};

ExactParts split_exact(const std::vector<geom::Surd>& xi_exact) {
  ExactParts parts;
  bool have_alpha = false;
  for (size_t j = 0; j < xi_exact.size(); ++j) {
    const geom::Surd c = surd::canonical(xi_exact[j]);
    if (c.is_rational()) {
      parts.rational.push_back(static_cast<int>(j));
      parts.num.push_back(c.num);
      parts.den.push_back(c.den);
      parts.L = lcm128(parts.L, i128(c.den));
    } else {
      const geom::Surd mag = surd::abs(c);
      if (!have_alpha) {
        parts.alpha = mag;
        have_alpha = true;
      } else if (!surd::same_value(parts.alpha, mag)) {
        throw InputError("exact integerization supports one irrational modulus");
      }
      parts.irrational.push_back(static_cast<int>(j));
      parts.irr_sign.push_back(surd::sign(c));
    }
  }
  if (!have_alpha) parts.alpha = geom::Surd{0, 1, 1};
  return parts;
}

Candidate assemble_candidate(const ExactParts& parts, size_t n, i128 q, i128 p_irr,
                             double residual) {
  Candidate cand;
  cand.q = q;
  cand.beta.assign(n, 0);
  cand.beta_dbl.assign(n, 0.0);
  cand.errors.assign(n, 0.0);
  cand.r_vec.assign(n, 0.0);
  for (size_t i = 0; i < parts.rational.size(); ++i) {
    const int j = parts.rational[i];
    const i128 b = q / parts.den[i] * parts.num[i];
    cand.beta[j] = b;
    cand.beta_dbl[j] = i128_to_double(b);
  }
  for (size_t i = 0; i < parts.irrational.size(); ++i) {
    const int j = parts.irrational[i];
    const int s = parts.irr_sign[i];
    cand.beta[j] = s > 0 ? p_irr : -p_irr;
    cand.beta_dbl[j] = i128_to_double(cand.beta[j]);
    cand.errors[j] = std::fabs(residual);
    cand.r_vec[j] = -static_cast<double>(s) * residual;
  }
  return cand;
}

// Minimal q with every |q*xi'_j - beta_j| <= eps, walking exact convergents.
// Candidates that fail the LP certification are skipped in order, so the
// accepted q stays minimal among certifiable ones.
std::optional<Candidate> exact_search(const geom::LogPolytope& poly, const ScaledDirection& dir,
                                      double eps, const std::vector<double>& u0) {
  const ExactParts parts = split_exact(dir.xi_exact);
  const size_t n = dir.xi.size();
  const i128 q_cap = i128(1) << 100;
  if (parts.irrational.empty()) {
    const i128 q = parts.L >= 2 ? parts.L : 2;
    Candidate cand = assemble_candidate(parts, n, q, 0, 0.0);
    const auto sl = certified_sup_log(poly, dir.xi, dir.level, cand.r_vec,
                                      i128_to_double(q), u0);
    if (!sl) return std::nullopt;
    cand.sup_log = *sl;
    return cand;
  }
  if (eps >= 0.5 / i128_to_double(parts.L))
    throw NumericError("exact integerization needs eps below the rational spacing");
  if (parts.L > i128(1000000000000LL))
    throw NumericError("rational denominators too large to integerize exactly");
  const geom::Surd scaled =
      surd::mul(geom::Surd{static_cast<long long>(parts.L), 1, 1}, parts.alpha);
  surd::ContinuedFraction cf(scaled);
  while (auto c = cf.next()) {
    if (std::fabs(c->residual) > eps) continue;
    i128 q;
    if (__builtin_mul_overflow(parts.L, c->q, &q)) return std::nullopt;
    if (q < 2 || q > q_cap) {
      if (q > q_cap) return std::nullopt;
      continue;
    }
    if (c->p == 0) continue;  // sign rule: zero exponent needs a zero direction
    Candidate cand = assemble_candidate(parts, n, q, c->p, c->residual);
    const auto sl =
        certified_sup_log(poly, dir.xi, dir.level, cand.r_vec, i128_to_double(q), u0);
    if (!sl) continue;
    cand.sup_log = *sl;
    return cand;
  }
  return std::nullopt;
}

Candidate small_to_candidate(const DiophantineApprox& d, const std::vector<double>& xi,
                             double sup_log) {
  Candidate cand;
  cand.q = d.q;
  cand.sup_log = sup_log;
  for (size_t j = 0; j < d.beta.size(); ++j) {
    cand.beta.push_back(d.beta[j]);
    cand.beta_dbl.push_back(static_cast<double>(d.beta[j]));
    cand.errors.push_back(d.errors[j]);
    cand.r_vec.push_back(static_cast<double>(d.beta[j]) -
                         static_cast<double>(d.q) * xi[j]);
  }
  return cand;
}

// At large q the direct LP value beta·u - beta·u0 loses ~5 digits to
// cancellation between O(q) terms. When the direction has an exact carrier,
// recompute the residuals in extended precision and rerun the certified
// face bound, which never forms O(q) quantities.
void refine_with_exact_residuals(const geom::LogPolytope& poly, const ScaledDirection& dir,
                                 Candidate& cand, const std::vector<double>& u0) {
  const long double q_ld = static_cast<long double>(static_cast<long long>(cand.q));
  std::vector<double> r(dir.xi.size());
  for (size_t j = 0; j < dir.xi.size(); ++j) {
    const geom::Surd c = surd::canonical(dir.xi_exact[j]);
    const long double v = q_ld * static_cast<long double>(c.num) /
                          static_cast<long double>(c.den) *
                          sqrtl(static_cast<long double>(c.rad));
    r[j] = static_cast<double>(static_cast<long double>(cand.beta_dbl[j]) - v);
  }
  const auto sl =
      certified_sup_log(poly, dir.xi, dir.level, r, i128_to_double(cand.q), u0);
  if (!sl) return;
  cand.r_vec = r;
  cand.sup_log = *sl;
}

// smallest accepted q: brute force with LP rejection, per the public contract.
// a rejection budget keeps hopeless geometries (every candidate unbounded)
// from scanning the whole window
constexpr int kRejectionBudget = 64;

std::optional<Candidate> brute_candidate(const geom::LogPolytope& poly,
                                         const std::vector<double>& xi, double eps,
                                         long long q_max, const std::vector<double>& u0) {
  long long q_from = 2;
  for (int rejects = 0; rejects <= kRejectionBudget; ++rejects) {
    const auto d = brute_search(xi, eps, q_from, q_max);
    if (!d) return std::nullopt;
    std::vector<double> beta(d->beta.begin(), d->beta.end());
    try {
      if (const auto sl = direct_sup_log(poly, beta, u0)) return small_to_candidate(*d, xi, *sl);
    } catch (const ConditioningError&) {
    }
    q_from = d->q + 1;
  }
  return std::nullopt;
}

std::vector<cplx> embed(const std::vector<cplx>& reduced, const std::vector<int>& kept,
                        size_t n) {
  std::vector<cplx> full(n, cplx(0.0, 0.0));
  for (size_t i = 0; i < kept.size(); ++i) full[kept[i]] = reduced[i];
  return full;
}

std::vector<double> embed(const std::vector<double>& reduced, const std::vector<int>& kept,
                          size_t n, double fill) {
  std::vector<double> full(n, fill);
  for (size_t i = 0; i < kept.size(); ++i) full[kept[i]] = reduced[i];
  return full;
}

}  // namespace

SupportFunctional support_functional(const ReinhardtDomain& D, const std::vector<cplx>& zeta) {
  if (static_cast<int>(zeta.size()) != D.n()) throw InputError("zeta has the wrong dimension");
  for (const cplx& zj : zeta)
    if (zj == cplx(0.0, 0.0))
      throw InputError("zero coordinate in the peak point; project it out first");
  const std::vector<int> active = D.boundary_contact(zeta);
  const auto& rows = D.constraints();
  const int n = D.n();
  SupportFunctional out;
  out.active_rows = active;
  out.xi.assign(n, 0.0);
  for (int i : active) {
    double norm2 = 0.0;
    for (double aj : rows[i].a) norm2 += aj * aj;
    const double norm = std::sqrt(norm2);
    for (int j = 0; j < n; ++j) out.xi[j] += rows[i].a[j] / (norm * static_cast<double>(active.size()));
  }
  double amax = 0.0;
  for (double x : out.xi) amax = std::max(amax, std::fabs(x));
  if (amax < 1e-12)
    throw InputError("active normals cancel; no supporting direction at this point");
  for (double& x : out.xi)
    if (std::fabs(x) < 1e-14 * amax) x = 0.0;

  bool all_exact = true;
  for (int i : active) all_exact = all_exact && rows[i].has_exact();
  if (all_exact) {
    try {
      std::vector<geom::Surd> acc(n, geom::Surd{0, 1, 1});
      for (int i : active) {
        geom::Surd norm2{0, 1, 1};
        for (int j = 0; j < n; ++j) {
          const geom::Surd& aj = rows[i].a_exact[j];
          norm2 = surd::add(norm2, surd::mul(aj, aj));
        }
        const geom::Surd norm = surd::sqrt_of(norm2);
        for (int j = 0; j < n; ++j)
          acc[j] = surd::add(acc[j], surd::div(rows[i].a_exact[j], norm));
      }
      const geom::Surd m = surd::from_ratio(static_cast<long long>(active.size()), 1);
      for (int j = 0; j < n; ++j) acc[j] = surd::div(acc[j], m);
      for (int j = 0; j < n; ++j)
        if (std::fabs(acc[j].value() - out.xi[j]) > 1e-9 * (1.0 + std::fabs(out.xi[j])))
          throw NumericError("exact average drifted");
      out.xi_exact = std::move(acc);
      for (int j = 0; j < n; ++j)
        if (surd::is_zero(out.xi_exact[j])) out.xi[j] = 0.0;
    } catch (const InputError&) {
      out.xi_exact.clear();
    } catch (const NumericError&) {
      out.xi_exact.clear();
    }
  }

  out.sign_pattern.resize(n);
  for (int j = 0; j < n; ++j)
    out.sign_pattern[j] = out.xi[j] > 0.0 ? 1 : (out.xi[j] < 0.0 ? -1 : 0);
  for (int j = 1; j <= n; ++j) {
    if (out.xi[j - 1] >= 0.0) continue;
    if (D.axis_status(j).closure_meets)
      throw InputError(
          "sign condition fails: averaged normal is negative on an axis-meeting coordinate");
  }

  const std::vector<double> u0 = log_moduli(zeta);
  out.level = dot(out.xi, u0);
  const auto mx = geom::max_linear(D.log_polytope(), out.xi);
  if (mx.unbounded || std::fabs(mx.value - out.level) > 1e-7 * (1.0 + std::fabs(out.level)))
    throw NumericError("supporting level certificate failed");
  return out;
}

DiophantineApprox diophantine(const std::vector<double>& xi, double eps, long long q_max) {
  if (eps <= 0.0) throw InputError("diophantine eps must be positive");
  if (q_max < 2) throw InputError("diophantine q_max must be at least 2");
  if (xi.empty()) throw InputError("diophantine needs a nonempty direction");
  if (const auto d = brute_search(xi, eps, 2, q_max)) return *d;
  throw InputError("diophantine search exhausted q_max; raise eps or q_max");
}

cplx MonomialPeak::eval(const std::vector<cplx>& z) const {
  if (z.size() != zeta.size()) throw InputError("evaluation point has the wrong dimension");
  cplx L(0.0, 0.0);
  for (size_t j = 0; j < z.size(); ++j) {
    if (beta[j] == 0.0 || z[j] == zeta[j]) continue;
    if (z[j] == cplx(0.0, 0.0)) {
      if (beta[j] > 0.0) return {0.0, 0.0};
      throw InputError("negative exponent at a zero coordinate");
    }
    L += beta[j] * std::log(z[j] / zeta[j]);
  }
  return std::exp(L);
}

double MonomialPeak::log_abs_from_logs(const std::vector<double>& u) const {
  double s = 0.0;
  for (size_t j = 0; j < beta.size(); ++j) {
    if (beta[j] == 0.0) continue;
    s += beta[j] * (u[j] - std::log(std::abs(zeta[j])));
  }
  return s;
}

MobiusNormalizer mobius_normalize(double eps, cplx w0) {
  if (eps < 0.0) throw InputError("sup excess must be nonnegative");
  if (std::abs(w0) >= 1.0)
    throw InputError("marked value must lie strictly inside the unit disc");
  return MobiusNormalizer{eps, w0};
}

cplx MobiusNormalizer::apply(cplx f) const {
  if (w0 == cplx(0.0, 0.0)) return f;  // map reduces to the identity
  const double s = (1.0 + eps) * (1.0 + eps);
  const cplx A = cplx(s, 0.0) - std::conj(w0);
  const cplx Ag = cplx(s, 0.0) - std::conj(w0) * f;
  const cplx num = A * (f - w0);
  const cplx den = (cplx(1.0, 0.0) - w0) * Ag;
  if (num == den) return {1.0, 0.0};  // peak value, kept exact
  return num / den;
}

double MobiusNormalizer::bound_excess() const {
  const double r = std::abs(w0);
  return eps * (1.0 + eps + r) / ((1.0 + eps) * (1.0 - r));
}

ProjectedPoint project_zero_coords(const ReinhardtDomain& D, const std::vector<cplx>& zeta) {
  if (static_cast<int>(zeta.size()) != D.n()) throw InputError("zeta has the wrong dimension");
  std::vector<int> kept, dropped;
  for (int j = 0; j < D.n(); ++j)
    (zeta[j] == cplx(0.0, 0.0) ? dropped : kept).push_back(j);
  if (dropped.empty()) throw InputError("no zero coordinates to project");
  if (kept.empty()) throw InputError("projection would drop every coordinate");
  for (int j : dropped) {
    if (!D.axis_status(j + 1).interior_meets)
      throw InputError("invalid boundary point: a zero coordinate sits on an axis the domain misses");
  }
  std::vector<geom::Constraint> rows;
  for (const auto& c : D.constraints()) {
    bool discard = false;
    for (int j : dropped) {
      if (c.a[j] < 0.0) throw InputError("invalid boundary point: negative exponent rides a dropped coordinate");
      if (c.a[j] > 0.0) discard = true;
    }
    if (discard) continue;
    geom::Constraint r;
    r.b = c.b;
    for (int j : kept) r.a.push_back(c.a[j]);
    if (c.has_exact())
      for (int j : kept) r.a_exact.push_back(c.a_exact[j]);
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw InputError("projection leaves no constraints");
  ProjectedPoint out{ReinhardtDomain(static_cast<int>(kept.size()), D.label() + "|projected",
                                     std::move(rows)),
                     {}, kept};
  for (int j : kept) out.point.push_back(zeta[j]);
  return out;
}

std::vector<cplx> default_interior_point(const ReinhardtDomain& D) {
  const auto poly = D.log_polytope();
  const int n = D.n();
  lp::Problem p;
  p.c.assign(n + 1, 0.0);
  p.c[n] = 1.0;
  p.free_var.assign(n + 1, true);
  for (const auto& row : poly.rows) {
    lp::Row r;
    r.a = row.a;
    r.a.push_back(1.0);
    r.rel = lp::Rel::LE;
    r.b = row.b;
    p.rows.push_back(std::move(r));
  }
  lp::Row cap;
  cap.a.assign(n + 1, 0.0);
  cap.a[n] = 1.0;
  cap.rel = lp::Rel::LE;
  cap.b = 1.0;
  p.rows.push_back(std::move(cap));
  const auto sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal || sol.x[n] <= lp::kFeasTol)
    throw NumericError("no interior point found");
  std::vector<cplx> eta(n);
  for (int j = 0; j < n; ++j) eta[j] = cplx(std::exp(sol.x[j]), 0.0);
  return eta;
}

PeakCertificate build_certificate(const ReinhardtDomain& D, const std::vector<cplx>& zeta,
                                  std::optional<std::vector<cplx>> eta, double eps,
                                  long long q_max) {
  if (eps <= 0.0) throw InputError("eps must be positive");
  if (static_cast<int>(zeta.size()) != D.n()) throw InputError("zeta has the wrong dimension");

  bool has_zero = false;
  for (const cplx& zj : zeta) has_zero = has_zero || zj == cplx(0.0, 0.0);
  if (has_zero) {
    const ProjectedPoint pr = project_zero_coords(D, zeta);
    try {
      pr.domain.boundary_contact(pr.point);
    } catch (const InputError&) {
      throw InputError("not a boundary point after projection");
    }
    std::optional<std::vector<cplx>> red_eta;
    if (eta) {
      if (eta->size() != zeta.size()) throw InputError("eta has the wrong dimension");
      std::vector<cplx> re;
      for (int j : pr.kept) re.push_back((*eta)[j]);
      red_eta = std::move(re);
    }
    PeakCertificate c = build_certificate(pr.domain, pr.point, std::move(red_eta), eps, q_max);
    PeakCertificate out = std::move(c);
    out.domain_label = D.label();
    out.sketch_based = true;
    out.zeta = zeta;
    out.eta = embed(out.eta, pr.kept, zeta.size());
    out.dio.beta = [&] {
      std::vector<long long> full(zeta.size(), 0);
      for (size_t i = 0; i < pr.kept.size(); ++i) full[pr.kept[i]] = out.dio.beta[i];
      return full;
    }();
    out.dio.errors = embed(out.dio.errors, pr.kept, zeta.size(), 0.0);
    out.g.zeta = zeta;
    out.g.beta = embed(out.g.beta, pr.kept, zeta.size(), 0.0);
    return out;
  }

  const SupportFunctional sf = support_functional(D, zeta);
  const std::vector<double> u0 = log_moduli(zeta);
  const ScaledDirection dir = rescale(sf, u0);
  const auto poly = D.log_polytope();

  std::vector<cplx> eta_pt = eta ? *eta : default_interior_point(D);
  if (static_cast<int>(eta_pt.size()) != D.n()) throw InputError("eta has the wrong dimension");
  for (const cplx& ej : eta_pt)
    if (ej == cplx(0.0, 0.0)) throw InputError("eta must have nonzero coordinates");
  if (!D.contains(eta_pt)) throw InputError("eta must lie inside the domain");

  long long q_from = 2;
  std::optional<DiophantineApprox> dio;
  double sup_log = 0.0;
  for (int rejects = 0; !dio; ++rejects) {
    if (rejects > kRejectionBudget)
      throw InputError("no candidate exponent has a finite certified sup on this domain");
    auto d = brute_search(dir.xi, eps, q_from, q_max);
    if (!d) throw InputError("diophantine search exhausted q_max; raise eps or q_max");
    std::vector<double> beta(d->beta.begin(), d->beta.end());
    bool accepted = false;
    try {
      if (const auto sl = direct_sup_log(poly, beta, u0)) {
        sup_log = *sl;
        accepted = true;
      }
    } catch (const ConditioningError&) {
    }
    if (accepted) {
      dio = std::move(d);
    } else {
      q_from = d->q + 1;
    }
  }

  const std::vector<double> ue = log_moduli(eta_pt);
  const double R = std::exp(dot(dir.xi, ue) - dir.level);
  if (R >= 1.0 - 1e-12)
    throw InputError("eta sits on the supporting level set; pick a deeper interior point");

  PeakCertificate cert;
  cert.domain_label = D.label();
  cert.zeta = zeta;
  cert.eta = eta_pt;
  cert.dio = *dio;
  cert.sup_log = sup_log;
  cert.sup_bound = std::exp(sup_log);
  cert.R = R;
  cert.g.zeta = zeta;
  cert.g.beta.assign(dio->beta.begin(), dio->beta.end());
  cert.value_at_eta = cert.g.eval(eta_pt);
  if (std::abs(cert.value_at_eta) > R * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "eps too large: |g(eta)| exceeds R at this eta; retry with eps <= " << eps / 4.0;
    throw InputError(msg.str());
  }
  return cert;
}

cplx FamilyMember::eval(const std::vector<cplx>& z) const { return mobius.apply(g.eval(z)); }

cplx FamilyMember::eval_at_t(double t) const {
  return mobius.apply(cplx(std::exp(t * log_g_rate), 0.0));
}

std::vector<cplx> FamilyMember::point_at_t(double t) const {
  std::vector<cplx> z(g.zeta.size());
  for (size_t j = 0; j < z.size(); ++j) z[j] = g.zeta[j] * std::exp(t * dir[j]);
  return z;
}

WeakPeakFamily weak_peak_family(const ReinhardtDomain& D, const std::vector<cplx>& zeta,
                                std::optional<std::vector<cplx>> eta, int K) {
  if (K < 0) throw InputError("family length must be nonnegative");
  if (static_cast<int>(zeta.size()) != D.n()) throw InputError("zeta has the wrong dimension");

  bool has_zero = false;
  for (const cplx& zj : zeta) has_zero = has_zero || zj == cplx(0.0, 0.0);
  if (has_zero) {
    const ProjectedPoint pr = project_zero_coords(D, zeta);
    try {
      pr.domain.boundary_contact(pr.point);
    } catch (const InputError&) {
      throw InputError("not a boundary point after projection");
    }
    std::optional<std::vector<cplx>> red_eta;
    if (eta) {
      std::vector<cplx> re;
      for (int j : pr.kept) re.push_back((*eta)[j]);
      red_eta = std::move(re);
    }
    WeakPeakFamily red = weak_peak_family(pr.domain, pr.point, std::move(red_eta), K);
    WeakPeakFamily out;
    out.domain_label = D.label();
    out.zeta = zeta;
    out.eta = embed(red.eta, pr.kept, zeta.size());
    for (FamilyMember& m : red.members) {
      m.g.zeta = zeta;
      m.g.beta = embed(m.g.beta, pr.kept, zeta.size(), 0.0);
      m.dir = embed(m.dir, pr.kept, zeta.size(), 0.0);
      out.members.push_back(std::move(m));
    }
    return out;
  }

  const SupportFunctional sf = support_functional(D, zeta);
  const std::vector<double> u0 = log_moduli(zeta);
  const ScaledDirection dir = rescale(sf, u0);
  const auto poly = D.log_polytope();
  const std::vector<cplx> eta_pt = eta ? *eta : default_interior_point(D);
  for (const cplx& ej : eta_pt)
    if (ej == cplx(0.0, 0.0)) throw InputError("eta must have nonzero coordinates");
  if (!D.contains(eta_pt)) throw InputError("eta must lie inside the domain");
  const std::vector<double> ue = log_moduli(eta_pt);
  if (dot(dir.xi, ue) - dir.level >= -1e-12)
    throw InputError("eta sits on the supporting level set; pick a deeper interior point");

  std::vector<double> ray(u0.size());
  for (size_t j = 0; j < u0.size(); ++j) ray[j] = ue[j] - u0[j];

  WeakPeakFamily fam;
  fam.domain_label = D.label();
  fam.zeta = zeta;
  fam.eta = eta_pt;

  MonomialPeak g;
  g.zeta = zeta;
  for (int k = 1; k <= K; ++k) {
    const double eps_k = std::pow(4.0, -k);
    double target = eps_k / 4.0;
    double eps_search = target;
    std::optional<FamilyMember> member;
    for (int attempt = 0; attempt < 200 && !member; ++attempt) {
      std::optional<Candidate> cand;
      if (eps_search >= 1e-6) {
        cand = brute_candidate(poly, dir.xi, eps_search, kFamilyBruteCap, u0);
        if (cand && dir.has_exact() && cand->q > 10000)
          refine_with_exact_residuals(poly, dir, *cand, u0);
      }
      if (!cand) {
        if (!dir.has_exact()) {
          std::ostringstream msg;
          msg << "integerization stalled at k=" << k
              << ": no exact carrier for the supporting direction";
          throw InputError(msg.str());
        }
        cand = exact_search(poly, dir, eps_search, u0);
      }
      if (!cand) {
        std::ostringstream msg;
        msg << "integerization stalled at k=" << k << ": no certifiable exponent found";
        throw InputError(msg.str());
      }
      const double excess = std::expm1(cand->sup_log);
      if (excess > target) {
        eps_search /= 2.0;
        continue;
      }
      g.beta = cand->beta_dbl;
      const cplx w0 = g.eval(eta_pt);
      const MobiusNormalizer mob = mobius_normalize(excess, w0);
      const double bexcess = mob.bound_excess();
      if (bexcess > eps_k) {
        target /= 4.0;
        eps_search = std::min(eps_search, target);
        continue;
      }
      FamilyMember m;
      m.k = k;
      m.eps_k = eps_k;
      m.g = g;
      m.mobius = mob;
      m.cert_excess = excess;
      m.bound_excess = bexcess;
      m.q = cand->q;
      m.q_repr = i128_to_string(cand->q);
      m.dir = ray;
      m.log_g_rate =
          i128_to_double(cand->q) * (dot(dir.xi, ray)) + dot(cand->r_vec, ray);
      if (m.log_g_rate >= -1e-12) throw NumericError("peak ray does not descend");
      member = std::move(m);
    }
    if (!member) {
      std::ostringstream msg;
      msg << "integerization stalled at k=" << k << ": target never reached";
      throw InputError(msg.str());
    }
    fam.members.push_back(std::move(*member));
  }
  return fam;
}

}  // namespace carat::peak
