#include "carat/potential1d.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "carat/errors.hpp"
#include "carat/rng.hpp"

namespace carat::potential1d {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

double potential_of(const PlanarMeasure& mu, cplx xi) {
  double s = 0.0;
  for (const auto& a : mu.atoms) s += a.w / std::abs(a.p - xi);
  return s;
}

// Legendre nodes and weights on [-1, 1], cached per order
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussRule& gauss_legendre_64() {
  static const GaussRule rule = [] {
    constexpr int n = 64;
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-15) break;
      }
      r.x[i] = -x;
      r.x[n - 1 - i] = x;
      r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

// deterministic uniform draws from D(zeta, r) in fixed blocks with derived
// per-block streams, so a partition over workers reproduces the schedule
template <class F>
void sample_disc(cplx zeta, double r, long samples, std::uint64_t seed, F&& visit) {
  constexpr long kBlock = 4096;
  long i = 0;
  for (long b = 0; i < samples; ++b) {
    SplitMix64 rng = SplitMix64(seed).split(static_cast<std::uint64_t>(b));
    for (long k = 0; k < kBlock && i < samples; ++k, ++i) {
      const double rho = r * std::sqrt(rng.uniform());
      const double th = 2.0 * kPi * rng.uniform();
      visit(zeta + cplx(rho * std::cos(th), rho * std::sin(th)));
    }
  }
}

}  // namespace

void PlanarMeasure::validate() const {
  if (atoms.empty()) throw InputError("measure needs at least one atom");
  double total = 0.0;
  for (const auto& a : atoms) {
    if (!std::isfinite(a.p.real()) || !std::isfinite(a.p.imag()))
      throw InputError("atom positions must be finite");
    if (!(a.w > 0.0)) throw InputError("atom weights must be positive");
    total += a.w;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw InputError("atom weights must sum to one");
}

double PlanarMeasure::mass_at(cplx zeta) const {
  double s = 0.0;
  for (const auto& a : atoms)
    if (a.p.real() == zeta.real() && a.p.imag() == zeta.imag()) s += a.w;
  return s;
}

PlanarMeasure PlanarMeasure::parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("measure JSON: ") + e.what());
  }
  PlanarMeasure mu;
  try {
    for (const json& ja : j.at("atoms")) {
      Atom a;
      const json& jp = ja.at("p");
      if (jp.is_number()) {
        a.p = cplx(jp.get<double>(), 0.0);
      } else if (jp.is_array() && jp.size() == 2) {
        a.p = cplx(jp.at(0).get<double>(), jp.at(1).get<double>());
      } else {
        throw InputError("atom position must be [re, im]");
      }
      a.w = ja.at("w").get<double>();
      mu.atoms.push_back(a);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("measure JSON: ") + e.what());
  }
  mu.validate();
  return mu;
}

PlanarMeasure PlanarMeasure::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open measure file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

PlanarDomainSampler PlanarDomainSampler::unit_disc(std::uint64_t seed) {
  PlanarDomainSampler D;
  D.contains = [](cplx z) { return std::abs(z) < 1.0; };
  D.seed = seed;
  return D;
}

PlanarDomainSampler PlanarDomainSampler::slit_disc(std::uint64_t seed) {
  PlanarDomainSampler D;
  D.contains = [](cplx z) {
    if (std::abs(z) >= 1.0) return false;
    return !(z.imag() == 0.0 && z.real() >= 0.0);
  };
  D.seed = seed;
  return D;
}

double newton_potential(const PlanarMeasure& mu, cplx xi) {
  mu.validate();
  return potential_of(mu, xi);
}

double prop11_functional(const PlanarMeasure& mu, cplx zeta, double r) {
  mu.validate();
  if (!(r > 0.0)) throw InputError("disc radius must be positive");

  // the atom at zeta contributes |w - zeta| * w_zeta / |w - zeta| = w_zeta
  PlanarMeasure rest;
  double at_zeta = 0.0;
  for (const auto& a : mu.atoms) {
    if (a.p.real() == zeta.real() && a.p.imag() == zeta.imag())
      at_zeta += a.w;
    else
      rest.atoms.push_back(a);
  }
  if (rest.atoms.empty()) return at_zeta;

  const GaussRule& gl = gauss_legendre_64();
  constexpr int kAngular = 256;
  double integral = 0.0;  // int_0^r rho^2 * (sum_theta M) drho
  for (size_t i = 0; i < gl.x.size(); ++i) {
    const double rho = 0.5 * r * (gl.x[i] + 1.0);
    double ang = 0.0;
    for (int k = 0; k < kAngular; ++k) {
      const double th = 2.0 * kPi * k / kAngular;
      ang += potential_of(rest, zeta + cplx(rho * std::cos(th), rho * std::sin(th)));
    }
    integral += 0.5 * r * gl.w[i] * rho * rho * (2.0 * kPi / kAngular) * ang;
  }
  return at_zeta + integral / (kPi * r * r);
}

double pi_set_density(const PlanarMeasure& mu, cplx zeta, double eps, double r, long samples,
                      std::uint64_t seed) {
  mu.validate();
  if (!(eps > 0.0) || !(r > 0.0)) throw InputError("eps and r must be positive");
  if (samples <= 0) throw InputError("sample count must be positive");
  long hits = 0;
  sample_disc(zeta, r, samples, seed, [&](cplx w) {
    if (std::abs(w - zeta) * potential_of(mu, w) > eps) ++hits;
  });
  return static_cast<double>(hits) / static_cast<double>(samples);
}

DensityEstimate density_ratio(const PlanarDomainSampler& D, cplx zeta, double r, long samples) {
  if (!D.contains) throw InputError("domain sampler has no membership predicate");
  if (!(r > 0.0)) throw InputError("disc radius must be positive");
  if (samples <= 0) throw InputError("sample count must be positive");
  DensityEstimate est;
  est.total = samples;
  sample_disc(zeta, r, samples, D.seed, [&](cplx w) {
    if (D.contains(w)) ++est.inside;
  });
  est.ratio = static_cast<double>(est.inside) / static_cast<double>(est.total);
  est.std_error = std::sqrt(est.ratio * (1.0 - est.ratio) / static_cast<double>(est.total));
  return est;
}

cplx Poly::eval(cplx z) const {
  cplx v(0.0, 0.0);
  for (size_t k = coef.size(); k-- > 0;) v = v * z + coef[k];
  return v;
}

bool modulus_jensen_check(const Poly& f, const PlanarMeasure& mu, cplx zeta, double tol) {
  mu.validate();
  double mean = 0.0;
  for (const auto& a : mu.atoms) mean += a.w * std::abs(f.eval(a.p));
  return std::abs(f.eval(zeta)) <= mean + tol;
}

Poly difference_quotient(const Poly& f, cplx eta) {
  const int n = f.degree();
  if (n <= 0) return Poly{};
  Poly g;
  g.coef.assign(static_cast<size_t>(n), cplx(0.0, 0.0));
  cplx b = f.coef[static_cast<size_t>(n)];
  for (int k = n - 1; k >= 0; --k) {
    g.coef[static_cast<size_t>(k)] = b;
    b = f.coef[static_cast<size_t>(k)] + eta * b;
  }
  return g;
}

CauchyResult extract_cauchy(const PlanarMeasure& mu, cplx zeta, const PlanarDomainSampler& D,
                            int nu_max) {
  mu.validate();
  if (nu_max < 0) throw InputError("sequence length must be nonnegative");
  if (mu.mass_at(zeta) > 0.0) throw InputError("measure has an atom at the target point");
  if (!D.contains) throw InputError("domain sampler has no membership predicate");

  CauchyResult res;
  for (int nu = 1; nu <= nu_max; ++nu) {
    const double target = std::ldexp(1.0, -nu);
    bool found = false;
    cplx pick;
    // coarse dyadic exponents first, then the half- and quarter-step grids;
    // within a level the largest radius wins
    for (int level = 0; level < 3 && !found; ++level) {
      const long denom = 1L << level;
      for (long k = denom; k <= (nu + 4) * denom && !found; ++k) {
        if (level > 0 && k % 2 == 0) continue;
        const double rho = std::exp2(-static_cast<double>(k) / static_cast<double>(denom));
        for (int j = 0; j < 16; ++j) {
          const double th = 2.0 * kPi * j / 16.0;
          const cplx eta = zeta + cplx(rho * std::cos(th), rho * std::sin(th));
          if (!D.contains(eta)) continue;
          if (std::abs(zeta - eta) * potential_of(mu, eta) <= target) {
            pick = eta;
            found = true;
            break;
          }
        }
      }
    }
    if (!found) {
      res.failure_index = nu;
      return res;
    }
    res.eta.push_back(pick);
  }
  return res;
}

}  // namespace carat::potential1d
