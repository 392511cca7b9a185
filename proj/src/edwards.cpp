#include "carat/edwards.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "carat/errors.hpp"
#include "carat/lp.hpp"

namespace carat::edwards {

using nlohmann::json;

namespace {

cplx ipow(cplx z, long long m) {
  if (m < 0) {
    z = cplx(1.0, 0.0) / z;
    m = -m;
  }
  cplx r(1.0, 0.0);
  while (m) {
    if (m & 1) r *= z;
    z *= z;
    m >>= 1;
  }
  return r;
}

lp::Solution solve_or_throw(const lp::Problem& p, const char* what) {
  const auto sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal)
    throw NumericError(std::string(what) + " program did not reach an optimum");
  return sol;
}

}  // namespace

double Generator::eval(const std::vector<cplx>& z) const {
  cplx w = c;
  for (size_t j = 0; j < beta.size(); ++j) {
    if (beta[j] == 0) continue;
    if (z[j] == cplx(0.0, 0.0)) {
      if (beta[j] < 0) throw InputError("generator needs a negative power of a zero coordinate");
      return 0.0;
    }
    w *= ipow(z[j], beta[j]);
  }
  return w.real();
}

void EnvelopeInstance::validate() const {
  if (points.empty()) throw InputError("instance needs at least the base point");
  if (generators.empty()) throw InputError("instance needs at least one generator");
  const size_t n = points[0].size();
  if (n == 0) throw InputError("points need at least one coordinate");
  for (const auto& p : points)
    if (p.size() != n) throw InputError("points disagree on dimension");
  for (const auto& g : generators)
    if (g.beta.size() != n) throw InputError("generator exponent dimension mismatch");
  if (phi.size() != points.size()) throw InputError("phi must give one value per point");
  for (const double v : phi)
    if (!std::isfinite(v)) throw InputError("phi values must be finite");
}

double EnvelopeInstance::psi(size_t g, size_t i) const { return generators[g].eval(points[i]); }

EnvelopeInstance EnvelopeInstance::parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
  EnvelopeInstance inst;
  try {
    const auto read_cplx = [](const json& v, const char* where) -> cplx {
      if (v.is_number()) return cplx(v.get<double>(), 0.0);
      if (!v.is_array() || v.size() != 2)
        throw InputError(std::string(where) + " must be [re, im]");
      return cplx(v.at(0).get<double>(), v.at(1).get<double>());
    };
    for (const json& jp : j.at("points")) {
      std::vector<cplx> p;
      for (const json& jc : jp) p.push_back(read_cplx(jc, "points entry"));
      inst.points.push_back(std::move(p));
    }
    for (const json& jg : j.at("generators")) {
      Generator g;
      g.c = read_cplx(jg.at("c"), "generator c");
      for (const json& jb : jg.at("beta")) {
        if (!jb.is_number_integer()) throw InputError("generator beta must be integers");
        g.beta.push_back(jb.get<long long>());
      }
      inst.generators.push_back(std::move(g));
    }
    inst.phi = j.at("phi").get<std::vector<double>>();
    const size_t base = j.value("base", 0);
    if (base >= inst.points.size()) throw InputError("base index out of range");
    if (base != 0) {
      // base point to the front, everything else keeps its order
      std::rotate(inst.points.begin(), inst.points.begin() + base, inst.points.begin() + base + 1);
      std::rotate(inst.phi.begin(), inst.phi.begin() + base, inst.phi.begin() + base + 1);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("instance JSON: ") + e.what());
  }
  inst.validate();
  return inst;
}

EnvelopeInstance EnvelopeInstance::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

PrimalResult primal_envelope(const EnvelopeInstance& inst) {
  inst.validate();
  const size_t P = inst.points.size();
  const size_t G = inst.generators.size();
  lp::Problem p;
  p.c.resize(1 + G);
  p.c[0] = 1.0;
  for (size_t g = 0; g < G; ++g) p.c[1 + g] = inst.psi(g, 0);
  for (size_t i = 0; i < P; ++i) {
    lp::Row row;
    row.a.resize(1 + G);
    row.a[0] = 1.0;
    for (size_t g = 0; g < G; ++g) row.a[1 + g] = inst.psi(g, i);
    row.b = inst.phi[i];
    p.rows.push_back(std::move(row));
  }
  p.free_var.assign(1 + G, false);
  p.free_var[0] = true;
  const auto sol = solve_or_throw(p, "envelope");
  PrimalResult res;
  res.value = sol.value;
  res.c0 = sol.x[0];
  res.t.assign(sol.x.begin() + 1, sol.x.end());
  return res;
}

DualResult dual_envelope(const EnvelopeInstance& inst) {
  inst.validate();
  const size_t P = inst.points.size();
  const size_t G = inst.generators.size();
  lp::Problem p;
  p.c.resize(P);
  for (size_t i = 0; i < P; ++i) p.c[i] = -inst.phi[i];
  lp::Row norm;
  norm.a.assign(P, 1.0);
  norm.rel = lp::Rel::EQ;
  norm.b = 1.0;
  p.rows.push_back(std::move(norm));
  for (size_t g = 0; g < G; ++g) {
    lp::Row row;  // sum_i mu_i psi_g(x_i) >= psi_g(x_0), negated into <=
    row.a.resize(P);
    for (size_t i = 0; i < P; ++i) row.a[i] = -inst.psi(g, i);
    row.b = -inst.psi(g, 0);
    p.rows.push_back(std::move(row));
  }
  const auto sol = solve_or_throw(p, "measure");
  DualResult res;
  res.value = -sol.value;
  res.mu = sol.x;
  return res;
}

EnvelopeResult solve_envelope(const EnvelopeInstance& inst) {
  const PrimalResult pr = primal_envelope(inst);
  const DualResult du = dual_envelope(inst);
  EnvelopeResult res;
  res.primal = pr.value;
  res.c0 = pr.c0;
  res.t = pr.t;
  res.dual = du.value;
  res.measure = du.mu;
  res.gap = pr.value - du.value;
  if (std::fabs(res.gap) > 1e-7 * (1.0 + std::fabs(res.primal)))
    throw NumericError("envelope duality gap exceeded tolerance");
  return res;
}

bool verify_measure(const EnvelopeInstance& inst, const std::vector<double>& mu,
                    MeasureMode mode) {
  inst.validate();
  if (mu.size() != inst.points.size()) throw InputError("measure size mismatch");
  double total = 0.0;
  for (const double m : mu) {
    if (m < -1e-12) return false;
    total += m;
  }
  if (std::fabs(total - 1.0) > 1e-9) return false;
  for (size_t g = 0; g < inst.generators.size(); ++g) {
    double mean = 0.0;
    for (size_t i = 0; i < mu.size(); ++i) mean += mu[i] * inst.psi(g, i);
    const double at_base = inst.psi(g, 0);
    if (mode == MeasureMode::representing) {
      if (std::fabs(mean - at_base) > 1e-9) return false;
    } else {
      if (mean < at_base - 1e-9) return false;
    }
  }
  return true;
}

double max_offbase_mass(const EnvelopeInstance& inst) {
  inst.validate();
  const size_t P = inst.points.size();
  const size_t G = inst.generators.size();
  lp::Problem p;
  p.c.assign(P, 1.0);
  p.c[0] = 0.0;
  lp::Row norm;
  norm.a.assign(P, 1.0);
  norm.rel = lp::Rel::EQ;
  norm.b = 1.0;
  p.rows.push_back(std::move(norm));
  for (size_t g = 0; g < G; ++g) {
    lp::Row row;  // representing equality per generator
    row.a.resize(P);
    for (size_t i = 0; i < P; ++i) row.a[i] = inst.psi(g, i);
    row.rel = lp::Rel::EQ;
    row.b = inst.psi(g, 0);
    p.rows.push_back(std::move(row));
  }
  const auto sol = solve_or_throw(p, "off-base mass");
  return std::min(1.0, std::max(0.0, sol.value));
}

}  // namespace carat::edwards
