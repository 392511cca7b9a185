#include "carat/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "carat/booster.hpp"
#include "carat/completeness.hpp"
#include "carat/edwards.hpp"
#include "carat/errors.hpp"
#include "carat/geom.hpp"
#include "carat/hyperbolic.hpp"
#include "carat/orbit.hpp"
#include "carat/peak.hpp"
#include "carat/potential1d.hpp"
#include "carat/report.hpp"

namespace carat::cli {

namespace {

using geom::cplx;
using rjson = report::json;

double parse_real(const std::string& s, const char* what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw InputError(std::string("trailing characters in ") + what + ": " + s);
    return v;
  } catch (const std::invalid_argument&) {
    throw InputError(std::string("cannot parse ") + what + ": " + s);
  } catch (const std::out_of_range&) {
    throw InputError(std::string("out of range ") + what + ": " + s);
  }
}

// "re,im" pair or a plain real
cplx parse_cplx(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return cplx(parse_real(s, "complex literal"), 0.0);
  return cplx(parse_real(s.substr(0, comma), "complex literal"),
              parse_real(s.substr(comma + 1), "complex literal"));
}

std::vector<cplx> parse_point(const std::vector<std::string>& toks) {
  std::vector<cplx> p;
  p.reserve(toks.size());
  for (const auto& t : toks) p.push_back(parse_cplx(t));
  return p;
}

// plain real, p/q, or sqrt(<expr>)
double parse_alpha(const std::string& s) {
  if (s.size() >= 6 && s.rfind("sqrt(", 0) == 0 && s.back() == ')')
    return std::sqrt(parse_alpha(s.substr(5, s.size() - 6)));
  if (const auto slash = s.find('/'); slash != std::string::npos)
    return parse_real(s.substr(0, slash), "rotation number") /
           parse_real(s.substr(slash + 1), "rotation number");
  return parse_real(s, "rotation number");
}

std::vector<std::vector<cplx>> parse_sequence_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open sequence file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("sequence JSON: ") + e.what());
  }
  std::vector<std::vector<cplx>> seq;
  try {
    for (const auto& jp : j.at("points")) {
      std::vector<cplx> p;
      for (const auto& jc : jp) {
        if (jc.is_number()) {
          p.emplace_back(jc.get<double>(), 0.0);
        } else if (jc.is_array() && jc.size() == 2) {
          p.emplace_back(jc.at(0).get<double>(), jc.at(1).get<double>());
        } else {
          throw InputError("sequence entry must be [re, im]");
        }
      }
      seq.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("sequence JSON: ") + e.what());
  }
  return seq;
}

rjson point_json(const std::vector<cplx>& p) {
  rjson a = rjson::array();
  for (const cplx& z : p) a.push_back(report::from_complex(z));
  return a;
}

void write_out(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw InputError("cannot open output file: " + out_path);
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"certified peak-function and completeness toolkit"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string out_path;
  std::uint64_t seed = 0;
  app.add_option("-o,--output", out_path, "write the report to this file instead of stdout");
  app.add_option("--seed", seed, "RNG seed for sampled estimates (surfaced in the report)");

  auto* c_check = app.add_subcommand("check", "completeness verdict for a domain fixture");
  std::string check_domain;
  c_check->add_option("domain", check_domain, "domain fixture (JSON)")->required();

  auto* c_peak = app.add_subcommand("peak", "monomial peak certificate at a boundary point");
  std::string peak_domain;
  std::vector<std::string> peak_zeta, peak_eta;
  double peak_eps = 0.0;
  long long peak_qmax = 100000;
  c_peak->add_option("domain", peak_domain, "domain fixture (JSON)")->required();
  c_peak->add_option("--zeta", peak_zeta, "boundary point, one re,im token per coordinate")
      ->required()
      ->expected(-1);
  c_peak->add_option("--eta", peak_eta, "interior point to separate")->expected(-1);
  c_peak->add_option("--eps", peak_eps, "diophantine tolerance")->required();
  c_peak->add_option("--qmax", peak_qmax, "largest denominator searched");

  auto* c_boost = app.add_subcommand("boost", "verify the boosted peak function on a grid");
  std::string boost_domain;
  std::vector<std::string> boost_zeta, boost_eta;
  int boost_K = 0;
  int boost_grid = 0;
  c_boost->add_option("domain", boost_domain, "domain fixture (JSON)")->required();
  c_boost->add_option("--zeta", boost_zeta, "boundary point, one re,im token per coordinate")
      ->required()
      ->expected(-1);
  c_boost->add_option("--eta", boost_eta, "interior point the family vanishes at")
      ->required()
      ->expected(-1);
  c_boost->add_option("-K", boost_K, "family truncation depth")->required();
  c_boost->add_option("--grid", boost_grid, "number of sampled domain points")->required();

  auto* c_env = app.add_subcommand("envelope", "discrete envelope duality for an instance file");
  std::string env_path;
  c_env->add_option("instance", env_path, "envelope instance (JSON)")->required();

  auto* c_pot = app.add_subcommand("potential", "potential functionals of an atom measure");
  std::string pot_path, pot_zeta;
  double pot_r = 0.001;
  double pot_eps = 0.01;
  long pot_samples = 20000;
  c_pot->add_option("measure", pot_path, "measure file (JSON)")->required();
  c_pot->add_option("--zeta", pot_zeta, "center point as re,im")->required();
  c_pot->add_option("--r", pot_r, "disc radius");
  c_pot->add_option("--eps", pot_eps, "superlevel threshold");
  c_pot->add_option("--grid", pot_samples, "Monte Carlo sample count");

  auto* c_probe = app.add_subcommand("probe", "metric escape probe along a point sequence");
  std::string probe_domain, probe_seq;
  std::vector<std::string> probe_base;
  double probe_threshold = 10.0;
  c_probe->add_option("domain", probe_domain, "domain fixture (JSON)")->required();
  c_probe->add_option("sequence", probe_seq, "sequence file (JSON with a points array)")
      ->required();
  c_probe->add_option("--base", probe_base, "base point (defaults to the first sequence entry)")
      ->expected(-1);
  c_probe->add_option("--threshold", probe_threshold, "distance bound declaring escape");

  auto* c_orbit = app.add_subcommand("orbit", "boundary orbit discrepancy report");
  std::string orbit_alpha;
  long orbit_N = 0;
  std::string orbit_z0, orbit_w0;
  c_orbit->add_option("--alpha", orbit_alpha, "rotation number: real, p/q, or sqrt(x)")
      ->required();
  c_orbit->add_option("-N", orbit_N, "sample count")->required();
  c_orbit->add_option("--z0", orbit_z0, "base point first coordinate as re,im");
  c_orbit->add_option("--w0", orbit_w0, "base point second coordinate as re,im");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 3;
  }

  try {
    if (*c_check) {
      const auto D = geom::ReinhardtDomain::parse_file(check_domain);
      const auto rep = completeness::zwonek_check(D);
      rjson j;
      j["domain"] = D.label();
      j["verdict"] = rep.verdict;
      j["bounded"] = rep.bounded;
      rjson axes = rjson::array();
      for (const auto& a : rep.axis_results) {
        rjson aj;
        aj["j"] = a.j;
        aj["closure_meets"] = a.closure_meets;
        aj["interior_meets"] = a.interior_meets;
        axes.push_back(aj);
      }
      j["axis_results"] = axes;
      rjson ws = rjson::array();
      for (const auto& w : rep.witnesses) {
        rjson wj;
        wj["axis"] = w.axis;
        wj["kind"] = w.kind;
        wj["ray"] = report::from_vector(w.ray);
        wj["blocking_rows"] = w.blocking_rows;
        wj["reduced_infeasible"] = w.reduced_infeasible;
        ws.push_back(wj);
      }
      j["witnesses"] = ws;
      write_out(report::emit(j), out_path, out);
      if (rep.verdict == "c_complete") return 0;
      if (rep.verdict == "not_c_complete") return 1;
      return 2;
    }

    if (*c_peak) {
      const auto D = geom::ReinhardtDomain::parse_file(peak_domain);
      std::optional<std::vector<cplx>> eta;
      if (!peak_eta.empty()) eta = parse_point(peak_eta);
      const auto cert =
          peak::build_certificate(D, parse_point(peak_zeta), std::move(eta), peak_eps, peak_qmax);
      rjson j;
      j["domain"] = cert.domain_label;
      j["zeta"] = point_json(cert.zeta);
      j["eta"] = point_json(cert.eta);
      j["eps"] = cert.dio.eps;
      j["q"] = cert.dio.q;
      j["beta"] = cert.dio.beta;
      j["dio_errors"] = report::from_vector(cert.dio.errors);
      j["sup_log"] = cert.sup_log;
      j["sup_bound"] = cert.sup_bound;
      j["value_at_eta"] = report::from_complex(cert.value_at_eta);
      j["R"] = cert.R;
      j["sketch_based"] = cert.sketch_based;
      write_out(report::emit(j), out_path, out);
      return 0;
    }

    if (*c_boost) {
      const auto D = geom::ReinhardtDomain::parse_file(boost_domain);
      const auto fam =
          peak::weak_peak_family(D, parse_point(boost_zeta), parse_point(boost_eta), boost_K);
      const auto b = booster::from_family(fam);
      const auto grid = booster::sample_domain_grid(D, boost_grid, seed);
      const auto rep = booster::verify_peak(b, grid, fam.zeta);
      rjson j;
      j["domain"] = fam.domain_label;
      j["zeta"] = point_json(fam.zeta);
      j["eta"] = point_json(fam.eta);
      j["K"] = b.K;
      j["grid"] = boost_grid;
      j["seed"] = seed;
      j["pass"] = rep.pass;
      j["max_abs_F"] = rep.max_abs_F;
      j["zeta_gap"] = rep.zeta_gap;
      j["zeta_bound"] = rep.zeta_bound;
      rjson uk = rjson::array();
      for (const auto& s : rep.uk) {
        rjson sj;
        sj["k"] = s.k;
        sj["samples"] = s.samples;
        sj["worst_gap"] = s.worst_gap;
        sj["bound"] = s.bound;
        sj["min_re_h"] = s.min_re_h;
        uk.push_back(sj);
      }
      j["uk"] = uk;
      j["failure"] = rep.failure;
      write_out(report::emit(j), out_path, out);
      return rep.pass ? 0 : 1;
    }

    if (*c_env) {
      const auto inst = edwards::EnvelopeInstance::parse_file(env_path);
      const auto res = edwards::solve_envelope(inst);
      rjson j;
      j["primal"] = res.primal;
      j["c0"] = res.c0;
      j["t"] = report::from_vector(res.t);
      j["dual"] = res.dual;
      j["gap"] = res.gap;
      j["measure"] = report::from_vector(res.measure);
      write_out(report::emit(j), out_path, out);
      return 0;
    }

    if (*c_pot) {
      const auto mu = potential1d::PlanarMeasure::parse_file(pot_path);
      const cplx zeta = parse_cplx(pot_zeta);
      rjson j;
      j["zeta"] = report::from_complex(zeta);
      j["r"] = pot_r;
      j["eps"] = pot_eps;
      j["seed"] = seed;
      j["grid"] = pot_samples;
      j["newton_potential"] = potential1d::newton_potential(mu, zeta);
      j["disc_mean"] = potential1d::prop11_functional(mu, zeta, pot_r);
      j["superlevel_density"] =
          potential1d::pi_set_density(mu, zeta, pot_eps, pot_r, pot_samples, seed);
      write_out(report::emit(j), out_path, out);
      return 0;
    }

    if (*c_probe) {
      const auto D = geom::ReinhardtDomain::parse_file(probe_domain);
      const auto seq = parse_sequence_file(probe_seq);
      if (seq.empty()) throw InputError("sequence file holds no points");
      const auto base = probe_base.empty() ? seq.front() : parse_point(probe_base);
      const auto family = hyperbolic::coordinate_family(D);
      const auto res = hyperbolic::escape_probe(D, family, base, seq, probe_threshold);
      rjson j;
      j["domain"] = D.label();
      j["base"] = point_json(base);
      j["points"] = static_cast<long long>(seq.size());
      j["threshold"] = res.threshold;
      j["divergent"] = res.divergent;
      j["sup_modulus"] = res.sup_modulus;
      j["lb_max"] = res.lb_max;
      write_out(report::emit(j), out_path, out);
      return res.divergent ? 0 : 1;
    }

    if (*c_orbit) {
      const double alpha = parse_alpha(orbit_alpha);
      const auto rep = orbit::orbit_discrepancy(alpha, orbit_N);
      rjson j;
      j["alpha"] = alpha;
      j["N"] = rep.N;
      j["discrepancy"] = rep.value;
      j["rational_alpha"] = rep.rational_alpha;
      j["period"] = rep.period;
      if (!orbit_z0.empty() || !orbit_w0.empty()) {
        if (orbit_z0.empty() || orbit_w0.empty())
          throw InputError("give both --z0 and --w0 or neither");
        orbit::OrbitSpec spec;
        spec.alpha = alpha;
        spec.z0 = parse_cplx(orbit_z0);
        spec.w0 = parse_cplx(orbit_w0);
        double worst = 0.0;
        for (const auto& p : orbit::orbit_points(spec, orbit_N)) {
          const double id = std::abs(p.z) * std::pow(std::abs(p.w), alpha);
          worst = std::max(worst, std::fabs(id - 1.0));
        }
        j["boundary_identity_error"] = worst;
      }
      j["note"] =
          "certifies the density mechanism only; the non-existence of a continuous "
          "peak function is outside numeric scope";
      write_out(report::emit(j), out_path, out);
      return rep.rational_alpha ? 1 : 0;
    }
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 4;
  }
  return 3;
}

}  // namespace carat::cli
