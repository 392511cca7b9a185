// python bindings for the main operations: verdicts, peak certificates,
// boosted peaks, envelopes, one-variable potentials, orbits, and the CLI

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>
#include <sstream>
#include <vector>

#include "carat/booster.hpp"
#include "carat/cli.hpp"
#include "carat/completeness.hpp"
#include "carat/edwards.hpp"
#include "carat/errors.hpp"
#include "carat/geom.hpp"
#include "carat/hyperbolic.hpp"
#include "carat/orbit.hpp"
#include "carat/peak.hpp"
#include "carat/potential1d.hpp"

namespace py = pybind11;

using carat::geom::ReinhardtDomain;
using carat::geom::cplx;

namespace {

py::dict dio_dict(const carat::peak::DiophantineApprox& dio) {
  py::dict d;
  d["q"] = dio.q;
  d["beta"] = dio.beta;
  d["eps"] = dio.eps;
  d["errors"] = dio.errors;
  return d;
}

py::dict cert_dict(const carat::peak::PeakCertificate& cert) {
  py::dict d;
  d["domain"] = cert.domain_label;
  d["zeta"] = cert.zeta;
  d["eta"] = cert.eta;
  d["dio"] = dio_dict(cert.dio);
  d["sup_log"] = cert.sup_log;
  d["sup_bound"] = cert.sup_bound;
  d["value_at_eta"] = cert.value_at_eta;
  d["R"] = cert.R;
  d["sketch_based"] = cert.sketch_based;
  return d;
}

carat::potential1d::PlanarMeasure make_measure(
    const std::vector<std::pair<cplx, double>>& atoms) {
  carat::potential1d::PlanarMeasure mu;
  for (const auto& [p, w] : atoms) mu.atoms.push_back({p, w});
  mu.validate();
  return mu;
}

}  // namespace

PYBIND11_MODULE(caratpy, m) {
  m.doc() = "completeness certificates for log-polyhedral Reinhardt domains";

  py::register_exception<carat::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<carat::NumericError>(m, "NumericError", PyExc_RuntimeError);

  py::class_<ReinhardtDomain>(m, "Domain")
      .def_static("parse", &ReinhardtDomain::parse, py::arg("json_text"))
      .def_static("parse_file", &ReinhardtDomain::parse_file, py::arg("path"))
      .def_property_readonly("label", &ReinhardtDomain::label)
      .def_property_readonly("n", &ReinhardtDomain::n)
      .def("contains", &ReinhardtDomain::contains, py::arg("z"))
      .def("modulus_bounds", &ReinhardtDomain::modulus_bounds)
      .def("is_bounded", &ReinhardtDomain::is_bounded)
      .def("__repr__",
           [](const ReinhardtDomain& D) { return "<Domain " + D.label() + ">"; });

  m.def(
      "check",
      [](const ReinhardtDomain& D) {
        const auto rep = carat::completeness::zwonek_check(D);
        py::dict d;
        d["verdict"] = rep.verdict;
        d["bounded"] = rep.bounded;
        py::list axes;
        for (const auto& a : rep.axis_results) {
          py::dict ad;
          ad["j"] = a.j;
          ad["closure_meets"] = a.closure_meets;
          ad["interior_meets"] = a.interior_meets;
          axes.append(ad);
        }
        d["axis_results"] = axes;
        py::list wits;
        for (const auto& w : rep.witnesses) {
          py::dict wd;
          wd["axis"] = w.axis;
          wd["kind"] = w.kind;
          wd["ray"] = w.ray;
          wd["blocking_rows"] = w.blocking_rows;
          wits.append(wd);
        }
        d["witnesses"] = wits;
        return d;
      },
      py::arg("domain"), "Completeness verdict with axis diagnostics and witnesses.");

  m.def(
      "peak_certificate",
      [](const ReinhardtDomain& D, const std::vector<cplx>& zeta,
         std::optional<std::vector<cplx>> eta, double eps, long long q_max) {
        return cert_dict(carat::peak::build_certificate(D, zeta, std::move(eta), eps, q_max));
      },
      py::arg("domain"), py::arg("zeta"), py::arg("eta") = std::nullopt, py::arg("eps") = 0.01,
      py::arg("q_max") = 100000,
      "Monomial near-peak certificate at a boundary point, with LP-exact sup bound.");

  m.def(
      "diophantine",
      [](const std::vector<double>& xi, double eps, long long q_max) {
        return dio_dict(carat::peak::diophantine(xi, eps, q_max));
      },
      py::arg("xi"), py::arg("eps"), py::arg("q_max") = 100000,
      "Smallest q with max_j |q xi_j - beta_j| < eps.");

  m.def(
      "boost_verify",
      [](const ReinhardtDomain& D, const std::vector<cplx>& zeta,
         std::optional<std::vector<cplx>> eta, int K, int grid, std::uint64_t seed) {
        const auto fam = carat::peak::weak_peak_family(D, zeta, std::move(eta), K);
        const auto F = carat::booster::from_family(fam);
        const auto points = carat::booster::sample_domain_grid(D, grid, seed);
        const auto rep = carat::booster::verify_peak(F, points, fam.zeta);
        py::dict d;
        d["pass"] = rep.pass;
        d["max_abs_F"] = rep.max_abs_F;
        d["zeta_gap"] = rep.zeta_gap;
        d["zeta_bound"] = rep.zeta_bound;
        py::list uk;
        for (const auto& st : rep.uk) {
          py::dict sd;
          sd["k"] = st.k;
          sd["samples"] = st.samples;
          sd["worst_gap"] = st.worst_gap;
          sd["bound"] = st.bound;
          uk.append(sd);
        }
        d["uk"] = uk;
        d["failure"] = rep.failure;
        return d;
      },
      py::arg("domain"), py::arg("zeta"), py::arg("eta") = std::nullopt, py::arg("K") = 40,
      py::arg("grid") = 1000, py::arg("seed") = 0,
      "Build the boosted peak function and verify it on a sampled grid.");

  m.def(
      "envelope",
      [](const std::string& path) {
        const auto res =
            carat::edwards::solve_envelope(carat::edwards::EnvelopeInstance::parse_file(path));
        py::dict d;
        d["primal"] = res.primal;
        d["c0"] = res.c0;
        d["t"] = res.t;
        d["dual"] = res.dual;
        d["measure"] = res.measure;
        d["gap"] = res.gap;
        return d;
      },
      py::arg("path"), "Solve the discrete envelope and its Jensen-measure dual from a file.");

  m.def("poincare", &carat::hyperbolic::poincare, py::arg("a"), py::arg("b"),
        "Poincare distance on the unit disc.");

  m.def(
      "newton_potential",
      [](const std::vector<std::pair<cplx, double>>& atoms, cplx xi) {
        return carat::potential1d::newton_potential(make_measure(atoms), xi);
      },
      py::arg("atoms"), py::arg("xi"));

  m.def(
      "disc_mean",
      [](const std::vector<std::pair<cplx, double>>& atoms, cplx zeta, double r) {
        return carat::potential1d::prop11_functional(make_measure(atoms), zeta, r);
      },
      py::arg("atoms"), py::arg("zeta"), py::arg("r"),
      "Mean of the potential with the atom at zeta split off exactly.");

  m.def(
      "extract_cauchy",
      [](const std::vector<std::pair<cplx, double>>& atoms, cplx zeta, int nu_max,
         std::uint64_t seed) {
        const auto res = carat::potential1d::extract_cauchy(
            make_measure(atoms), zeta, carat::potential1d::PlanarDomainSampler::unit_disc(seed),
            nu_max);
        py::dict d;
        d["eta"] = res.eta;
        d["failure_index"] = res.failure_index;
        d["complete"] = res.complete();
        return d;
      },
      py::arg("atoms"), py::arg("zeta"), py::arg("nu_max"), py::arg("seed") = 0,
      "Radius/ray search for a Cauchy sequence with certified potential bounds.");

  m.def(
      "orbit_discrepancy",
      [](double alpha, long long N) {
        const auto rep = carat::orbit::orbit_discrepancy(alpha, N);
        py::dict d;
        d["value"] = rep.value;
        d["N"] = rep.N;
        d["rational_alpha"] = rep.rational_alpha;
        d["period"] = rep.period;
        return d;
      },
      py::arg("alpha"), py::arg("N"),
      "Star discrepancy of the rotation orbit {k*alpha mod 1}.");

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = carat::cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a CLI subcommand in-process; returns (exit_code, stdout, stderr).");
}
