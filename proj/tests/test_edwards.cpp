#include "carat/edwards.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <doctest.h>

#include "carat/errors.hpp"
#include "carat/geom.hpp"
#include "carat/peak.hpp"
#include "carat/rng.hpp"
#include "grid_oracle.hpp"

using carat::InputError;
using carat::SplitMix64;
using carat::geom::ReinhardtDomain;
using carat::geom::cplx;
using namespace carat::edwards;

namespace {

std::string fx(const char* name) { return std::string(CARAT_FIXTURE_DIR) + "/" + name; }

// base at the origin, symmetric satellites, cone spanned by +-Re z
EnvelopeInstance symmetric3() {
  EnvelopeInstance inst;
  inst.points = {{cplx(0.0, 0.0)}, {cplx(0.5, 0.0)}, {cplx(-0.5, 0.0)}};
  inst.generators = {Generator{cplx(1.0, 0.0), {1}}, Generator{cplx(-1.0, 0.0), {1}}};
  inst.phi = {0.0, 0.5, 0.5};
  return inst;
}

EnvelopeInstance random_instance(SplitMix64 rng, int max_points, int max_gens) {
  EnvelopeInstance inst;
  const int P = 2 + static_cast<int>(rng.next() % static_cast<unsigned>(max_points - 1));
  const int G = 1 + static_cast<int>(rng.next() % static_cast<unsigned>(max_gens));
  for (int i = 0; i < P; ++i) {
    std::vector<cplx> p;
    for (int j = 0; j < 2; ++j)
      p.push_back(std::polar(rng.uniform(0.25, 1.4), rng.uniform(0.0, 2.0 * M_PI)));
    inst.points.push_back(std::move(p));
  }
  for (int g = 0; g < G; ++g) {
    Generator gen;
    gen.c = std::polar(rng.uniform(0.3, 1.2), rng.uniform(0.0, 2.0 * M_PI));
    gen.beta = {static_cast<long long>(rng.next() % 4), static_cast<long long>(rng.next() % 4)};
    inst.generators.push_back(std::move(gen));
  }
  for (int i = 0; i < P; ++i) inst.phi.push_back(rng.uniform(-1.0, 2.0));
  return inst;
}

}  // namespace

TEST_CASE("envelope primal matches hand solutions") {
  {
    const auto pr = primal_envelope(symmetric3());
    CHECK(std::fabs(pr.value) < 1e-9);
  }
  {
    // constant target: only the free constant moves
    EnvelopeInstance inst = symmetric3();
    inst.generators = {Generator{cplx(1.0, 0.0), {1}}};
    inst.phi = {5.0, 5.0, 5.0};
    const auto pr = primal_envelope(inst);
    CHECK(pr.value == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(pr.c0 == doctest::Approx(5.0).epsilon(1e-12));
  }
  {
    EnvelopeInstance inst;
    inst.points = {{cplx(0.3, 0.1), cplx(0.2, 0.0)}};
    inst.generators = {Generator{cplx(1.0, 0.0), {1, 0}}};
    inst.phi = {2.5};
    CHECK(primal_envelope(inst).value == doctest::Approx(2.5).epsilon(1e-12));
  }
}

TEST_CASE("dual finds the minimizing measure") {
  const auto inst = symmetric3();
  const auto du = dual_envelope(inst);
  CHECK(std::fabs(du.value) < 1e-9);
  REQUIRE(du.mu.size() == 3);
  CHECK(du.mu[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(du.mu[1] < 1e-9);
  CHECK(du.mu[2] < 1e-9);

  const auto res = solve_envelope(inst);
  CHECK(std::fabs(res.gap) <= 1e-7 * (1.0 + std::fabs(res.primal)));
  CHECK(verify_measure(inst, res.measure, MeasureMode::jensen));
  // the point mass at the base is always a competitor
  CHECK(res.dual <= inst.phi[0] + 1e-9);
}

TEST_CASE("measure verification distinguishes jensen from representing") {
  EnvelopeInstance inst = symmetric3();
  const std::vector<double> delta = {1.0, 0.0, 0.0};
  CHECK(verify_measure(inst, delta, MeasureMode::representing));
  CHECK(verify_measure(inst, delta, MeasureMode::jensen));

  const std::vector<double> uniform = {0.0, 0.5, 0.5};
  CHECK(verify_measure(inst, uniform, MeasureMode::representing));

  // an even moment breaks equality but not the inequality
  inst.generators.push_back(Generator{cplx(1.0, 0.0), {2}});
  CHECK_FALSE(verify_measure(inst, uniform, MeasureMode::representing));
  CHECK(verify_measure(inst, uniform, MeasureMode::jensen));

  CHECK_FALSE(verify_measure(inst, {0.5, 0.5, 0.0}, MeasureMode::representing));
  CHECK_FALSE(verify_measure(inst, {-0.1, 0.6, 0.5}, MeasureMode::jensen));
  CHECK_FALSE(verify_measure(inst, {0.2, 0.2, 0.2}, MeasureMode::jensen));
  CHECK_THROWS_AS(verify_measure(inst, {1.0}, MeasureMode::jensen), InputError);
}

TEST_CASE("off-base mass detects forced point masses") {
  {
    // Re z peaks only at the base; pairing with -Re z forces equality
    EnvelopeInstance inst;
    inst.points = {{cplx(1.0, 0.0)}, {cplx(0.5, 0.0)}, {cplx(-0.3, 0.0)}, {cplx(0.0, 0.2)}};
    inst.generators = {Generator{cplx(1.0, 0.0), {1}}, Generator{cplx(-1.0, 0.0), {1}}};
    inst.phi = {0.0, 0.0, 0.0, 0.0};
    CHECK(max_offbase_mass(inst) <= 1e-9);
  }
  {
    // vanishing generators constrain nothing
    EnvelopeInstance inst = symmetric3();
    inst.generators = {Generator{cplx(0.0, 0.0), {1}}};
    CHECK(max_offbase_mass(inst) == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(max_offbase_mass(symmetric3()) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("duality holds across seeded instances") {
  SplitMix64 rng(0xeddba5eULL);
  int small_checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(rng.split(trial), 25, 10);
    const auto res = solve_envelope(inst);
    CHECK(std::fabs(res.gap) <= 1e-7 * (1.0 + std::fabs(res.primal)));
    CHECK(verify_measure(inst, res.measure, MeasureMode::jensen));
    CHECK(res.dual <= inst.phi[0] + 1e-9);

    if (inst.points.size() <= 6) {
      const double vd = testoracle::vertex_dual(inst);
      CHECK(std::fabs(vd - res.dual) <= 1e-9 * (1.0 + std::fabs(vd)));
      // exactly feasible grid measures form a subset of the dual feasible
      // set, so the sweep can only land above the true minimum
      const double gd = testoracle::grid_dual(inst, 0.01, 0.0);
      CHECK(gd >= res.dual - 1e-9);
      CHECK(gd <= res.dual + 0.02);
      ++small_checked;
    }
  }
  CHECK(small_checked >= 10);
}

TEST_CASE("envelope is superlinear in the target") {
  SplitMix64 rng(0x50b3aULL);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(rng.split(trial), 10, 6);
    const auto base = primal_envelope(inst).value;

    auto other = inst;
    SplitMix64 noise = rng.split(1000 + trial);
    for (auto& v : other.phi) v = noise.uniform(-1.0, 2.0);
    const auto second = primal_envelope(other).value;

    auto sum = inst;
    for (size_t i = 0; i < sum.phi.size(); ++i) sum.phi[i] += other.phi[i];
    CHECK(primal_envelope(sum).value >= base + second - 1e-9);

    for (const double c : {0.0, 0.5, 2.0}) {
      auto scaled = inst;
      for (auto& v : scaled.phi) v *= c;
      CHECK(primal_envelope(scaled).value ==
            doctest::Approx(c * base).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("value grows with the generator set") {
  SplitMix64 rng(0x9e4e5ULL);
  for (int trial = 0; trial < 20; ++trial) {
    auto inst = random_instance(rng.split(trial), 12, 4);
    double prev = solve_envelope(inst).primal;
    SplitMix64 extra = rng.split(500 + trial);
    for (int round = 0; round < 3; ++round) {
      Generator gen;
      gen.c = std::polar(extra.uniform(0.3, 1.2), extra.uniform(0.0, 2.0 * M_PI));
      gen.beta = {static_cast<long long>(extra.next() % 4),
                  static_cast<long long>(extra.next() % 4)};
      inst.generators.push_back(gen);
      const double now = solve_envelope(inst).primal;
      CHECK(now >= prev - 1e-9);
      prev = now;
    }
  }
}

TEST_CASE("peak certificates pin the representing measure") {
  const auto D = ReinhardtDomain::parse_file(fx("polydisc.json"));
  const std::vector<cplx> zeta = {cplx(1.0, 0.0), cplx(0.6, 0.0)};
  const auto cert = carat::peak::build_certificate(D, zeta, std::nullopt, 0.1);
  REQUIRE(cert.sup_bound == doctest::Approx(1.0).epsilon(1e-12));

  // generators +-Re g, +-Im g for g(z) = z^beta / zeta^beta
  cplx scale(1.0, 0.0);
  std::vector<long long> beta;
  for (size_t j = 0; j < zeta.size(); ++j) {
    const long long b = std::llround(cert.g.beta[j]);
    beta.push_back(b);
    for (long long r = 0; r < b; ++r) scale /= zeta[j];
  }
  EnvelopeInstance inst;
  inst.points.push_back(zeta);
  SplitMix64 rng(0xb41d9eULL);
  for (int i = 0; i < 12; ++i) {
    inst.points.push_back({std::polar(rng.uniform(0.1, 0.95), rng.uniform(0.0, 2.0 * M_PI)),
                           std::polar(rng.uniform(0.1, 0.95), rng.uniform(0.0, 2.0 * M_PI))});
  }
  for (const cplx f : {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)})
    inst.generators.push_back(Generator{f * scale, beta});
  inst.phi.assign(inst.points.size(), 0.0);

  CHECK(max_offbase_mass(inst) <= 1e-9);
}

TEST_CASE("instance files parse with base reordering") {
  const auto inst = EnvelopeInstance::parse_file(fx("sym3.json"));
  CHECK(inst.points.size() == 3);
  CHECK(std::fabs(solve_envelope(inst).primal) < 1e-9);

  const char* rotated = R"({
    "points": [[[0.5, 0]], [[-0.5, 0]], [[0, 0]]],
    "base": 2,
    "generators": [{"c": [1, 0], "beta": [1]}, {"c": [-1, 0], "beta": [1]}],
    "phi": [0.5, 0.5, 0]
  })";
  const auto reordered = EnvelopeInstance::parse(rotated);
  CHECK(reordered.points[0][0] == cplx(0.0, 0.0));
  CHECK(reordered.phi[0] == 0.0);
  CHECK(std::fabs(solve_envelope(reordered).primal) < 1e-9);

  CHECK_THROWS_AS(EnvelopeInstance::parse("{"), InputError);
  CHECK_THROWS_AS(EnvelopeInstance::parse(R"({"points": [], "generators": [], "phi": []})"),
                  InputError);
  CHECK_THROWS_AS(EnvelopeInstance::parse(R"({
    "points": [[[0, 0]]], "generators": [{"c": [1, 0], "beta": [1.5]}], "phi": [0]
  })"),
                  InputError);
  CHECK_THROWS_AS(EnvelopeInstance::parse(R"({
    "points": [[[0, 0]]], "base": 5,
    "generators": [{"c": [1, 0], "beta": [1]}], "phi": [0]
  })"),
                  InputError);
  CHECK_THROWS_AS(EnvelopeInstance::parse(R"({
    "points": [[[0, 0]], [[1, 0], [2, 0]]],
    "generators": [{"c": [1, 0], "beta": [1]}], "phi": [0, 0]
  })"),
                  InputError);

  // negative powers blow up on the axis
  EnvelopeInstance bad;
  bad.points = {{cplx(0.0, 0.0)}};
  bad.generators = {Generator{cplx(1.0, 0.0), {-1}}};
  bad.phi = {0.0};
  CHECK_THROWS_AS(primal_envelope(bad), InputError);
}
