#pragma once

#include <string>
#include <vector>

#include "carat/geom.hpp"

namespace carat::edwards {

using cplx = geom::cplx;

// real cone generator Re(c * z^beta)
struct Generator {
  cplx c{1.0, 0.0};
  std::vector<long long> beta;

  double eval(const std::vector<cplx>& z) const;
};

// finite envelope instance: points x_0..x_N with x_0 the base point, a
// finitely generated cone {c0 + sum t_g psi_g : c0 real, t_g >= 0}, and the
// target values phi(x_i)
struct EnvelopeInstance {
  std::vector<std::vector<cplx>> points;
  std::vector<Generator> generators;
  std::vector<double> phi;

  void validate() const;
  double psi(size_t g, size_t i) const;

  static EnvelopeInstance parse(const std::string& json_text);
  static EnvelopeInstance parse_file(const std::string& path);
};

struct PrimalResult {
  double value = 0.0;
  double c0 = 0.0;
  std::vector<double> t;
};

struct DualResult {
  double value = 0.0;
  std::vector<double> mu;
};

struct EnvelopeResult {
  double primal = 0.0;
  double c0 = 0.0;
  std::vector<double> t;
  double dual = 0.0;
  std::vector<double> measure;
  double gap = 0.0;  // primal - dual
};

enum class MeasureMode { jensen, representing };

// sup of psi(x_0) over cone elements psi <= phi on the points
PrimalResult primal_envelope(const EnvelopeInstance& inst);

// min of phi-integral over discrete Jensen measures at the base point
DualResult dual_envelope(const EnvelopeInstance& inst);

// both sides plus the duality gap; the two values must agree
EnvelopeResult solve_envelope(const EnvelopeInstance& inst);

bool verify_measure(const EnvelopeInstance& inst, const std::vector<double>& mu,
                    MeasureMode mode);

// largest total weight a representing measure can place off the base point;
// 0 means the point mass at the base is the only representing measure here
double max_offbase_mass(const EnvelopeInstance& inst);

}  // namespace carat::edwards
