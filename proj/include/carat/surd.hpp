#pragma once

#include <optional>
#include <vector>

#include "carat/geom.hpp"
#include "carat/int128.hpp"

namespace carat::surd {

using geom::Surd;

// Exact arithmetic in quadratic extensions. Values are (num/den)*sqrt(rad).
// Mixed-radicand sums throw InputError; integer blow-ups throw NumericError.
Surd canonical(Surd s);
Surd from_ratio(long long num, long long den);
Surd mul(const Surd& s, const Surd& t);
Surd div(const Surd& s, const Surd& t);
Surd add(const Surd& s, const Surd& t);
Surd negate(const Surd& s);
Surd abs(const Surd& s);
// square root of a nonnegative rational surd
Surd sqrt_of(const Surd& s);
bool same_value(const Surd& s, const Surd& t);
bool is_zero(const Surd& s);
int sign(const Surd& s);

// floor(sqrt(x)) for x >= 0
i128 isqrt(i128 x);

struct Convergent {
  i128 a = 0;             // partial quotient
  i128 p = 0;             // convergent numerator
  i128 q = 0;             // convergent denominator
  double residual = 0.0;  // q*alpha - p, from the complete-quotient identity
  bool exact = false;     // p/q == alpha (rational alpha exhausted)
};

// Continued fraction of a nonnegative surd. Rational values run Euclid and
// terminate; irrational ones use the integer (P + sqrt(D))/Q recurrence.
// next() returns nullopt once the expansion is exhausted or a further
// convergent would overflow the 128-bit accumulators.
class ContinuedFraction {
 public:
  explicit ContinuedFraction(const Surd& alpha);
  std::optional<Convergent> next();

 private:
  bool rational_ = false;
  bool done_ = false;
  int k_ = -1;
  i128 rp_ = 0, rq_ = 1;  // Euclid state for rational alpha
  i128 P_ = 0, Q_ = 1, D_ = 0;
  double sqrtD_ = 0.0;
  i128 pm1_ = 1, qm1_ = 0;  // p_{k-1}, q_{k-1}
  i128 pm2_ = 0, qm2_ = 1;  // p_{k-2}, q_{k-2}
};

std::vector<Convergent> convergents(const Surd& alpha, i128 q_cap);

struct BestApproximation {
  i128 q = 0;
  i128 p = 0;          // nearest integer to q*|alpha|
  double error = 0.0;  // |q*alpha - p|
};

// Smallest q >= 1 with dist(q*alpha, Z) <= eps. Record minima of q -> dist
// land on convergent denominators, so the walk is exact and minimal.
std::optional<BestApproximation> smallest_denominator(const Surd& alpha, double eps, i128 q_cap);

}  // namespace carat::surd
