#include "carat/surd.hpp"

#include <cmath>
#include <numeric>

#include "carat/errors.hpp"

namespace carat::surd {

namespace {

i128 checked_mul(i128 a, i128 b) {
  i128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw NumericError("surd: 128-bit overflow");
  return out;
}

i128 checked_add(i128 a, i128 b) {
  i128 out;
  if (__builtin_add_overflow(a, b, &out)) throw NumericError("surd: 128-bit overflow");
  return out;
}

long long to_ll(i128 v) {
  if (v > i128(9223372036854775807LL) || v < -i128(9223372036854775807LL))
    throw NumericError("surd: coefficient exceeds 64 bits");
  return static_cast<long long>(v);
}

i128 gcd128(i128 a, i128 b) {
  a = i128_abs(a);
  b = i128_abs(b);
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// pull square factors out of the radicand by trial division
void extract_squares(i128& rad, i128& num) {
  for (i128 f = 2; f * f <= rad; ++f) {
    const i128 ff = f * f;
    while (rad % ff == 0) {
      rad /= ff;
      num = checked_mul(num, f);
    }
  }
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Surd canonical(Surd s) {
  if (s.den == 0) throw InputError("surd: zero denominator");
  if (s.rad < 0) throw InputError("surd: negative radicand");
  if (s.num == 0 || s.rad == 0) return Surd{0, 1, 1};
  i128 num = s.num, den = s.den, rad = s.rad;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  extract_squares(rad, num);
  const i128 g = gcd128(num, den);
  num /= g;
  den /= g;
  return Surd{to_ll(num), to_ll(den), to_ll(rad)};
}

Surd from_ratio(long long num, long long den) { return canonical(Surd{num, den, 1}); }

Surd mul(const Surd& s, const Surd& t) {
  return canonical(Surd{to_ll(checked_mul(s.num, t.num)), to_ll(checked_mul(s.den, t.den)),
                        to_ll(checked_mul(s.rad, t.rad))});
}

Surd div(const Surd& s, const Surd& t) {
  const Surd tc = canonical(t);
  if (tc.num == 0) throw InputError("surd: division by zero");
  // 1/(n*sqrt(r)/d) = d*sqrt(r)/(n*r)
  const Surd inv{tc.den, to_ll(checked_mul(tc.num, tc.rad)), tc.rad};
  return mul(s, inv);
}

Surd add(const Surd& s, const Surd& t) {
  const Surd sc = canonical(s);
  const Surd tc = canonical(t);
  if (sc.num == 0) return tc;
  if (tc.num == 0) return sc;
  if (sc.rad != tc.rad) throw InputError("surd: mixed radicands in a sum");
  const i128 num = checked_add(checked_mul(sc.num, tc.den), checked_mul(tc.num, sc.den));
  return canonical(Surd{to_ll(num), to_ll(checked_mul(sc.den, tc.den)), sc.rad});
}

Surd negate(const Surd& s) { return Surd{-s.num, s.den, s.rad}; }

Surd abs(const Surd& s) {
  Surd c = canonical(s);
  c.num = std::abs(c.num);
  return c;
}

Surd sqrt_of(const Surd& s) {
  const Surd c = canonical(s);
  if (!c.is_rational()) throw InputError("surd: sqrt of an irrational value");
  if (c.num < 0) throw InputError("surd: sqrt of a negative value");
  // sqrt(n/d) = sqrt(n*d)/d
  return canonical(Surd{1, c.den, to_ll(checked_mul(c.num, c.den))});
}

bool same_value(const Surd& s, const Surd& t) {
  const Surd a = canonical(s);
  const Surd b = canonical(t);
  return a.num == b.num && a.den == b.den && (a.num == 0 || a.rad == b.rad);
}

bool is_zero(const Surd& s) { return canonical(s).num == 0; }

int sign(const Surd& s) { return s.num == 0 ? 0 : (s.num < 0 ? -1 : 1); }

i128 isqrt(i128 x) {
  if (x < 0) throw InputError("isqrt of a negative value");
  if (x < 2) return x;
  i128 r = static_cast<i128>(std::sqrt(i128_to_double(x)));
  if (r < 1) r = 1;
  while (r > 1 && r > x / r) --r;
  while (r + 1 <= x / (r + 1)) ++r;
  return r;
}

ContinuedFraction::ContinuedFraction(const Surd& alpha) {
  const Surd a = canonical(alpha);
  if (a.num < 0) throw InputError("continued fraction requires a nonnegative value");
  rational_ = a.is_rational();
  if (rational_) {
    rp_ = a.num;
    rq_ = a.den;
  } else {
    // alpha = num*sqrt(rad)/den = (0 + sqrt(num^2*rad*den^2)) / den^2
    P_ = 0;
    Q_ = checked_mul(a.den, a.den);
    D_ = checked_mul(checked_mul(i128(a.num) * a.num, a.rad), Q_);
    sqrtD_ = std::sqrt(i128_to_double(D_));
  }
}

std::optional<Convergent> ContinuedFraction::next() {
  if (done_) return std::nullopt;
  ++k_;
  i128 a;
  double alpha_next = 0.0;
  bool exact = false;
  if (rational_) {
    a = floor_div(rp_, rq_);
    const i128 rem = rp_ - a * rq_;
    if (rem == 0) {
      exact = true;
      done_ = true;
    } else {
      rp_ = rq_;
      rq_ = rem;
      alpha_next = i128_to_double(rp_) / i128_to_double(rq_);
    }
  } else {
    const i128 s = isqrt(D_);
    a = Q_ > 0 ? floor_div(P_ + s, Q_) : -(floor_div(P_ + s, -Q_) + 1);
    const i128 Pn = checked_mul(a, Q_) - P_;
    const i128 Qn = (D_ - checked_mul(Pn, Pn)) / Q_;
    P_ = Pn;
    Q_ = Qn;
    alpha_next = (i128_to_double(P_) + sqrtD_) / i128_to_double(Q_);
  }
  i128 p, q;
  if (__builtin_mul_overflow(a, pm1_, &p) || __builtin_add_overflow(p, pm2_, &p) ||
      __builtin_mul_overflow(a, qm1_, &q) || __builtin_add_overflow(q, qm2_, &q)) {
    done_ = true;
    return std::nullopt;
  }
  pm2_ = pm1_;
  qm2_ = qm1_;
  pm1_ = p;
  qm1_ = q;
  Convergent c;
  c.a = a;
  c.p = p;
  c.q = q;
  c.exact = exact;
  if (exact) {
    c.residual = 0.0;
  } else {
    // q_k*alpha - p_k = (-1)^k / (alpha_{k+1} q_k + q_{k-1})
    const double denom = alpha_next * i128_to_double(q) + i128_to_double(qm2_);
    c.residual = ((k_ % 2 == 0) ? 1.0 : -1.0) / denom;
  }
  return c;
}

std::vector<Convergent> convergents(const Surd& alpha, i128 q_cap) {
  std::vector<Convergent> out;
  ContinuedFraction cf(alpha);
  while (auto c = cf.next()) {
    if (c->q > q_cap) break;
    out.push_back(*c);
    if (c->exact) break;
  }
  return out;
}

std::optional<BestApproximation> smallest_denominator(const Surd& alpha, double eps, i128 q_cap) {
  if (eps < 0 || q_cap < 1) throw InputError("smallest_denominator: bad search window");
  const Surd a = abs(alpha);
  if (is_zero(a)) return BestApproximation{1, 0, 0.0};
  ContinuedFraction cf(a);
  while (auto c = cf.next()) {
    if (c->q > q_cap) return std::nullopt;
    if (std::fabs(c->residual) <= eps) {
      // p_k is the nearest integer to q_k*alpha except possibly at k=0,
      // where the next convergent (same q=1) repairs it
      return BestApproximation{c->q, c->p, std::fabs(c->residual)};
    }
  }
  return std::nullopt;
}

}  // namespace carat::surd
