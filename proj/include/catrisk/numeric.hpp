#pragma once

#include <functional>
#include <span>

namespace catrisk {

struct Bracket {
  double lo;
  double hi;
};

struct RootOptions {
  double rel_tol = 1e-12;
  int max_iter = 200;
};

// Finds x in [bracket.lo, bracket.hi] with f(x) = 0 for continuous f whose
// values at the bracket ends have opposite signs.
//
// Alternates secant steps with bisection so progress never stalls on flat
// stretches; every iterate stays inside the current bracket, so the bracket
// shrinks monotonically. Stops once the bracket width drops below
// rel_tol * max(1, |x|) and returns the bracket midpoint.
//
// Throws NoSignChange if f(lo) and f(hi) have the same sign, MaxIterations
// if the cap is hit first, std::invalid_argument on a malformed bracket or
// non-finite endpoint values.
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 RootOptions options = {});

// One term w * exp(e), kept in log form.
struct WeightedExp {
  double weight;    // >= 0
  double exponent;  // finite
};

// log(sum_i w_i * exp(e_i)) without forming any exp(e_i) directly.
//
// The running result is anchored at the largest log-term m_k = log(w_k) + e_k
// and the remainder enters through log1p, so exponents far outside the
// representable range of exp (e.g. -1e6) are handled exactly as shifted
// arithmetic on the e_i themselves.
//
// Throws EmptyInput when no term has positive weight, std::invalid_argument
// on a negative weight or non-finite field.
double log_sum_exp(std::span<const WeightedExp> terms);

}  // namespace catrisk
