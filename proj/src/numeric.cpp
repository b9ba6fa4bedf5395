#include "catrisk/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "catrisk/errors.hpp"

namespace catrisk {

namespace {

// Width target: relative to the smaller endpoint magnitude, floored at an
// absolute scale of 1 so brackets straddling 0 still terminate.
bool narrow_enough(double lo, double hi, double rel_tol) {
  double scale = std::max(1.0, std::min(std::fabs(lo), std::fabs(hi)));
  return (hi - lo) <= rel_tol * scale;
}

}  // namespace

double find_root(const std::function<double(double)>& f, Bracket bracket,
                 RootOptions options) {
  if (!std::isfinite(bracket.lo) || !std::isfinite(bracket.hi) ||
      !(bracket.lo < bracket.hi)) {
    throw std::invalid_argument("find_root: bracket must satisfy lo < hi");
  }
  if (!(options.rel_tol > 0.0)) {
    throw std::invalid_argument("find_root: rel_tol must be positive");
  }
  if (options.max_iter < 1) {
    throw std::invalid_argument("find_root: max_iter must be at least 1");
  }

  double lo = bracket.lo;
  double hi = bracket.hi;
  double flo = f(lo);
  double fhi = f(hi);
  if (!std::isfinite(flo) || !std::isfinite(fhi)) {
    throw std::invalid_argument("find_root: non-finite value at bracket end");
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NoSignChange("find_root: same sign at " + std::to_string(lo) +
                       " and " + std::to_string(hi));
  }

  bool secant_turn = false;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    double mid = 0.5 * (lo + hi);
    // Adjacent doubles have no interior point; the bracket cannot shrink any
    // further, so the midpoint is as converged as the format allows.
    if (narrow_enough(lo, hi, options.rel_tol) || mid <= lo || mid >= hi) {
      return mid;
    }

    double x = mid;
    if (secant_turn && fhi != flo) {
      double width = hi - lo;
      double s = hi - fhi * width / (fhi - flo);
      double margin = 0.01 * width;  // keep iterates strictly interior
      if (s > lo + margin && s < hi - margin) x = s;
    }
    secant_turn = !secant_turn;

    double fx = f(x);
    if (!std::isfinite(fx)) {
      throw std::invalid_argument("find_root: non-finite value at " +
                                  std::to_string(x));
    }
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
  }
  throw MaxIterations("find_root: not converged after " +
                      std::to_string(options.max_iter) + " iterations");
}

double log_sum_exp(std::span<const WeightedExp> terms) {
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::size_t lead = npos;
  double lead_log = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const WeightedExp& t = terms[i];
    if (!std::isfinite(t.weight) || t.weight < 0.0) {
      throw std::invalid_argument(
          "log_sum_exp: weights must be finite and non-negative");
    }
    if (!std::isfinite(t.exponent)) {
      throw std::invalid_argument("log_sum_exp: exponents must be finite");
    }
    if (t.weight == 0.0) continue;
    double m = std::log(t.weight) + t.exponent;
    if (lead == npos || m > lead_log) {
      lead = i;
      lead_log = m;
    }
  }
  if (lead == npos) {
    throw EmptyInput("log_sum_exp: no term with positive weight");
  }

  // sum = exp(lead_log) * (1 + rest), rest = sum over the non-leading terms
  // of exp(m_i - lead_log); each summand is <= 1 so nothing overflows.
  double rest = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i == lead || terms[i].weight == 0.0) continue;
    double m = std::log(terms[i].weight) + terms[i].exponent;
    rest += std::exp(m - lead_log);
  }
  return lead_log + std::log1p(rest);
}

}  // namespace catrisk
