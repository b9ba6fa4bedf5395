#pragma once

#include <vector>

#include "catrisk/utility.hpp"

namespace catrisk {

// Piecewise-constant function on the real line. k breakpoints split R into
// k+1 pieces; values[i] rules the open span between breakpoints i-1 and i,
// and each breakpoint belongs to the piece on its right, so
// value_at(x) = values[count of breakpoints <= x].
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  static StepFunction constant(double value);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double value_at(double x) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// A StepFunction that is a probability density: non-negative, zero on both
// unbounded end pieces, total integral 1 within 1e-12.
class StepDensity {
 public:
  explicit StepDensity(StepFunction f);

  const StepFunction& function() const { return f_; }
  double max_value() const { return max_value_; }
  // Interval outside which the density is identically zero.
  double support_lo() const { return f_.breakpoints().front(); }
  double support_hi() const { return f_.breakpoints().back(); }

 private:
  StepFunction f_;
  double max_value_;
};

// Ranks step-function lotteries by
//   W(f) = lambda * integral(f * density) + (1 - lambda) * limit_at_zero(f).
// The second term is what makes arbitrarily rare catastrophes matter.
struct CatastropheRanking {
  double lambda;  // in [0, 1]; 1 = pure integral, 0 = pure limit term
  StepDensity density;
};

// Exact integral of f against the density: both breakpoint lists are merged
// and each refined piece contributes f-value * density-value * length.
// No quadrature error.
double lebesgue_part(const StepFunction& f, const StepDensity& density);

// The two-sided limit of f at 0. Requires f constant on a punctured
// neighbourhood of 0; throws NoLimit when the pieces left and right of 0
// carry different values.
double limit_at_zero(const StepFunction& f);

// W(f) as above. Throws NoLimit when limit_at_zero(f) is undefined,
// std::invalid_argument when lambda is outside [0, 1].
double rank_value(const CatastropheRanking& ranking, const StepFunction& f);

// Uniform density p on [0, 1/p]: the chance of drawing each pill from a pile
// of 1/p of them. Requires 0 < p < 1.
StepDensity pill_density(double p);

// Wealth profile of an accepted deal as a step lottery: r on x < 1 (the one
// deadly draw), l + r on x >= 1. Requires l, r > 0.
StepFunction pill_step_lottery(Money life, Money reward);

// Closed form of the ranking applied to the pill instance:
//   W_lambda(p) = lambda * (p*r + (1-p)*(l+r)) + (1-lambda) * r.
double w_lambda(Money life, Money reward, double p, double lambda);

// Limit of w_lambda as p -> 0: lambda * l + r.
double w_lambda_limit(Money life, Money reward, double lambda);

// The lambda below which no death probability, however small, makes the deal
// acceptable: lambda0 = (l - r) / l. Throws InvalidThreshold when r >= l.
double lambda_threshold(Money life, Money reward);

enum class AgentClass {
  NeverAccepts,   // rejects at every p in (0, 1)
  AcceptsBelow,   // accepts exactly for p below p_star
  AlwaysEuLike,   // reserved: no (l, r, lambda) in the domain produces it
};

struct AgentClassification {
  AgentClass kind;
  double p_star;  // meaningful only for AcceptsBelow; NaN otherwise
};

// Splits agents by lambda against lambda_threshold(l, r). At lambda ==
// lambda0 the value only reaches l in the p -> 0 limit, never above it, so
// the agent still never accepts. For lambda > lambda0,
// p_star = ((lambda - 1) * l + r) / (lambda * l) solves W_lambda(p) = l.
AgentClassification classify_agent(Money life, Money reward, double lambda);

// Copy of f overwritten with new_value on (-eps, eps). Requires 0 to lie
// strictly inside one piece of f and eps to stop short of the neighbouring
// breakpoints; throws InvalidEps otherwise.
StepFunction modify_near_zero(const StepFunction& f, double new_value,
                              double eps);

// alpha * f + beta * g as a step function on the merged breakpoint list.
StepFunction linear_combination(double alpha, const StepFunction& f,
                                double beta, const StepFunction& g);

}  // namespace catrisk
