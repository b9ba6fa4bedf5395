#include "catrisk/catastrophic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>

#include "catrisk/errors.hpp"

namespace catrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Index of the piece that owns x: the count of breakpoints <= x.
std::size_t piece_index(const std::vector<double>& breakpoints, double x) {
  return static_cast<std::size_t>(
      std::upper_bound(breakpoints.begin(), breakpoints.end(), x) -
      breakpoints.begin());
}

// Sorted union of two strictly increasing lists, duplicates collapsed.
std::vector<double> merge_breakpoints(const std::vector<double>& a,
                                      const std::vector<double>& b) {
  std::vector<double> merged;
  merged.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(),
             std::back_inserter(merged));
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
  return merged;
}

void require_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("lambda must lie in [0, 1], got " +
                                std::to_string(lambda));
  }
}

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be finite and > 0");
  }
}

}  // namespace

StepFunction::StepFunction(std::vector<double> breakpoints,
                           std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (values_.size() != breakpoints_.size() + 1) {
    throw std::invalid_argument(
        "step function needs exactly one more value than breakpoints");
  }
  for (double b : breakpoints_) {
    if (!std::isfinite(b)) {
      throw std::invalid_argument("breakpoints must be finite");
    }
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i - 1] < breakpoints_[i])) {
      throw std::invalid_argument("breakpoints must be strictly increasing");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("step function values must be finite");
    }
  }
}

StepFunction StepFunction::constant(double value) {
  return StepFunction({}, {value});
}

double StepFunction::value_at(double x) const {
  return values_[piece_index(breakpoints_, x)];
}

StepDensity::StepDensity(StepFunction f) : f_(std::move(f)), max_value_(0.0) {
  const auto& breaks = f_.breakpoints();
  const auto& values = f_.values();
  if (breaks.size() < 2) {
    throw std::invalid_argument(
        "density needs at least two breakpoints to bound its support");
  }
  for (double v : values) {
    if (v < 0.0) {
      throw std::invalid_argument("density values must be non-negative");
    }
    max_value_ = std::max(max_value_, v);
  }
  if (values.front() != 0.0 || values.back() != 0.0) {
    throw std::invalid_argument(
        "density must vanish on both unbounded end pieces");
  }
  double integral = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    integral += values[i] * (breaks[i] - breaks[i - 1]);
  }
  if (std::fabs(integral - 1.0) > 1e-12) {
    throw std::invalid_argument("density integrates to " +
                                std::to_string(integral) + ", expected 1");
  }
}

double lebesgue_part(const StepFunction& f, const StepDensity& density) {
  const StepFunction& phi = density.function();
  // The density vanishes outside [support_lo, support_hi], so integrate only
  // there, cutting at every breakpoint of either function. Each refined piece
  // is constant for both factors, and its left end owns the piece value under
  // the right-inclusive convention, so evaluating at the cut itself is exact.
  std::vector<double> cuts =
      merge_breakpoints(f.breakpoints(), phi.breakpoints());
  const double lo = density.support_lo();
  const double hi = density.support_hi();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = std::max(cuts[i], lo);
    double b = std::min(cuts[i + 1], hi);
    if (!(a < b)) continue;
    total += f.value_at(a) * phi.value_at(a) * (b - a);
  }
  return total;
}

double limit_at_zero(const StepFunction& f) {
  const auto& breaks = f.breakpoints();
  const auto& values = f.values();
  std::size_t idx = piece_index(breaks, 0.0);
  if (idx > 0 && breaks[idx - 1] == 0.0) {
    // 0 is a breakpoint: the punctured neighbourhood straddles two pieces.
    if (values[idx - 1] != values[idx]) {
      throw NoLimit(
          "limit_at_zero: side values " + std::to_string(values[idx - 1]) +
          " and " + std::to_string(values[idx]) + " disagree at 0");
    }
    return values[idx];
  }
  return values[idx];
}

double rank_value(const CatastropheRanking& ranking, const StepFunction& f) {
  require_lambda(ranking.lambda);
  double tail = limit_at_zero(f);
  return ranking.lambda * lebesgue_part(f, ranking.density) +
         (1.0 - ranking.lambda) * tail;
}

StepDensity pill_density(double p) {
  if (!std::isfinite(p) || !(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument(
        "pill density needs a probability strictly in (0, 1)");
  }
  return StepDensity{StepFunction{{0.0, 1.0 / p}, {0.0, p, 0.0}}};
}

StepFunction pill_step_lottery(Money life, Money reward) {
  require_positive(life.value, "life value");
  require_positive(reward.value, "reward");
  return StepFunction{{1.0}, {reward.value, life.value + reward.value}};
}

double w_lambda(Money life, Money reward, double p, double lambda) {
  require_positive(life.value, "life value");
  require_positive(reward.value, "reward");
  if (!std::isfinite(p) || !(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("death probability must lie in (0, 1)");
  }
  require_lambda(lambda);
  double mean = p * reward.value +
                (1.0 - p) * (life.value + reward.value);
  return lambda * mean + (1.0 - lambda) * reward.value;
}

double w_lambda_limit(Money life, Money reward, double lambda) {
  require_positive(life.value, "life value");
  require_positive(reward.value, "reward");
  require_lambda(lambda);
  return lambda * life.value + reward.value;
}

double lambda_threshold(Money life, Money reward) {
  require_positive(life.value, "life value");
  require_positive(reward.value, "reward");
  if (reward.value >= life.value) {
    throw InvalidThreshold(
        "lambda threshold undefined: reward " + std::to_string(reward.value) +
        " is not below the life value " + std::to_string(life.value));
  }
  return (life.value - reward.value) / life.value;
}

AgentClassification classify_agent(Money life, Money reward, double lambda) {
  require_lambda(lambda);
  double lambda0 = lambda_threshold(life, reward);
  // At lambda0 itself the deal value only reaches l as p -> 0, never above,
  // so the boundary agent still never accepts.
  if (lambda <= lambda0) {
    return {AgentClass::NeverAccepts, kNaN};
  }
  double p_star =
      ((lambda - 1.0) * life.value + reward.value) / (lambda * life.value);
  return {AgentClass::AcceptsBelow, p_star};
}

StepFunction modify_near_zero(const StepFunction& f, double new_value,
                              double eps) {
  if (!std::isfinite(new_value)) {
    throw std::invalid_argument("replacement value must be finite");
  }
  if (!std::isfinite(eps) || !(eps > 0.0)) {
    throw InvalidEps("eps must be finite and > 0");
  }
  const auto& breaks = f.breakpoints();
  const auto& values = f.values();
  std::size_t idx = piece_index(breaks, 0.0);
  if (idx > 0 && breaks[idx - 1] == 0.0) {
    throw InvalidEps(
        "modify_near_zero: 0 is a breakpoint, so every eps-neighbourhood "
        "crosses it");
  }
  double left = idx > 0 ? breaks[idx - 1] : -kInf;
  double right = idx < breaks.size() ? breaks[idx] : kInf;
  if (!(-eps > left) || !(eps < right)) {
    throw InvalidEps("modify_near_zero: eps = " + std::to_string(eps) +
                     " reaches a breakpoint of the piece around 0");
  }

  std::vector<double> nb;
  nb.reserve(breaks.size() + 2);
  nb.insert(nb.end(), breaks.begin(), breaks.begin() + idx);
  nb.push_back(-eps);
  nb.push_back(eps);
  nb.insert(nb.end(), breaks.begin() + idx, breaks.end());

  std::vector<double> nv;
  nv.reserve(values.size() + 2);
  nv.insert(nv.end(), values.begin(), values.begin() + idx + 1);
  nv.push_back(new_value);
  nv.insert(nv.end(), values.begin() + idx, values.end());

  return StepFunction{std::move(nb), std::move(nv)};
}

StepFunction linear_combination(double alpha, const StepFunction& f,
                                double beta, const StepFunction& g) {
  if (!std::isfinite(alpha) || !std::isfinite(beta)) {
    throw std::invalid_argument("combination weights must be finite");
  }
  std::vector<double> merged =
      merge_breakpoints(f.breakpoints(), g.breakpoints());
  std::vector<double> values;
  values.reserve(merged.size() + 1);
  for (std::size_t i = 0; i <= merged.size(); ++i) {
    // Any point of piece i works; its left breakpoint is in the piece by
    // right-inclusion, and the leftmost piece is probed below its first
    // breakpoint (or anywhere when there are no breakpoints at all).
    double probe = i == 0 ? (merged.empty() ? 0.0 : merged.front() - 1.0)
                          : merged[i - 1];
    values.push_back(alpha * f.value_at(probe) + beta * g.value_at(probe));
  }
  return StepFunction{std::move(merged), std::move(values)};
}

}  // namespace catrisk
