#include "catrisk/lottery.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "catrisk/errors.hpp"
#include "catrisk/numeric.hpp"

namespace catrisk {

DiscreteLottery::DiscreteLottery(std::vector<Outcome> outcomes)
    : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) {
    throw std::invalid_argument("lottery must have at least one outcome");
  }
  double total = 0.0;
  for (const Outcome& o : outcomes_) {
    if (!std::isfinite(o.wealth.value)) {
      throw std::invalid_argument("lottery wealth levels must be finite");
    }
    if (!std::isfinite(o.prob) || o.prob < 0.0) {
      throw std::invalid_argument(
          "lottery probabilities must be finite and non-negative");
    }
    total += o.prob;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("lottery probabilities sum to " +
                                std::to_string(total) + ", expected 1");
  }
}

Money mean(const DiscreteLottery& lottery) {
  double m = 0.0;
  for (const Outcome& o : lottery.outcomes()) {
    m += o.prob * o.wealth.value;
  }
  return Money{m};
}

double log_neg_expected_utility(const UtilityFamily& u,
                                const DiscreteLottery& lottery) {
  std::vector<WeightedExp> terms;
  terms.reserve(lottery.outcomes().size());
  for (const Outcome& o : lottery.outcomes()) {
    terms.push_back({o.prob, log_neg_eval(u, o.wealth)});
  }
  return log_sum_exp(terms);
}

UtilValue expected_utility(const UtilityFamily& u,
                           const DiscreteLottery& lottery) {
  validate(u);
  if (!has_log_form(u)) {
    double eu = 0.0;
    for (const Outcome& o : lottery.outcomes()) {
      eu += o.prob * eval(u, o.wealth).value;
    }
    return UtilValue{eu};
  }
  return UtilValue{-std::exp(log_neg_expected_utility(u, lottery))};
}

Money certainty_equivalent(const UtilityFamily& u,
                           const DiscreteLottery& lottery) {
  validate(u);
  if (!has_log_form(u)) {
    return inverse(u, expected_utility(u, lottery));
  }
  // Stay in the log domain end to end: exponentiating first would round the
  // expected utility to -0.0 or -inf long before these families run out of
  // meaningful wealth resolution.
  return log_neg_invert(u, log_neg_expected_utility(u, lottery));
}

Preference prefers(const UtilityFamily& u, const DiscreteLottery& lottery,
                   Money sure) {
  validate(u);
  if (has_log_form(u)) {
    // u < 0 throughout, so E[u(X)] > u(sure) iff log(-E[u(X)]) < log(-u(sure)).
    double lhs = log_neg_expected_utility(u, lottery);
    double rhs = log_neg_eval(u, sure);
    if (lhs < rhs) return Preference::LotteryPreferred;
    if (lhs > rhs) return Preference::SureThingPreferred;
    return Preference::Indifferent;
  }
  double lhs = expected_utility(u, lottery).value;
  double rhs = eval(u, sure).value;
  if (lhs > rhs) return Preference::LotteryPreferred;
  if (lhs < rhs) return Preference::SureThingPreferred;
  return Preference::Indifferent;
}

}  // namespace catrisk
