#pragma once

#include <vector>

#include "catrisk/utility.hpp"

namespace catrisk {

struct Outcome {
  Money wealth;
  double prob;
};

// A finite lottery over wealth levels. Probabilities are non-negative and
// sum to 1 within 1e-12; construction rejects anything else.
class DiscreteLottery {
 public:
  explicit DiscreteLottery(std::vector<Outcome> outcomes);

  const std::vector<Outcome>& outcomes() const { return outcomes_; }

 private:
  std::vector<Outcome> outcomes_;
};

// Expected wealth.
Money mean(const DiscreteLottery& lottery);

// E[u(X)] = sum_i p_i * u(x_i). Families with a log form are accumulated
// entirely in the log domain, so tiny probabilities next to huge utility
// magnitudes never collapse to 0 * inf.
UtilValue expected_utility(const UtilityFamily& u,
                           const DiscreteLottery& lottery);

// The sure wealth c with u(c) = E[u(X)]. For concave families this sits
// below the mean (Jensen); for Linear it equals the mean.
Money certainty_equivalent(const UtilityFamily& u,
                           const DiscreteLottery& lottery);

enum class Preference { LotteryPreferred, SureThingPreferred, Indifferent };

// Compares E[u(lottery)] against u(sure) on a common scale.
// Ties are exact ties of the computed representations.
Preference prefers(const UtilityFamily& u, const DiscreteLottery& lottery,
                   Money sure);

// Internal building block shared with the deal pricing code: log(-E[u(X)])
// for families with a log form. Exposed for tests.
double log_neg_expected_utility(const UtilityFamily& u,
                                const DiscreteLottery& lottery);

}  // namespace catrisk
