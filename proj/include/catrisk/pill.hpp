#pragma once

#include <vector>

#include "catrisk/lottery.hpp"
#include "catrisk/utility.hpp"

namespace catrisk {

// A one-shot offer: take reward r and die with probability p (ending with r),
// otherwise keep a life worth l and the reward too. Declining keeps l.
struct PillDeal {
  Money life;        // l > 0
  Money reward;      // r > 0, finite
  double death_prob; // p in (0, 1)
};

// Throws std::invalid_argument unless l > 0, r > 0 finite, 0 < p < 1.
void validate(const PillDeal& deal);

// The two-outcome lottery {(r, p), (l + r, 1 - p)} induced by accepting.
DiscreteLottery as_lottery(const PillDeal& deal);

// Expected wealth of accepting: p*r + (1-p)*(l+r).
Money mean_gain(const PillDeal& deal);

// Life value that makes a mean-maximizer indifferent: r / p.
Money naive_life_bound(Money reward, double death_prob);

// E[u(accept)] - u(decline) on the family's utility scale. Families with a
// log form are differenced via expm1 on log-domain accumulators, so the
// result keeps its sign even when both sides agree to 15 digits.
double indifference_residual(const UtilityFamily& u, const PillDeal& deal);

// The life value l at which indifference_residual crosses zero for fixed
// (r, p): how much life the agent's choices treat the deal as worth.
// Linear returns exactly r / p. Searches [max(r, 1), 10*r/p], growing the
// upper end tenfold up to 1000*r/p; throws NoSolution if no sign change
// appears in that range.
Money implied_life(const UtilityFamily& u, Money reward, double death_prob);

enum class GammaFamily { CaraExp, PowerNeg };

// Inverse calibration: the gamma whose implied life matches life_target for
// the given (r, p). CaraExp searches log10(gamma) in [-12, 3]; PowerNeg
// searches gamma in [0.01, 100]. Throws NoSolution when the target is not
// bracketed.
double calibrate_gamma(GammaFamily family, Money life_target, Money reward,
                       double death_prob);

// Certainty equivalent of the acceptance lottery: the sure wealth the agent
// finds exactly as good as taking the pill.
Money deal_value(const UtilityFamily& u, const PillDeal& deal);

// deal_value(deal) > life, strictly.
bool acceptable(const UtilityFamily& u, const PillDeal& deal);

// The death probability p* at which deal_value crosses the current life
// value: accept for p below, decline above. Searches log10(p) in
// [-18, -0.0001]; throws NoSolution when no crossing lies in that window.
double acceptance_probability_threshold(const UtilityFamily& u, Money life,
                                        Money reward);

struct SweepPoint {
  double inv_p;  // 1 / death probability
  double value;  // deal value at that p
};

// deal_value along a grid of inverse probabilities (entries > 1, finite).
std::vector<SweepPoint> sweep_deal_value(const UtilityFamily& u, Money life,
                                         Money reward,
                                         const std::vector<double>& inv_p_grid);

}  // namespace catrisk
