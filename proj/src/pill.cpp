#include "catrisk/pill.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "catrisk/errors.hpp"
#include "catrisk/numeric.hpp"

namespace catrisk {

namespace {

void require_reward(Money reward) {
  if (!std::isfinite(reward.value) || !(reward.value > 0.0)) {
    throw std::invalid_argument("reward must be finite and > 0");
  }
}

void require_prob(double p) {
  if (!std::isfinite(p) || !(p > 0.0) || !(p < 1.0)) {
    throw std::invalid_argument("death probability must lie strictly in (0, 1)");
  }
}

void require_life(Money life) {
  if (!std::isfinite(life.value) || !(life.value > 0.0)) {
    throw std::invalid_argument("life value must be finite and > 0");
  }
}

// log(-E[u(accept)]) for log-form families, assembled from the two branch
// terms directly (no intermediate lottery object inside solver loops).
double log_neg_accept_eu(const UtilityFamily& u, Money life, Money reward,
                         double p) {
  std::array<WeightedExp, 2> terms{{
      {p, log_neg_eval(u, reward)},
      {1.0 - p, log_neg_eval(u, Money{life.value + reward.value})},
  }};
  return log_sum_exp(terms);
}

// Sign-preserving indifference gap in the log domain:
// sign(E[u(accept)] - u(l)) = sign(log(-u(l)) - log(-E[u(accept)])).
double log_gap(const UtilityFamily& u, Money life, Money reward, double p) {
  return log_neg_eval(u, life) - log_neg_accept_eu(u, life, reward, p);
}

}  // namespace

void validate(const PillDeal& deal) {
  require_life(deal.life);
  require_reward(deal.reward);
  require_prob(deal.death_prob);
}

DiscreteLottery as_lottery(const PillDeal& deal) {
  validate(deal);
  return DiscreteLottery{{
      {deal.reward, deal.death_prob},
      {Money{deal.life.value + deal.reward.value}, 1.0 - deal.death_prob},
  }};
}

Money mean_gain(const PillDeal& deal) {
  validate(deal);
  return Money{deal.death_prob * deal.reward.value +
               (1.0 - deal.death_prob) * (deal.life.value + deal.reward.value)};
}

Money naive_life_bound(Money reward, double death_prob) {
  require_reward(reward);
  require_prob(death_prob);
  return Money{reward.value / death_prob};
}

double indifference_residual(const UtilityFamily& u, const PillDeal& deal) {
  validate(u);
  validate(deal);
  if (!has_log_form(u)) {
    double eu = expected_utility(u, as_lottery(deal)).value;
    return eu - eval(u, deal.life).value;
  }
  double accept = log_neg_accept_eu(u, deal.life, deal.reward, deal.death_prob);
  double decline = log_neg_eval(u, deal.life);
  // E[u] - u(l) = exp(decline) - exp(accept), differenced through expm1 so
  // the leading digits cancel exactly instead of in rounded floating point.
  if (decline >= accept) {
    return -std::exp(decline) * std::expm1(accept - decline);
  }
  return std::exp(accept) * std::expm1(decline - accept);
}

Money implied_life(const UtilityFamily& u, Money reward, double death_prob) {
  validate(u);
  require_reward(reward);
  require_prob(death_prob);

  if (!has_log_form(u)) {
    // a*(p*r + (1-p)*(l+r)) + b = a*l + b solves to l = r/p exactly,
    // independent of a and b.
    return Money{reward.value / death_prob};
  }

  const double naive = reward.value / death_prob;
  auto gap = [&](double l) {
    return log_gap(u, Money{l}, reward, death_prob);
  };

  double lo = std::max(reward.value, 1.0);
  double glo = gap(lo);
  if (glo == 0.0) return Money{lo};
  if (glo < 0.0) {
    throw NoSolution(
        "implied_life: deal already unattractive at the lower search bound " +
        std::to_string(lo));
  }

  double hi = 10.0 * naive;
  const double cap = 1000.0 * naive;
  while (gap(hi) > 0.0) {
    hi *= 10.0;
    if (hi > cap) {
      throw NoSolution(
          "implied_life: no indifference point below 1000 * r / p");
    }
  }

  return Money{find_root(gap, {lo, hi})};
}

double calibrate_gamma(GammaFamily family, Money life_target, Money reward,
                       double death_prob) {
  require_life(life_target);
  require_reward(reward);
  require_prob(death_prob);
  if (!(life_target.value > reward.value)) {
    throw std::invalid_argument(
        "calibrate_gamma: target life must exceed the reward");
  }

  auto make = [&](double theta) -> UtilityFamily {
    if (family == GammaFamily::CaraExp) {
      return CaraExp{std::pow(10.0, theta)};
    }
    return PowerNeg{theta};
  };
  auto offset = [&](double theta) {
    return implied_life(make(theta), reward, death_prob).value -
           life_target.value;
  };

  // Implied life falls monotonically as risk aversion rises, so bracket in
  // the parameter that spans the family's useful range.
  Bracket bracket = family == GammaFamily::CaraExp ? Bracket{-12.0, 3.0}
                                                   : Bracket{0.01, 100.0};
  double flo = offset(bracket.lo);
  double fhi = offset(bracket.hi);
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NoSolution(
        "calibrate_gamma: target life " + std::to_string(life_target.value) +
        " is not reachable inside the calibration range");
  }
  double theta = find_root(offset, bracket);
  return family == GammaFamily::CaraExp ? std::pow(10.0, theta) : theta;
}

Money deal_value(const UtilityFamily& u, const PillDeal& deal) {
  validate(u);
  validate(deal);
  if (!has_log_form(u)) {
    // Affine-invariant closed form of the certainty equivalent.
    return Money{(deal.life.value + deal.reward.value) -
                 deal.death_prob * deal.life.value};
  }
  return log_neg_invert(
      u, log_neg_accept_eu(u, deal.life, deal.reward, deal.death_prob));
}

bool acceptable(const UtilityFamily& u, const PillDeal& deal) {
  return deal_value(u, deal).value > deal.life.value;
}

double acceptance_probability_threshold(const UtilityFamily& u, Money life,
                                        Money reward) {
  validate(u);
  require_life(life);
  require_reward(reward);

  auto value_gap = [&](double log10_p) {
    PillDeal d{life, reward, std::pow(10.0, log10_p)};
    return deal_value(u, d).value - life.value;
  };

  const Bracket window{-18.0, -0.0001};
  double flo = value_gap(window.lo);
  double fhi = value_gap(window.hi);
  if (flo == 0.0) return std::pow(10.0, window.lo);
  if (fhi == 0.0) return std::pow(10.0, window.hi);
  if (flo < 0.0) {
    throw NoSolution(
        "acceptance threshold: deal still refused at p = 1e-18; "
        "any crossing lies below the search window");
  }
  if (fhi > 0.0) {
    throw NoSolution(
        "acceptance threshold: deal still taken at p ~ 1; "
        "no crossing inside (0, 1)");
  }
  return std::pow(10.0, find_root(value_gap, window));
}

std::vector<SweepPoint> sweep_deal_value(
    const UtilityFamily& u, Money life, Money reward,
    const std::vector<double>& inv_p_grid) {
  validate(u);
  require_life(life);
  require_reward(reward);
  std::vector<SweepPoint> out;
  out.reserve(inv_p_grid.size());
  for (double inv_p : inv_p_grid) {
    if (!std::isfinite(inv_p) || !(inv_p > 1.0)) {
      throw std::invalid_argument(
          "sweep grid entries must be finite and > 1, got " +
          std::to_string(inv_p));
    }
    PillDeal d{life, reward, 1.0 / inv_p};
    out.push_back({inv_p, deal_value(u, d).value});
  }
  return out;
}

}  // namespace catrisk
