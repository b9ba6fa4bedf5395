#include "catrisk/population.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "catrisk/catastrophic.hpp"
#include "catrisk/errors.hpp"

namespace catrisk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// SplitMix64 step; the initial state is already a hash of (seed, index), so
// successive outputs form the agent's private stream.
struct Stream {
  std::uint64_t state;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double uniform01() {  // [0, 1), 53-bit resolution
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

std::uint64_t mix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xFF51AFD7ED558CCDull;
  k ^= k >> 33;
  k *= 0xC4CEB9FE1A85EC53ull;
  k ^= k >> 33;
  return k;
}

// Counter-based keying: agent i's stream depends only on (seed, i), never on
// how many draws other agents made.
Stream agent_stream(std::uint64_t seed, int index) {
  std::uint64_t counter =
      static_cast<std::uint64_t>(index) * 0x9E3779B97F4A7C15ull + 1;
  return Stream{mix64(seed ^ mix64(counter))};
}

Quantiles nearest_rank_quantiles(std::vector<double> xs) {
  if (xs.empty()) return {kNaN, kNaN, kNaN};
  std::sort(xs.begin(), xs.end());
  auto pick = [&](double q) {
    auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(xs.size())));
    rank = std::clamp<std::size_t>(rank, 1, xs.size());
    return xs[rank - 1];
  };
  return {pick(0.25), pick(0.50), pick(0.75)};
}

}  // namespace

void validate(const PopulationSpec& spec) {
  if (spec.n_agents <= 0) {
    throw std::invalid_argument("population needs n_agents > 0");
  }
  if (!std::isfinite(spec.eu_fraction) || spec.eu_fraction < 0.0 ||
      spec.eu_fraction > 1.0) {
    throw std::invalid_argument("eu_fraction must lie in [0, 1]");
  }
  if (!std::isfinite(spec.life_min) || !std::isfinite(spec.life_max) ||
      !(spec.life_min > 0.0) || !(spec.life_min <= spec.life_max)) {
    throw std::invalid_argument(
        "life value bounds must satisfy 0 < life_min <= life_max");
  }
  if (!std::isfinite(spec.gamma_exp_lo) || !std::isfinite(spec.gamma_exp_hi) ||
      !(spec.gamma_exp_lo <= spec.gamma_exp_hi)) {
    throw std::invalid_argument("gamma exponent bounds must be ordered");
  }
  if (!std::isfinite(spec.lambda_lo) || !std::isfinite(spec.lambda_hi) ||
      spec.lambda_lo < 0.0 || spec.lambda_hi > 1.0 ||
      !(spec.lambda_lo <= spec.lambda_hi)) {
    throw std::invalid_argument(
        "lambda bounds must be ordered and inside [0, 1]");
  }
}

ExperimentOutcome simulate(const PopulationSpec& spec, const PillDeal& deal) {
  validate(spec);
  validate(deal);

  const double log_l_min = std::log(spec.life_min);
  const double log_l_max = std::log(spec.life_max);

  ExperimentOutcome outcome;
  outcome.records.reserve(static_cast<std::size_t>(spec.n_agents));
  for (int i = 0; i < spec.n_agents; ++i) {
    Stream rng = agent_stream(spec.seed, i);
    const double u_kind = rng.uniform01();
    const double u_life = rng.uniform01();
    const double u_param = rng.uniform01();

    AgentRecord rec;
    rec.index = i;
    rec.kind = u_kind < spec.eu_fraction ? AgentKind::ExpectedUtility
                                         : AgentKind::Catastrophic;
    rec.life = std::exp(log_l_min + u_life * (log_l_max - log_l_min));
    rec.never_taker = false;

    PillDeal own{Money{rec.life}, deal.reward, deal.death_prob};
    if (rec.kind == AgentKind::ExpectedUtility) {
      rec.param = std::pow(
          10.0, spec.gamma_exp_lo +
                    u_param * (spec.gamma_exp_hi - spec.gamma_exp_lo));
      rec.accepted = acceptable(CaraExp{rec.param}, own);
    } else {
      rec.param =
          spec.lambda_lo + u_param * (spec.lambda_hi - spec.lambda_lo);
      rec.accepted =
          w_lambda(own.life, own.reward, own.death_prob, rec.param) >
          rec.life;
      rec.never_taker =
          classify_agent(own.life, own.reward, rec.param).kind ==
          AgentClass::NeverAccepts;
    }

    outcome.accept_count += rec.accepted ? 1 : 0;
    outcome.reject_count += rec.accepted ? 0 : 1;
    outcome.never_count += rec.never_taker ? 1 : 0;
    outcome.records.push_back(rec);
  }
  return outcome;
}

PopulationSummary summarize(const ExperimentOutcome& outcome) {
  if (outcome.records.empty()) {
    throw EmptyInput("summarize: outcome holds no agent records");
  }
  const double n = static_cast<double>(outcome.records.size());

  std::vector<double> life_acc, life_rej;
  std::vector<double> gamma_acc, gamma_rej;
  std::vector<double> lambda_acc, lambda_rej;
  for (const AgentRecord& rec : outcome.records) {
    (rec.accepted ? life_acc : life_rej).push_back(rec.life);
    if (rec.kind == AgentKind::ExpectedUtility) {
      (rec.accepted ? gamma_acc : gamma_rej).push_back(rec.param);
    } else {
      (rec.accepted ? lambda_acc : lambda_rej).push_back(rec.param);
    }
  }

  PopulationSummary s;
  s.n_agents = static_cast<int>(outcome.records.size());
  s.accept_count = outcome.accept_count;
  s.reject_count = outcome.reject_count;
  s.never_count = outcome.never_count;
  s.accept_fraction = outcome.accept_count / n;
  s.reject_fraction = outcome.reject_count / n;
  s.never_share = outcome.never_count / n;
  s.life_accepted = nearest_rank_quantiles(std::move(life_acc));
  s.life_rejected = nearest_rank_quantiles(std::move(life_rej));
  s.gamma_accepted = nearest_rank_quantiles(std::move(gamma_acc));
  s.gamma_rejected = nearest_rank_quantiles(std::move(gamma_rej));
  s.lambda_accepted = nearest_rank_quantiles(std::move(lambda_acc));
  s.lambda_rejected = nearest_rank_quantiles(std::move(lambda_rej));
  return s;
}

}  // namespace catrisk
