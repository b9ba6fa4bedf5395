#pragma once

#include <cstdint>
#include <vector>

#include "catrisk/pill.hpp"

namespace catrisk {

// A synthetic mixed population: a share of expected-utility (CaraExp) agents
// and a remainder ranking by the catastrophe-sensitive functional. Every
// agent draws its own life value; gamma applies to EU agents, lambda to the
// others.
struct PopulationSpec {
  int n_agents = 1000;
  double eu_fraction = 0.5;
  double life_min = 1.7e6;        // log-uniform life value draw
  double life_max = 7.0e6;
  double gamma_exp_lo = -5.53;    // CaraExp gamma = 10^exponent, uniform
  double gamma_exp_hi = -4.86;
  double lambda_lo = 0.85;        // catastrophe weight, uniform
  double lambda_hi = 0.99;
  std::uint64_t seed = 1;
};

// Throws std::invalid_argument on unordered bounds, fractions outside
// [0, 1], non-positive sizes or life values.
void validate(const PopulationSpec& spec);

enum class AgentKind { ExpectedUtility, Catastrophic };

struct AgentRecord {
  int index;
  AgentKind kind;
  double life;        // this agent's own value of staying alive
  double param;       // gamma for EU agents, lambda for catastrophic ones
  bool accepted;
  bool never_taker;   // catastrophic agent rejecting at every p
};

struct ExperimentOutcome {
  int accept_count = 0;
  int reject_count = 0;   // includes the never-takers
  int never_count = 0;
  std::vector<AgentRecord> records;  // sorted by agent index
};

// Runs every agent against the deal, each one comparing against its own life
// value (the deal's life field is overridden per agent). Agent i's draws
// come from a counter-based stream keyed on (seed, i), so the outcome is
// bit-identical regardless of evaluation order.
ExperimentOutcome simulate(const PopulationSpec& spec, const PillDeal& deal);

struct Quantiles {
  double q25;
  double q50;
  double q75;
};

struct PopulationSummary {
  int n_agents;
  int accept_count;
  int reject_count;
  int never_count;
  double accept_fraction;   // accept_fraction + reject_fraction = 1
  double reject_fraction;
  double never_share;       // never_count / n_agents
  Quantiles life_accepted;  // NaN-filled when a group is empty
  Quantiles life_rejected;
  Quantiles gamma_accepted;   // EU agents only
  Quantiles gamma_rejected;
  Quantiles lambda_accepted;  // catastrophic agents only
  Quantiles lambda_rejected;
};

// Counts, shares, and nearest-rank parameter quantiles split by decision.
// Throws EmptyInput on an outcome with no records.
PopulationSummary summarize(const ExperimentOutcome& outcome);

}  // namespace catrisk
