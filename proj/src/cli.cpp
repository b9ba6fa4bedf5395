#include "catrisk/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catrisk/catastrophic.hpp"
#include "catrisk/errors.hpp"
#include "catrisk/lottery.hpp"
#include "catrisk/pill.hpp"
#include "catrisk/population.hpp"
#include "catrisk/utility.hpp"

namespace catrisk {

namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// formatting

// Full-precision decimal that parses back to the identical double.
std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Human scale for dimensionless quantities in table mode.
std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Money in table mode: two decimals, thousands grouping.
std::string group_money(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  std::size_t dot = s.find('.');
  if (dot == std::string::npos) dot = s.size();
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  for (std::size_t pos = dot; pos > start + 3;) {
    pos -= 3;
    s.insert(pos, ",");
  }
  return s;
}

std::string csv_scalar(const ordered_json& v) {
  switch (v.type()) {
    case ordered_json::value_t::number_float:
      return fmt17(v.get<double>());
    case ordered_json::value_t::number_integer:
      return std::to_string(v.get<long long>());
    case ordered_json::value_t::number_unsigned:
      return std::to_string(v.get<unsigned long long>());
    case ordered_json::value_t::boolean:
      return v.get<bool>() ? "1" : "0";
    case ordered_json::value_t::string:
      return v.get<std::string>();
    default:
      return "nan";
  }
}

// One flat record, three renderings. Table mode gets hand-written lines;
// csv prints a header row and a value row in the record's key order.
void emit_record(const std::string& format, const ordered_json& record,
                 const std::vector<std::string>& table_lines,
                 std::ostream& out) {
  if (format == "json") {
    out << record.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    std::string header, row;
    for (const auto& [key, value] : record.items()) {
      if (!header.empty()) {
        header += ',';
        row += ',';
      }
      header += key;
      row += csv_scalar(value);
    }
    out << header << "\n" << row << "\n";
    return;
  }
  for (const std::string& line : table_lines) out << line << "\n";
}

// ---------------------------------------------------------------------------
// argument parsing helpers

double parse_double_token(const std::string& token, const std::string& what) {
  if (token.empty()) {
    throw std::invalid_argument("empty " + what);
  }
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) {
    throw std::invalid_argument("cannot parse " + what + " '" + token + "'");
  }
  return v;
}

std::vector<Outcome> parse_lottery_arg(const std::string& s) {
  std::vector<Outcome> outcomes;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    std::string item = s.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("lottery entry '" + item +
                                  "' must look like wealth:prob");
    }
    double wealth =
        parse_double_token(item.substr(0, colon), "lottery wealth");
    double prob =
        parse_double_token(item.substr(colon + 1), "lottery probability");
    outcomes.push_back({Money{wealth}, prob});
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return outcomes;
}

UtilityFamily make_family(const std::string& name,
                          const std::optional<double>& gamma) {
  if (name == "linear") return Linear{};
  if (!gamma.has_value()) {
    throw std::invalid_argument("family '" + name + "' requires --gamma");
  }
  if (name == "cara") return CaraExp{*gamma};
  if (name == "power") return PowerNeg{*gamma};
  throw std::invalid_argument("unknown family '" + name + "'");
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open config file '" + path + "'");
  }
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " is not key=value: '" + t + "'");
    }
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

std::uint64_t parse_seed_token(const std::string& token) {
  if (token.empty()) throw std::invalid_argument("empty seed");
  errno = 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(token.c_str(), &end, 10);
  if (end != token.c_str() + token.size() || errno == ERANGE) {
    throw std::invalid_argument("cannot parse seed '" + token + "'");
  }
  return static_cast<std::uint64_t>(v);
}

// ---------------------------------------------------------------------------
// reference report (the `tables` subcommand)

struct ReportCell {
  std::string group;
  std::string label;
  std::string mode;  // "exact" | "abs" | "rel"
  double computed = kNaN;
  double reference = kNaN;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  // error text when the computation threw
};

std::vector<ReportCell> build_reference_report() {
  std::vector<ReportCell> cells;
  auto add = [&cells](const std::string& group, const std::string& label,
                      const std::string& mode, double tolerance,
                      double reference, const std::function<double()>& f) {
    ReportCell c;
    c.group = group;
    c.label = label;
    c.mode = mode;
    c.reference = reference;
    c.tolerance = tolerance;
    try {
      c.computed = f();
      if (mode == "exact") {
        c.pass = c.computed == reference;
      } else if (mode == "abs") {
        c.pass = std::fabs(c.computed - reference) <= tolerance;
      } else {
        c.pass = std::fabs(c.computed - reference) <=
                 tolerance * std::fabs(reference);
      }
    } catch (const std::exception& e) {
      c.pass = false;
      c.note = e.what();
    }
    cells.push_back(c);
  };

  const Money r{2.2e5};
  const double p = 1e-9;

  add("implied-life", "linear (= r/p)", "exact", 0.0, 2.2e14,
      [&] { return implied_life(Linear{}, r, p).value; });
  add("implied-life", "cara gamma=10^-5.53", "rel", 0.05, 7.0e6, [&] {
    return implied_life(CaraExp{std::pow(10.0, -5.53)}, r, p).value;
  });
  add("implied-life", "cara gamma=10^-4.86", "rel", 0.05, 1.7e6, [&] {
    return implied_life(CaraExp{std::pow(10.0, -4.86)}, r, p).value;
  });
  add("implied-life", "power gamma=5.3", "rel", 0.05, 7.0e6,
      [&] { return implied_life(PowerNeg{5.3}, r, p).value; });
  add("implied-life", "power gamma=10", "rel", 0.05, 1.7e6,
      [&] { return implied_life(PowerNeg{10.0}, r, p).value; });

  add("calibration", "cara log10(gamma) for life 7.0e6", "abs", 0.05, -5.53,
      [&] {
        return std::log10(
            calibrate_gamma(GammaFamily::CaraExp, Money{7.0e6}, r, p));
      });
  add("calibration", "cara log10(gamma) for life 1.7e6", "abs", 0.05, -4.86,
      [&] {
        return std::log10(
            calibrate_gamma(GammaFamily::CaraExp, Money{1.7e6}, r, p));
      });
  add("calibration", "power gamma for life 7.0e6", "rel", 0.10, 5.3, [&] {
    return calibrate_gamma(GammaFamily::PowerNeg, Money{7.0e6}, r, p);
  });
  add("calibration", "power gamma for life 1.7e6", "rel", 0.10, 10.0, [&] {
    return calibrate_gamma(GammaFamily::PowerNeg, Money{1.7e6}, r, p);
  });

  const DiscreteLottery coin{{{Money{100.0}, 0.5}, {Money{200.0}, 0.5}}};
  add("coin-flip-ce", "linear", "exact", 0.0, 150.0,
      [&] { return certainty_equivalent(Linear{}, coin).value; });
  add("coin-flip-ce", "cara gamma=1e-5", "abs", 0.005, 149.98,
      [&] { return certainty_equivalent(CaraExp{1e-5}, coin).value; });
  add("coin-flip-ce", "power gamma=7", "abs", 0.05, 110.3,
      [&] { return certainty_equivalent(PowerNeg{7.0}, coin).value; });

  const Money l2{2.0e6};
  add("deal-value", "cara gamma=1e-5 p=1e-9", "rel", 0.01, 2.18e6, [&] {
    return deal_value(CaraExp{1e-5}, PillDeal{l2, r, 1e-9}).value;
  });
  add("deal-value", "cara gamma=10^-4.9 p=1e-10", "rel", 0.01, 2.04e6, [&] {
    return deal_value(CaraExp{std::pow(10.0, -4.9)}, PillDeal{l2, r, 1e-10})
        .value;
  });
  add("deal-value", "cara gamma=10^-4.8 p=1e-13", "rel", 0.01, 2.10e6, [&] {
    return deal_value(CaraExp{std::pow(10.0, -4.8)}, PillDeal{l2, r, 1e-13})
        .value;
  });

  add("lambda-threshold", "l=3e6 r=2.2e5 vs exact fraction", "abs", 1e-6,
      (3.0e6 - 2.2e5) / 3.0e6,
      [&] { return lambda_threshold(Money{3.0e6}, r); });
  add("lambda-threshold", "l=3e6 r=2.2e5 vs rounded 0.926", "abs", 1e-3,
      0.926, [&] { return lambda_threshold(Money{3.0e6}, r); });

  return cells;
}

void emit_report(const std::string& format,
                 const std::vector<ReportCell>& cells, std::ostream& out) {
  bool all_pass = true;
  for (const ReportCell& c : cells) all_pass = all_pass && c.pass;

  if (format == "json") {
    ordered_json doc;
    doc["cells"] = ordered_json::array();
    for (const ReportCell& c : cells) {
      ordered_json jc;
      jc["group"] = c.group;
      jc["label"] = c.label;
      jc["computed"] = c.computed;
      jc["reference"] = c.reference;
      jc["tolerance"] = c.tolerance;
      jc["mode"] = c.mode;
      jc["pass"] = c.pass;
      if (!c.note.empty()) jc["note"] = c.note;
      doc["cells"].push_back(jc);
    }
    doc["all_pass"] = all_pass;
    out << doc.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    out << "group,label,computed,reference,tolerance,mode,status\n";
    for (const ReportCell& c : cells) {
      out << c.group << ',' << c.label << ',' << fmt17(c.computed) << ','
          << fmt17(c.reference) << ',' << fmt17(c.tolerance) << ',' << c.mode
          << ',' << (c.pass ? "pass" : "fail") << "\n";
    }
    return;
  }

  std::size_t wg = 0, wl = 0;
  for (const ReportCell& c : cells) {
    wg = std::max(wg, c.group.size());
    wl = std::max(wl, c.label.size());
  }
  char buf[256];
  for (const ReportCell& c : cells) {
    std::string tol = c.mode == "exact"
                          ? "exact"
                          : (c.mode == "abs" ? "+/- " + fmt6(c.tolerance)
                                             : "+/- " + fmt6(c.tolerance * 100) +
                                                   "%");
    std::snprintf(buf, sizeof buf, "%-*s  %-*s  computed %-14.10g  reference %-10.6g  %-12s  %s",
                  static_cast<int>(wg), c.group.c_str(),
                  static_cast<int>(wl), c.label.c_str(), c.computed,
                  c.reference, tol.c_str(), c.pass ? "pass" : "FAIL");
    out << buf;
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << "\n";
  }
  std::size_t failing = 0;
  for (const ReportCell& c : cells) failing += c.pass ? 0 : 1;
  if (failing == 0) {
    out << "all " << cells.size() << " cells pass\n";
  } else {
    out << failing << " of " << cells.size() << " cells FAIL\n";
  }
}

std::string kind_string(AgentKind k) {
  return k == AgentKind::ExpectedUtility ? "eu" : "cat";
}

void write_agent_csv(const ExperimentOutcome& outcome, std::ostream& out) {
  out << "agent,kind,l,gamma_or_lambda,decision,never_taker\n";
  for (const AgentRecord& rec : outcome.records) {
    out << rec.index << ',' << kind_string(rec.kind) << ',' << fmt17(rec.life)
        << ',' << fmt17(rec.param) << ','
        << (rec.accepted ? "accept" : "reject") << ','
        << (rec.never_taker ? 1 : 0) << "\n";
  }
}

}  // namespace

double parse_gamma(const std::string& token) {
  if (token.rfind("10^", 0) == 0) {
    return std::pow(10.0,
                    parse_double_token(token.substr(3), "gamma exponent"));
  }
  errno = 0;
  char* end = nullptr;
  double plain = std::strtod(token.c_str(), &end);
  if (!token.empty() && end == token.c_str() + token.size()) {
    return plain;
  }
  // Scientific notation with a fractional exponent, e.g. 1e-5.53: strtod
  // stops at the '.', so split at the exponent marker and recombine.
  std::size_t epos = token.find_first_of("eE");
  if (epos != std::string::npos && epos > 0 && epos + 1 < token.size()) {
    double mantissa =
        parse_double_token(token.substr(0, epos), "gamma mantissa");
    double exponent =
        parse_double_token(token.substr(epos + 1), "gamma exponent");
    return mantissa * std::pow(10.0, exponent);
  }
  throw std::invalid_argument("cannot parse gamma '" + token + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "Deadly-pill deal calculator: risk-averse expected utility vs a "
      "catastrophe-sensitive ranking"};
  app.name("catrisk");
  app.require_subcommand(1);

  std::string format = "table";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();

  int exit_code = 0;

  // Shared option storage. Every subcommand reads only the fields it binds.
  std::string family_name;
  std::string gamma_token;
  std::string lottery_token;
  double opt_l = 0.0, opt_r = 0.0, opt_p = 0.0, opt_lambda = 0.0;
  double opt_life_target = 0.0;

  auto gamma_value = [&](const CLI::App* sub) -> std::optional<double> {
    if (sub->count("--gamma") == 0) return std::nullopt;
    return parse_gamma(gamma_token);
  };

  // --- naive-bound ---------------------------------------------------------
  auto* sc_naive = app.add_subcommand(
      "naive-bound", "life value that makes a mean-maximizer indifferent: r/p");
  sc_naive->add_option("--r", opt_r, "reward")->required();
  sc_naive->add_option("--p", opt_p, "death probability")->required();
  sc_naive->callback([&] {
    double bound = naive_life_bound(Money{opt_r}, opt_p).value;
    ordered_json rec;
    rec["reward"] = opt_r;
    rec["death_prob"] = opt_p;
    rec["naive_bound"] = bound;
    emit_record(format, rec,
                {"reward: " + group_money(opt_r),
                 "death probability: " + fmt6(opt_p),
                 "naive life bound (r/p): " + group_money(bound)},
                out);
  });

  // --- implied-life --------------------------------------------------------
  auto* sc_implied = app.add_subcommand(
      "implied-life",
      "life value at which the agent is indifferent to the deal");
  sc_implied->add_option("--family", family_name, "linear|cara|power")
      ->required()
      ->check(CLI::IsMember({"linear", "cara", "power"}));
  sc_implied->add_option("--gamma", gamma_token,
                         "risk aversion (cara/power); accepts 10^-5.53");
  sc_implied->add_option("--r", opt_r, "reward")->required();
  sc_implied->add_option("--p", opt_p, "death probability")->required();
  sc_implied->callback([&] {
    std::optional<double> gamma = gamma_value(sc_implied);
    UtilityFamily u = make_family(family_name, gamma);
    double life = implied_life(u, Money{opt_r}, opt_p).value;
    ordered_json rec;
    rec["family"] = family_name;
    if (gamma) rec["gamma"] = *gamma;
    rec["reward"] = opt_r;
    rec["death_prob"] = opt_p;
    rec["implied_life"] = life;
    std::vector<std::string> lines{"family: " + family_name};
    if (gamma) lines.push_back("gamma: " + fmt6(*gamma));
    lines.push_back("reward: " + group_money(opt_r));
    lines.push_back("death probability: " + fmt6(opt_p));
    lines.push_back("implied life value: " + group_money(life));
    emit_record(format, rec, lines, out);
  });

  // --- calibrate-gamma -----------------------------------------------------
  auto* sc_cal = app.add_subcommand(
      "calibrate-gamma",
      "risk aversion whose implied life matches a target");
  sc_cal->add_option("--family", family_name, "cara|power")
      ->required()
      ->check(CLI::IsMember({"cara", "power"}));
  sc_cal->add_option("--life", opt_life_target, "target life value")
      ->required();
  sc_cal->add_option("--r", opt_r, "reward")->required();
  sc_cal->add_option("--p", opt_p, "death probability")->required();
  sc_cal->callback([&] {
    GammaFamily fam = family_name == "cara" ? GammaFamily::CaraExp
                                            : GammaFamily::PowerNeg;
    double gamma =
        calibrate_gamma(fam, Money{opt_life_target}, Money{opt_r}, opt_p);
    ordered_json rec;
    rec["family"] = family_name;
    rec["life_target"] = opt_life_target;
    rec["reward"] = opt_r;
    rec["death_prob"] = opt_p;
    rec["gamma"] = gamma;
    rec["gamma_log10"] = std::log10(gamma);
    emit_record(format, rec,
                {"family: " + family_name,
                 "target life value: " + group_money(opt_life_target),
                 "reward: " + group_money(opt_r),
                 "death probability: " + fmt6(opt_p),
                 "gamma: " + fmt6(gamma),
                 "log10(gamma): " + fmt6(std::log10(gamma))},
                out);
  });

  // --- ce ------------------------------------------------------------------
  auto* sc_ce = app.add_subcommand(
      "ce", "mean and certainty equivalent of a discrete lottery");
  sc_ce->add_option("--family", family_name, "linear|cara|power")
      ->required()
      ->check(CLI::IsMember({"linear", "cara", "power"}));
  sc_ce->add_option("--gamma", gamma_token,
                    "risk aversion (cara/power); accepts 10^-5.53");
  sc_ce->add_option("--lottery", lottery_token,
                    "outcomes as wealth:prob[,wealth:prob...]")
      ->required();
  sc_ce->callback([&] {
    std::optional<double> gamma = gamma_value(sc_ce);
    UtilityFamily u = make_family(family_name, gamma);
    DiscreteLottery lot{parse_lottery_arg(lottery_token)};
    double m = mean(lot).value;
    double ce = certainty_equivalent(u, lot).value;
    ordered_json rec;
    rec["family"] = family_name;
    if (gamma) rec["gamma"] = *gamma;
    rec["mean"] = m;
    rec["certainty_equivalent"] = ce;
    std::vector<std::string> lines{"family: " + family_name};
    if (gamma) lines.push_back("gamma: " + fmt6(*gamma));
    lines.push_back("mean: " + group_money(m));
    lines.push_back("certainty equivalent: " + group_money(ce));
    emit_record(format, rec, lines, out);
  });

  // --- pill-value ----------------------------------------------------------
  auto* sc_pill = app.add_subcommand(
      "pill-value", "certainty equivalent of accepting the deal");
  sc_pill->add_option("--family", family_name, "linear|cara|power")
      ->required()
      ->check(CLI::IsMember({"linear", "cara", "power"}));
  sc_pill->add_option("--gamma", gamma_token,
                      "risk aversion (cara/power); accepts 10^-5.53");
  sc_pill->add_option("--l", opt_l, "life value")->required();
  sc_pill->add_option("--r", opt_r, "reward")->required();
  sc_pill->add_option("--p", opt_p, "death probability")->required();
  sc_pill->callback([&] {
    std::optional<double> gamma = gamma_value(sc_pill);
    UtilityFamily u = make_family(family_name, gamma);
    PillDeal deal{Money{opt_l}, Money{opt_r}, opt_p};
    double value = deal_value(u, deal).value;
    bool accept = acceptable(u, deal);
    ordered_json rec;
    rec["family"] = family_name;
    if (gamma) rec["gamma"] = *gamma;
    rec["life"] = opt_l;
    rec["reward"] = opt_r;
    rec["death_prob"] = opt_p;
    rec["deal_value"] = value;
    rec["acceptable"] = accept;
    std::vector<std::string> lines{"family: " + family_name};
    if (gamma) lines.push_back("gamma: " + fmt6(*gamma));
    lines.push_back("life value: " + group_money(opt_l));
    lines.push_back("reward: " + group_money(opt_r));
    lines.push_back("death probability: " + fmt6(opt_p));
    lines.push_back("deal value: " + group_money(value));
    lines.push_back(std::string("acceptable: ") + (accept ? "yes" : "no"));
    emit_record(format, rec, lines, out);
  });

  // --- p-threshold ---------------------------------------------------------
  auto* sc_pthr = app.add_subcommand(
      "p-threshold",
      "death probability below which the deal becomes acceptable");
  sc_pthr->add_option("--family", family_name, "linear|cara|power")
      ->required()
      ->check(CLI::IsMember({"linear", "cara", "power"}));
  sc_pthr->add_option("--gamma", gamma_token,
                      "risk aversion (cara/power); accepts 10^-5.53");
  sc_pthr->add_option("--l", opt_l, "life value")->required();
  sc_pthr->add_option("--r", opt_r, "reward")->required();
  sc_pthr->callback([&] {
    std::optional<double> gamma = gamma_value(sc_pthr);
    UtilityFamily u = make_family(family_name, gamma);
    double p_star =
        acceptance_probability_threshold(u, Money{opt_l}, Money{opt_r});
    ordered_json rec;
    rec["family"] = family_name;
    if (gamma) rec["gamma"] = *gamma;
    rec["life"] = opt_l;
    rec["reward"] = opt_r;
    rec["p_star"] = p_star;
    std::vector<std::string> lines{"family: " + family_name};
    if (gamma) lines.push_back("gamma: " + fmt6(*gamma));
    lines.push_back("life value: " + group_money(opt_l));
    lines.push_back("reward: " + group_money(opt_r));
    lines.push_back("acceptance threshold p*: " + fmt6(p_star));
    emit_record(format, rec, lines, out);
  });

  // --- lambda-threshold ----------------------------------------------------
  auto* sc_lthr = app.add_subcommand(
      "lambda-threshold",
      "catastrophe weight below which no p makes the deal acceptable");
  sc_lthr->add_option("--l", opt_l, "life value")->required();
  sc_lthr->add_option("--r", opt_r, "reward")->required();
  sc_lthr->callback([&] {
    double lambda0 = lambda_threshold(Money{opt_l}, Money{opt_r});
    ordered_json rec;
    rec["life"] = opt_l;
    rec["reward"] = opt_r;
    rec["lambda0"] = lambda0;
    emit_record(format, rec,
                {"life value: " + group_money(opt_l),
                 "reward: " + group_money(opt_r),
                 "lambda threshold: " + fmt6(lambda0)},
                out);
  });

  // --- w-lambda ------------------------------------------------------------
  auto* sc_wl = app.add_subcommand(
      "w-lambda", "catastrophe-sensitive value of the deal");
  sc_wl->add_option("--l", opt_l, "life value")->required();
  sc_wl->add_option("--r", opt_r, "reward")->required();
  sc_wl->add_option("--p", opt_p, "death probability")->required();
  sc_wl->add_option("--lambda", opt_lambda, "catastrophe weight in [0,1]")
      ->required();
  sc_wl->callback([&] {
    double w = w_lambda(Money{opt_l}, Money{opt_r}, opt_p, opt_lambda);
    double limit = w_lambda_limit(Money{opt_l}, Money{opt_r}, opt_lambda);
    ordered_json rec;
    rec["life"] = opt_l;
    rec["reward"] = opt_r;
    rec["death_prob"] = opt_p;
    rec["lambda"] = opt_lambda;
    rec["w_value"] = w;
    rec["w_limit"] = limit;
    emit_record(format, rec,
                {"life value: " + group_money(opt_l),
                 "reward: " + group_money(opt_r),
                 "death probability: " + fmt6(opt_p),
                 "lambda: " + fmt6(opt_lambda),
                 "deal value W: " + group_money(w),
                 "limit as p -> 0: " + group_money(limit)},
                out);
  });

  // --- classify ------------------------------------------------------------
  auto* sc_cls = app.add_subcommand(
      "classify", "never-taker vs threshold-acceptance classification");
  sc_cls->add_option("--l", opt_l, "life value")->required();
  sc_cls->add_option("--r", opt_r, "reward")->required();
  sc_cls->add_option("--lambda", opt_lambda, "catastrophe weight in [0,1]")
      ->required();
  sc_cls->callback([&] {
    double lambda0 = lambda_threshold(Money{opt_l}, Money{opt_r});
    AgentClassification cls =
        classify_agent(Money{opt_l}, Money{opt_r}, opt_lambda);
    bool never = cls.kind == AgentClass::NeverAccepts;
    ordered_json rec;
    rec["lambda"] = opt_lambda;
    rec["lambda0"] = lambda0;
    rec["class"] = never ? "never" : "accepts_below";
    if (never) {
      rec["p_star"] = nullptr;
    } else {
      rec["p_star"] = cls.p_star;
    }
    emit_record(
        format, rec,
        {"lambda: " + fmt6(opt_lambda), "lambda threshold: " + fmt6(lambda0),
         std::string("class: ") + (never ? "never" : "accepts_below"),
         never ? "p*: none (rejects at every p)" : "p*: " + fmt6(cls.p_star)},
        out);
  });

  // --- sweep ---------------------------------------------------------------
  std::string sweep_model;
  std::string sweep_lambda_token;
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_points = 0;
  auto* sc_sweep = app.add_subcommand(
      "sweep",
      "deal value along a log-spaced grid of inverse death probabilities "
      "(always CSV)");
  sc_sweep->add_option("--model", sweep_model, "eu|cat")
      ->required()
      ->check(CLI::IsMember({"eu", "cat"}));
  sc_sweep->add_option("--l", opt_l, "life value")->required();
  sc_sweep->add_option("--r", opt_r, "reward")->required();
  sc_sweep->add_option("--gamma", gamma_token,
                       "cara risk aversion for --model eu (default 1e-5)");
  sc_sweep->add_option("--lambda", sweep_lambda_token,
                       "catastrophe weight for --model cat");
  sc_sweep->add_option("--inv-p-from", sweep_from, "grid start, 1/p > 1")
      ->required();
  sc_sweep->add_option("--inv-p-to", sweep_to, "grid end, 1/p > 1")
      ->required();
  sc_sweep->add_option("--points", sweep_points, "grid size >= 2")
      ->required();
  sc_sweep->callback([&] {
    if (sweep_points < 2) {
      throw std::invalid_argument("sweep needs --points >= 2");
    }
    if (!(sweep_from > 1.0) || !(sweep_to > 1.0) || !(sweep_from < sweep_to)) {
      throw std::invalid_argument(
          "sweep needs 1 < --inv-p-from < --inv-p-to");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(sweep_points));
    const double la = std::log(sweep_from);
    const double lb = std::log(sweep_to);
    for (int i = 0; i < sweep_points; ++i) {
      grid.push_back(
          std::exp(la + (lb - la) * i / (sweep_points - 1)));
    }

    if (sweep_model == "eu") {
      double gamma = sc_sweep->count("--gamma") ? parse_gamma(gamma_token)
                                                : 1e-5;
      auto points =
          sweep_deal_value(CaraExp{gamma}, Money{opt_l}, Money{opt_r}, grid);
      out << "inv_p,value\n";
      for (const SweepPoint& pt : points) {
        out << fmt17(pt.inv_p) << ',' << fmt17(pt.value) << "\n";
      }
    } else {
      if (sc_sweep->count("--lambda") == 0) {
        throw std::invalid_argument(
            "sweep --model cat requires --lambda (one value above and one "
            "below the lambda threshold make an instructive pair)");
      }
      double lambda =
          parse_double_token(sweep_lambda_token, "lambda");
      out << "inv_p,w_value\n";
      for (double inv_p : grid) {
        double w = w_lambda(Money{opt_l}, Money{opt_r}, 1.0 / inv_p, lambda);
        out << fmt17(inv_p) << ',' << fmt17(w) << "\n";
      }
    }
  });

  // --- simulate ------------------------------------------------------------
  std::string config_path;
  std::string agents_csv_path;
  PopulationSpec pop;
  PillDeal sim_deal{Money{3.0e6}, Money{2.2e5}, 1e-9};
  std::string seed_token;
  auto* sc_sim = app.add_subcommand(
      "simulate", "run a mixed population of agents against one deal");
  sc_sim->add_option("--config", config_path,
                     "key=value file; explicit flags override it");
  sc_sim->add_option("--n-agents", pop.n_agents, "population size");
  sc_sim->add_option("--eu-fraction", pop.eu_fraction,
                     "share of expected-utility agents");
  sc_sim->add_option("--life-min", pop.life_min, "life value draw, lower");
  sc_sim->add_option("--life-max", pop.life_max, "life value draw, upper");
  sc_sim->add_option("--gamma-exp-lo", pop.gamma_exp_lo,
                     "gamma = 10^exponent draw, lower");
  sc_sim->add_option("--gamma-exp-hi", pop.gamma_exp_hi,
                     "gamma = 10^exponent draw, upper");
  sc_sim->add_option("--lambda-lo", pop.lambda_lo, "lambda draw, lower");
  sc_sim->add_option("--lambda-hi", pop.lambda_hi, "lambda draw, upper");
  sc_sim->add_option("--seed", seed_token, "64-bit seed (default: random)");
  sc_sim->add_option("--r", sim_deal.reward.value, "reward");
  sc_sim->add_option("--p", sim_deal.death_prob, "death probability");
  sc_sim->add_option("--agents-csv", agents_csv_path,
                     "write per-agent records to this file ('-' = stdout)");
  sc_sim->callback([&] {
    bool seed_given = false;

    if (sc_sim->count("--config")) {
      // CLI11 has already written explicit flags into the fields, so a config
      // entry applies only when its flag is absent: flags beat the file.
      auto flag_absent = [&](const char* flag) {
        return sc_sim->count(flag) == 0;
      };
      auto kv = read_config_file(config_path);
      for (const auto& [key, value] : kv) {
        if (key == "n_agents") {
          if (flag_absent("--n-agents")) {
            pop.n_agents = static_cast<int>(
                parse_double_token(value, "config n_agents"));
          }
        } else if (key == "eu_fraction") {
          if (flag_absent("--eu-fraction")) {
            pop.eu_fraction = parse_double_token(value, "config eu_fraction");
          }
        } else if (key == "life_min") {
          if (flag_absent("--life-min")) {
            pop.life_min = parse_double_token(value, "config life_min");
          }
        } else if (key == "life_max") {
          if (flag_absent("--life-max")) {
            pop.life_max = parse_double_token(value, "config life_max");
          }
        } else if (key == "gamma_exp_lo") {
          if (flag_absent("--gamma-exp-lo")) {
            pop.gamma_exp_lo =
                parse_double_token(value, "config gamma_exp_lo");
          }
        } else if (key == "gamma_exp_hi") {
          if (flag_absent("--gamma-exp-hi")) {
            pop.gamma_exp_hi =
                parse_double_token(value, "config gamma_exp_hi");
          }
        } else if (key == "lambda_lo") {
          if (flag_absent("--lambda-lo")) {
            pop.lambda_lo = parse_double_token(value, "config lambda_lo");
          }
        } else if (key == "lambda_hi") {
          if (flag_absent("--lambda-hi")) {
            pop.lambda_hi = parse_double_token(value, "config lambda_hi");
          }
        } else if (key == "seed") {
          if (flag_absent("--seed")) {
            pop.seed = parse_seed_token(value);
            seed_given = true;
          }
        } else if (key == "r") {
          if (flag_absent("--r")) {
            sim_deal.reward.value = parse_double_token(value, "config r");
          }
        } else if (key == "p") {
          if (flag_absent("--p")) {
            sim_deal.death_prob = parse_double_token(value, "config p");
          }
        } else {
          throw std::invalid_argument("unknown config key '" + key + "'");
        }
      }
    }
    if (sc_sim->count("--seed")) {
      pop.seed = parse_seed_token(seed_token);
      seed_given = true;
    }
    if (!seed_given) {
      std::random_device rd;
      pop.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }

    ExperimentOutcome outcome = simulate(pop, sim_deal);
    PopulationSummary s = summarize(outcome);

    if (!agents_csv_path.empty()) {
      if (agents_csv_path == "-") {
        write_agent_csv(outcome, out);
      } else {
        std::ofstream f(agents_csv_path);
        if (!f) {
          throw std::invalid_argument("cannot open '" + agents_csv_path +
                                      "' for writing");
        }
        write_agent_csv(outcome, f);
      }
    }

    ordered_json rec;
    rec["n_agents"] = s.n_agents;
    rec["eu_fraction"] = pop.eu_fraction;
    rec["life_min"] = pop.life_min;
    rec["life_max"] = pop.life_max;
    rec["gamma_exp_lo"] = pop.gamma_exp_lo;
    rec["gamma_exp_hi"] = pop.gamma_exp_hi;
    rec["lambda_lo"] = pop.lambda_lo;
    rec["lambda_hi"] = pop.lambda_hi;
    rec["seed"] = pop.seed;
    rec["reward"] = sim_deal.reward.value;
    rec["death_prob"] = sim_deal.death_prob;
    rec["accept_count"] = s.accept_count;
    rec["reject_count"] = s.reject_count;
    rec["never_count"] = s.never_count;
    rec["accept_fraction"] = s.accept_fraction;
    rec["reject_fraction"] = s.reject_fraction;
    rec["never_share"] = s.never_share;
    auto put_quantiles = [&rec](const std::string& prefix, const Quantiles& q) {
      rec[prefix + "_q25"] = q.q25;
      rec[prefix + "_q50"] = q.q50;
      rec[prefix + "_q75"] = q.q75;
    };
    put_quantiles("life_accepted", s.life_accepted);
    put_quantiles("life_rejected", s.life_rejected);
    put_quantiles("gamma_accepted", s.gamma_accepted);
    put_quantiles("gamma_rejected", s.gamma_rejected);
    put_quantiles("lambda_accepted", s.lambda_accepted);
    put_quantiles("lambda_rejected", s.lambda_rejected);

    std::vector<std::string> lines;
    lines.push_back("agents: " + std::to_string(s.n_agents) +
                    " (eu fraction " + fmt6(pop.eu_fraction) + ")");
    lines.push_back("seed: " + std::to_string(pop.seed));
    lines.push_back("deal: r = " + group_money(sim_deal.reward.value) +
                    ", p = " + fmt6(sim_deal.death_prob));
    lines.push_back("accepted: " + std::to_string(s.accept_count) + " (" +
                    fmt6(100.0 * s.accept_fraction) + "%)");
    lines.push_back("rejected: " + std::to_string(s.reject_count) + " (" +
                    fmt6(100.0 * s.reject_fraction) + "%)");
    lines.push_back("never-takers: " + std::to_string(s.never_count) + " (" +
                    fmt6(100.0 * s.never_share) + "% of all agents)");
    lines.push_back("median life, accepted: " +
                    group_money(s.life_accepted.q50));
    lines.push_back("median life, rejected: " +
                    group_money(s.life_rejected.q50));
    emit_record(format, rec, lines, out);
  });

  // --- tables --------------------------------------------------------------
  auto* sc_tables = app.add_subcommand(
      "tables",
      "recompute every built-in reference value and report pass/fail");
  sc_tables->callback([&] {
    std::vector<ReportCell> cells = build_reference_report();
    emit_report(format, cells, out);
    for (const ReportCell& c : cells) {
      if (!c.pass) exit_code = 1;
    }
  });

  // ---------------------------------------------------------------------------
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("catrisk");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const CLI::App* scope = &app;
    while (!scope->get_subcommands().empty()) {
      scope = scope->get_subcommands().front();
    }
    out << scope->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run 'catrisk --help' for usage\n";
    return 2;
  } catch (const NoSolution& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const NoSignChange& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const MaxIterations& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace catrisk
