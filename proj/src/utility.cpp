#include "catrisk/utility.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "catrisk/errors.hpp"

namespace catrisk {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

void require_power_domain(double x) {
  if (!(x > 0.0)) {
    throw DomainError("PowerNeg utility is defined only for wealth > 0, got " +
                      std::to_string(x));
  }
}

}  // namespace

void validate(const UtilityFamily& u) {
  std::visit(
      overloaded{
          [](const Linear& f) {
            if (!std::isfinite(f.a) || !std::isfinite(f.b) || !(f.a > 0.0)) {
              throw std::invalid_argument(
                  "Linear utility requires finite b and finite a > 0");
            }
          },
          [](const CaraExp& f) {
            if (!std::isfinite(f.gamma) || !(f.gamma > 0.0)) {
              throw std::invalid_argument(
                  "CaraExp utility requires finite gamma > 0");
            }
          },
          [](const PowerNeg& f) {
            if (!std::isfinite(f.gamma) || !(f.gamma > 0.0)) {
              throw std::invalid_argument(
                  "PowerNeg utility requires finite gamma > 0");
            }
          },
      },
      u);
}

UtilValue eval(const UtilityFamily& u, Money x) {
  validate(u);
  require_finite(x.value, "wealth");
  return std::visit(
      overloaded{
          [&](const Linear& f) {
            return UtilValue{f.a * x.value + f.b};
          },
          [&](const CaraExp& f) {
            return UtilValue{-std::exp(-f.gamma * x.value)};
          },
          [&](const PowerNeg& f) {
            require_power_domain(x.value);
            return UtilValue{-std::pow(x.value, -f.gamma)};
          },
      },
      u);
}

Money inverse(const UtilityFamily& u, UtilValue v) {
  validate(u);
  require_finite(v.value, "utility value");
  return std::visit(
      overloaded{
          [&](const Linear& f) {
            return Money{(v.value - f.b) / f.a};
          },
          [&](const CaraExp& f) {
            if (!(v.value < 0.0)) {
              throw RangeError("CaraExp utility takes only negative values; " +
                               std::to_string(v.value) + " has no preimage");
            }
            return Money{-std::log(-v.value) / f.gamma};
          },
          [&](const PowerNeg& f) {
            if (!(v.value < 0.0)) {
              throw RangeError("PowerNeg utility takes only negative values; " +
                               std::to_string(v.value) + " has no preimage");
            }
            return Money{std::exp(-std::log(-v.value) / f.gamma)};
          },
      },
      u);
}

double absolute_risk_aversion(const UtilityFamily& u, Money x) {
  validate(u);
  require_finite(x.value, "wealth");
  return std::visit(
      overloaded{
          [&](const Linear&) { return 0.0; },
          [&](const CaraExp& f) { return f.gamma; },
          [&](const PowerNeg& f) {
            require_power_domain(x.value);
            return (1.0 + f.gamma) / x.value;
          },
      },
      u);
}

bool has_log_form(const UtilityFamily& u) {
  return !std::holds_alternative<Linear>(u);
}

double log_neg_eval(const UtilityFamily& u, Money x) {
  validate(u);
  require_finite(x.value, "wealth");
  return std::visit(
      overloaded{
          [&](const Linear&) -> double {
            throw std::logic_error(
                "log_neg_eval: Linear utility changes sign; no log form");
          },
          [&](const CaraExp& f) { return -f.gamma * x.value; },
          [&](const PowerNeg& f) {
            require_power_domain(x.value);
            return -f.gamma * std::log(x.value);
          },
      },
      u);
}

Money log_neg_invert(const UtilityFamily& u, double L) {
  validate(u);
  require_finite(L, "log utility value");
  return std::visit(
      overloaded{
          [&](const Linear&) -> Money {
            throw std::logic_error(
                "log_neg_invert: Linear utility changes sign; no log form");
          },
          [&](const CaraExp& f) { return Money{-L / f.gamma}; },
          [&](const PowerNeg& f) { return Money{std::exp(-L / f.gamma)}; },
      },
      u);
}

}  // namespace catrisk
