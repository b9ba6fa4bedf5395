#pragma once

#include <variant>

namespace catrisk {

// Wealth in dollars. Thin wrapper so money and utility never mix silently.
struct Money {
  double value;
};

// A value on a utility scale. Comparable only within one family instance.
struct UtilValue {
  double value;
};

// u(x) = a * x + b with a > 0: risk-neutral, cares only about the mean.
struct Linear {
  double a = 1.0;
  double b = 0.0;
};

// u(x) = -exp(-gamma * x) with gamma > 0: constant absolute risk aversion
// equal to gamma, defined on all of R, range (-inf, 0).
struct CaraExp {
  double gamma;
};

// u(x) = -x^(-gamma) with gamma > 0: defined for x > 0, range (-inf, 0),
// absolute risk aversion (1 + gamma) / x.
struct PowerNeg {
  double gamma;
};

using UtilityFamily = std::variant<Linear, CaraExp, PowerNeg>;

// Throws std::invalid_argument unless the family parameters are finite and
// positive where required.
void validate(const UtilityFamily& u);

// u(x). Throws DomainError when x is outside the family's domain
// (PowerNeg requires x > 0); std::invalid_argument on non-finite x.
UtilValue eval(const UtilityFamily& u, Money x);

// x with u(x) = v. Throws RangeError when v is outside the family's range
// (CaraExp and PowerNeg require v < 0).
Money inverse(const UtilityFamily& u, UtilValue v);

// Arrow-Pratt coefficient -u''(x) / u'(x) at x.
double absolute_risk_aversion(const UtilityFamily& u, Money x);

// True for families whose values are strictly negative, so log(-u(x)) exists
// everywhere on the domain. Those families get an exact log-domain path.
bool has_log_form(const UtilityFamily& u);

// log(-u(x)) evaluated without forming u(x): CaraExp gives -gamma * x,
// PowerNeg gives -gamma * log(x). Requires has_log_form(u); throws
// std::logic_error otherwise and DomainError outside the domain.
double log_neg_eval(const UtilityFamily& u, Money x);

// Inverse of log_neg_eval: the x with log(-u(x)) = L.
Money log_neg_invert(const UtilityFamily& u, double L);

}  // namespace catrisk
