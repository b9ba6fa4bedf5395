#include <doctest.h>

#include <cmath>
#include <vector>

#include "catrisk/errors.hpp"
#include "catrisk/utility.hpp"

using namespace catrisk;

TEST_SUITE("utility") {

TEST_CASE("linear family evaluates, inverts, and has zero curvature") {
  UtilityFamily u = Linear{2.0, 1.0};
  CHECK(eval(u, Money{3.0}).value == 7.0);
  CHECK(inverse(u, UtilValue{7.0}).value == 3.0);
  CHECK(absolute_risk_aversion(u, Money{123.0}) == 0.0);
  CHECK_FALSE(has_log_form(u));
}

TEST_CASE("exponential family evaluates at a life-scale point") {
  UtilityFamily u = CaraExp{1e-5};
  CHECK(eval(u, Money{2.2e5}).value ==
        doctest::Approx(-0.11080315836233388).epsilon(1e-15));
  CHECK(has_log_form(u));
}

TEST_CASE("exponential family risk aversion is constant") {
  UtilityFamily u = CaraExp{1e-5};
  CHECK(absolute_risk_aversion(u, Money{1.0}) == 1e-5);
  CHECK(absolute_risk_aversion(u, Money{1e7}) == 1e-5);
  CHECK(absolute_risk_aversion(u, Money{-500.0}) == 1e-5);
}

TEST_CASE("power family evaluates on the positive axis") {
  UtilityFamily u = PowerNeg{7.0};
  CHECK(eval(u, Money{100.0}).value == doctest::Approx(-1e-14).epsilon(1e-15));
  CHECK(has_log_form(u));
}

TEST_CASE("power family risk aversion decays hyperbolically") {
  UtilityFamily u = PowerNeg{5.3};
  CHECK(absolute_risk_aversion(u, Money{1e6}) ==
        doctest::Approx(6.3e-6).epsilon(1e-12));
  // ARA(x) = (1+gamma)/x halves when x doubles.
  double a1 = absolute_risk_aversion(u, Money{500.0});
  double a2 = absolute_risk_aversion(u, Money{1000.0});
  CHECK(a1 == doctest::Approx(2.0 * a2).epsilon(1e-14));
}

TEST_CASE("power family rejects the nonpositive axis") {
  UtilityFamily u = PowerNeg{2.0};
  CHECK_THROWS_AS(eval(u, Money{0.0}), DomainError);
  CHECK_THROWS_AS(eval(u, Money{-1.0}), DomainError);
  CHECK_THROWS_AS(absolute_risk_aversion(u, Money{0.0}), DomainError);
  CHECK_THROWS_AS(log_neg_eval(u, Money{-3.0}), DomainError);
}

TEST_CASE("inverse round trip across the wealth range") {
  std::vector<UtilityFamily> families{Linear{1.0, 0.0}, Linear{3.5, -2.0},
                                      CaraExp{1e-6}, CaraExp{1e-5}};
  for (const auto& u : families) {
    for (double x : {-1e7, -123.0, 0.0, 55.5, 2.2e5, 1e7}) {
      double back = inverse(u, eval(u, Money{x})).value;
      CHECK(back == doctest::Approx(x).epsilon(1e-9));
    }
  }
  for (double gamma : {0.5, 5.3, 10.0}) {
    UtilityFamily u = PowerNeg{gamma};
    for (double x : {1.0, 100.0, 2.2e5, 1e9}) {
      double back = inverse(u, eval(u, Money{x})).value;
      CHECK(back == doctest::Approx(x).epsilon(1e-9));
    }
  }
}

TEST_CASE("inverse rejects values outside the utility range") {
  CHECK_THROWS_AS(inverse(UtilityFamily{CaraExp{1e-5}}, UtilValue{0.0}),
                  RangeError);
  CHECK_THROWS_AS(inverse(UtilityFamily{CaraExp{1e-5}}, UtilValue{0.5}),
                  RangeError);
  CHECK_THROWS_AS(inverse(UtilityFamily{PowerNeg{2.0}}, UtilValue{0.0}),
                  RangeError);
  CHECK_THROWS_AS(inverse(UtilityFamily{PowerNeg{2.0}}, UtilValue{1.0}),
                  RangeError);
}

TEST_CASE("all families are strictly increasing") {
  auto check_increasing = [](const UtilityFamily& u, double lo, double hi,
                             bool log_grid) {
    double prev = eval(u, Money{lo}).value;
    double x = lo;
    for (int i = 1; i <= 200; ++i) {
      double t = static_cast<double>(i) / 200.0;
      x = log_grid ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t;
      double v = eval(u, Money{x}).value;
      CHECK(v > prev);
      prev = v;
    }
  };
  check_increasing(Linear{2.0, -1.0}, -100.0, 100.0, false);
  check_increasing(CaraExp{0.05}, -100.0, 100.0, false);
  check_increasing(PowerNeg{3.0}, 0.1, 1e4, true);
}

TEST_CASE("curved families are midpoint concave, linear is flat") {
  auto midpoint_gap = [](const UtilityFamily& u, double x, double y) {
    double mid = eval(u, Money{0.5 * (x + y)}).value;
    double chord = 0.5 * (eval(u, Money{x}).value + eval(u, Money{y}).value);
    return mid - chord;
  };
  CHECK(midpoint_gap(CaraExp{0.01}, 10.0, 400.0) > 0.0);
  CHECK(midpoint_gap(PowerNeg{4.0}, 2.0, 50.0) > 0.0);
  CHECK(midpoint_gap(Linear{2.0, 5.0}, 10.0, 400.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("log-domain evaluation agrees with the direct value") {
  UtilityFamily cara = CaraExp{0.01};
  for (double x : {-80.0, -1.0, 0.0, 3.5, 90.0}) {
    double direct = std::log(-eval(cara, Money{x}).value);
    CHECK(log_neg_eval(cara, Money{x}) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
  UtilityFamily power = PowerNeg{3.0};
  for (double x : {0.5, 2.0, 40.0, 100.0}) {
    double direct = std::log(-eval(power, Money{x}).value);
    CHECK(log_neg_eval(power, Money{x}) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("log-domain inversion round trips") {
  UtilityFamily cara = CaraExp{1e-5};
  for (double x : {-1e6, 0.0, 2.2e5, 9e6}) {
    double back = log_neg_invert(cara, log_neg_eval(cara, Money{x})).value;
    CHECK(back == doctest::Approx(x).epsilon(1e-12));
  }
  UtilityFamily power = PowerNeg{5.3};
  for (double x : {1.0, 2.2e5, 7e6}) {
    double back = log_neg_invert(power, log_neg_eval(power, Money{x})).value;
    CHECK(back == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("log-domain evaluation reaches scales the direct value cannot") {
  // exp(-gamma*x) underflows past x ~ 7.45e7 at gamma=1e-5; the log form
  // stays finite and linear in x.
  UtilityFamily u = CaraExp{1e-5};
  CHECK(log_neg_eval(u, Money{1e10}) == doctest::Approx(-1e5).epsilon(1e-14));
  CHECK(log_neg_invert(u, -1e5).value == doctest::Approx(1e10).epsilon(1e-14));
}

TEST_CASE("linear family has no log form") {
  UtilityFamily u = Linear{1.0, 0.0};
  CHECK_THROWS_AS(log_neg_eval(u, Money{1.0}), std::logic_error);
  CHECK_THROWS_AS(log_neg_invert(u, -1.0), std::logic_error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(UtilityFamily{Linear{0.0, 0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(UtilityFamily{Linear{-2.0, 0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(UtilityFamily{CaraExp{0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(UtilityFamily{CaraExp{-1e-5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(UtilityFamily{PowerNeg{0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(UtilityFamily{PowerNeg{std::nan("")}}),
                  std::invalid_argument);
  CHECK_NOTHROW(validate(UtilityFamily{Linear{1.0, 0.0}}));
  CHECK_NOTHROW(validate(UtilityFamily{CaraExp{1e-5}}));
  CHECK_NOTHROW(validate(UtilityFamily{PowerNeg{5.3}}));
}

}  // TEST_SUITE
