#include <doctest.h>

#include <cmath>
#include <vector>

#include "catrisk/errors.hpp"
#include "catrisk/numeric.hpp"

using namespace catrisk;

TEST_SUITE("numeric") {

TEST_CASE("find_root locates sqrt2 to relative tolerance") {
  auto f = [](double x) { return x * x - 2.0; };
  double x = find_root(f, Bracket{0.0, 2.0});
  CHECK(x == doctest::Approx(1.4142135623730951).epsilon(1e-12));
}

TEST_CASE("find_root solves a linear equation") {
  auto f = [](double x) { return x - 0.25; };
  double x = find_root(f, Bracket{0.0, 1.0});
  CHECK(x == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("find_root handles a transcendental root") {
  double x = find_root([](double t) { return std::cos(t); }, Bracket{0.0, 3.0});
  CHECK(x == doctest::Approx(1.5707963267948966).epsilon(1e-12));
}

TEST_CASE("find_root returns an endpoint that is already a root") {
  auto f = [](double x) { return x - 2.0; };
  CHECK(find_root(f, Bracket{2.0, 5.0}) == 2.0);
  CHECK(find_root(f, Bracket{0.0, 2.0}) == 2.0);
}

TEST_CASE("find_root converges at large magnitudes where the relative "
          "tolerance is below double spacing") {
  // Near 2.2e14 the requested width 1e-12*scale can be unreachable while the
  // bracket still spans adjacent doubles; the solver must stop, not loop.
  auto f = [](double x) { return x - 2.2e14; };
  double x = find_root(f, Bracket{1.0, 1e15});
  CHECK(x == doctest::Approx(2.2e14).epsilon(1e-12));
}

TEST_CASE("find_root rejects a bracket without a sign change") {
  auto f = [](double x) { return x * x + 1.0; };
  CHECK_THROWS_AS(find_root(f, Bracket{-1.0, 1.0}), NoSignChange);
}

TEST_CASE("find_root reports iteration exhaustion") {
  // Curved so neither the secant nor the midpoint lands on the root early.
  auto f = [](double x) { return std::cos(x); };
  RootOptions opts;
  opts.rel_tol = 1e-15;
  opts.max_iter = 3;
  CHECK_THROWS_AS(find_root(f, Bracket{0.0, 3.0}, opts), MaxIterations);
}

TEST_CASE("find_root validates its inputs") {
  auto f = [](double x) { return x; };
  CHECK_THROWS_AS(find_root(f, Bracket{1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(find_root(f, Bracket{2.0, 1.0}), std::invalid_argument);
  RootOptions bad_tol;
  bad_tol.rel_tol = 0.0;
  CHECK_THROWS_AS(find_root(f, Bracket{-1.0, 1.0}, bad_tol),
                  std::invalid_argument);
  RootOptions bad_iter;
  bad_iter.max_iter = 0;
  CHECK_THROWS_AS(find_root(f, Bracket{-1.0, 1.0}, bad_iter),
                  std::invalid_argument);
  auto nan_f = [](double) { return std::nan(""); };
  CHECK_THROWS_AS(find_root(nan_f, Bracket{-1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("log_sum_exp of two equal deep-negative terms") {
  std::vector<WeightedExp> terms{{1.0, -1000.0}, {1.0, -1000.0}};
  // ln(2*e^-1000) = ln 2 - 1000.
  CHECK(log_sum_exp(terms) ==
        doctest::Approx(-999.30685281944005).epsilon(1e-14));
}

TEST_CASE("log_sum_exp of a single term is weight-adjusted") {
  std::vector<WeightedExp> terms{{0.3, -5.0}};
  CHECK(log_sum_exp(terms) ==
        doctest::Approx(std::log(0.3) - 5.0).epsilon(1e-14));
}

TEST_CASE("log_sum_exp is dominated by the leading term") {
  std::vector<WeightedExp> terms{{1.0, 0.0}, {1.0, -60.0}};
  double v = log_sum_exp(terms);
  CHECK(v >= 0.0);
  CHECK(v <= 1e-15);
}

TEST_CASE("log_sum_exp survives exponents far below the exp underflow "
          "threshold") {
  std::vector<WeightedExp> terms{{1.0, -1e6}, {1.0, -1e6}};
  CHECK(log_sum_exp(terms) ==
        doctest::Approx(-999999.30685281944).epsilon(1e-14));
}

TEST_CASE("log_sum_exp shift invariance") {
  std::vector<WeightedExp> base{{0.25, -3.0}, {0.5, -1.5}, {0.25, -7.0}};
  double v0 = log_sum_exp(base);
  for (double shift : {100.0, -100.0, 350.0}) {
    std::vector<WeightedExp> shifted = base;
    for (auto& t : shifted) t.exponent += shift;
    CHECK(log_sum_exp(shifted) - v0 == doctest::Approx(shift).epsilon(1e-12));
  }
}

TEST_CASE("log_sum_exp skips zero weights entirely") {
  // The zero-weight term would dominate if it were included.
  std::vector<WeightedExp> terms{{0.0, 999.0}, {1.0, 0.0}};
  CHECK(log_sum_exp(terms) == 0.0);
}

TEST_CASE("log_sum_exp input validation") {
  std::vector<WeightedExp> empty;
  CHECK_THROWS_AS(log_sum_exp(empty), EmptyInput);
  std::vector<WeightedExp> all_zero{{0.0, 1.0}, {0.0, 2.0}};
  CHECK_THROWS_AS(log_sum_exp(all_zero), EmptyInput);
  std::vector<WeightedExp> negative{{-0.5, 1.0}};
  CHECK_THROWS_AS(log_sum_exp(negative), std::invalid_argument);
  std::vector<WeightedExp> nan_exp{{1.0, std::nan("")}};
  CHECK_THROWS_AS(log_sum_exp(nan_exp), std::invalid_argument);
}

}  // TEST_SUITE
