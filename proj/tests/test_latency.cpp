#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "anarchia/latency.hpp"

using namespace anarchia;

namespace {

std::vector<LatencyFunction> catalog_samples() {
  return {
      LatencyFunction::poly_sum({0, 1}),
      LatencyFunction::poly_sum({0, 0, 1}),
      LatencyFunction::poly_sum({2, 0.5, 0, 3}),
      LatencyFunction::poly_log_product({0, 0, 1}, {1, 1}),
      LatencyFunction::exp_base(2.0),
      LatencyFunction::exp_base(1.5, 3.0),
      LatencyFunction::power_self(),
      LatencyFunction::factorial(),
      LatencyFunction::exp_log_power(1.0),
      LatencyFunction::exp_log_power(0.5, 2.0),
      LatencyFunction::power_log(1.0),
      LatencyFunction::constant(5.0),
  };
}

std::vector<double> grid_1e3() {
  std::vector<double> xs;
  for (int k = 0; k < 1000; ++k) xs.push_back(std::pow(10.0, -3.0 + 6.0 * k / 999.0));
  return xs;
}

}  // namespace

TEST_CASE("direct evaluation matches hand values") {
  CHECK(LatencyFunction::poly_sum({0, 0, 1}).eval(3.0) == doctest::Approx(9.0));
  CHECK(LatencyFunction::constant(5.0).eval(17.0) == doctest::Approx(5.0));
  CHECK(LatencyFunction::factorial().eval(5.0) == doctest::Approx(120.0));
  CHECK(LatencyFunction::poly_sum({0, 1}).eval(0.25) == doctest::Approx(0.25));
}

TEST_CASE("log evaluation matches analytic identities") {
  CHECK(LatencyFunction::exp_base(2.0).log_eval(10.0) == doctest::Approx(10.0 * std::log(2.0)));
  CHECK(LatencyFunction::power_self().log_eval(3.0) == doctest::Approx(3.0 * std::log(3.0)));
  CHECK(LatencyFunction::exp_log_power(1.0).log_eval(std::exp(1.0)) == doctest::Approx(1.0));
  CHECK(LatencyFunction::factorial().log_eval(5.0) == doctest::Approx(std::log(120.0)));
}

TEST_CASE("log_ratio") {
  auto exp2 = LatencyFunction::exp_base(2.0);
  CHECK(exp2.log_ratio(11.0, 10.0) == doctest::Approx(std::log(2.0)));
  CHECK(exp2.log_ratio(7.0, 7.0) == doctest::Approx(0.0));
  CHECK(LatencyFunction::poly_sum({0, 1}).log_ratio(4.0, 2.0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("domain errors") {
  auto f = LatencyFunction::poly_sum({0, 1});
  CHECK_THROWS_AS(f.eval(0.0), std::domain_error);
  CHECK_THROWS_AS(f.eval(-1.0), std::domain_error);
  CHECK_THROWS_AS(f.log_eval(0.0), std::domain_error);
}

TEST_CASE("monotone on a 1000-point log grid") {
  for (const auto& f : catalog_samples()) {
    double prev = -1.0;
    for (double x : grid_1e3()) {
      double v = f.eval(x);
      CHECK(v >= prev * (1.0 - 1e-12));
      CHECK(v > 0.0);
      prev = v;
    }
  }
}

TEST_CASE("log_eval consistent with eval wherever representable") {
  for (const auto& f : catalog_samples()) {
    for (double x : grid_1e3()) {
      double v = f.eval(x);
      if (!(v <= 1e300)) continue;
      CHECK(std::fabs(f.log_eval(x) - std::log(v)) <= 1e-9);
    }
  }
}

TEST_CASE("saturation hands off to log_eval") {
  auto f = LatencyFunction::exp_base(2.0);
  CHECK(std::isinf(f.eval(2000.0)));
  CHECK(f.log_eval(2000.0) == doctest::Approx(2000.0 * std::log(2.0)));
  CHECK(std::isfinite(LatencyFunction::factorial().log_eval(1e6)));
}

TEST_CASE("ratio-limit behaviour separates the growth classes") {
  // l(x+1)/l(x) stays above a constant for the fast growers...
  for (const auto& f : {LatencyFunction::exp_base(2.0), LatencyFunction::power_self(),
                        LatencyFunction::factorial()}) {
    for (double x : {10.0, 100.0, 1000.0, 10000.0}) CHECK(f.log_ratio(x + 1.0, x) > 0.5);
  }
  // ...and decays toward 0 for the slow superpolynomials
  auto slow = LatencyFunction::exp_log_power(1.0);
  double prev = slow.log_ratio(11.0, 10.0);
  for (double x : {100.0, 1000.0, 10000.0}) {
    double r = slow.log_ratio(x + 1.0, x);
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 0.01);
}

TEST_CASE("class tags are fixed per family") {
  CHECK(LatencyFunction::exp_base(2.0).class_tag() == LatencyClass::L1);
  CHECK(LatencyFunction::power_self().class_tag() == LatencyClass::L1);
  CHECK(LatencyFunction::factorial().class_tag() == LatencyClass::L1);
  CHECK(LatencyFunction::exp_log_power(0.5).class_tag() == LatencyClass::L2);
  CHECK(LatencyFunction::power_log(2.0).class_tag() == LatencyClass::L2);
  CHECK(LatencyFunction::poly_sum({0, 1}).class_tag() == LatencyClass::L3);
  CHECK(LatencyFunction::poly_log_product({0, 1}, {1, 1}).class_tag() == LatencyClass::L3);
  CHECK(LatencyFunction::constant(1.0).class_tag() == LatencyClass::L3);
}

TEST_CASE("poly_log_product rejects non-monotone instances") {
  CHECK_THROWS_AS(LatencyFunction::poly_log_product({1}, {1, -5}), std::invalid_argument);
  CHECK_NOTHROW(LatencyFunction::poly_log_product({0, 0, 1}, {1, 1}));
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(LatencyFunction::poly_sum({}), std::invalid_argument);
  CHECK_THROWS_AS(LatencyFunction::poly_sum({0.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(LatencyFunction::exp_base(1.0), std::invalid_argument);
  CHECK_THROWS_AS(LatencyFunction::exp_base(0.5), std::invalid_argument);
  CHECK_THROWS_AS(LatencyFunction::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(LatencyFunction::exp_log_power(0.0), std::invalid_argument);
}

TEST_CASE("wire-format round trip") {
  auto f = LatencyFunction::from_spec("poly_sum", {0, 1});
  CHECK(f.family() == LatencyFamily::PolySum);
  CHECK(f.eval(2.0) == doctest::Approx(2.0));

  auto g = LatencyFunction::from_spec("poly_log_product", {3, 0, 0, 1, 1, 1});
  CHECK(g.eval(std::exp(1.0)) == doctest::Approx(std::exp(2.0) * 2.0));
  CHECK(g.spec_params() == std::vector<double>{3, 0, 0, 1, 1, 1});

  CHECK(LatencyFunction::from_spec("factorial", {}).eval(4.0) == doctest::Approx(24.0));
  CHECK_THROWS_AS(LatencyFunction::from_spec("nope", {1}), std::invalid_argument);
  CHECK_THROWS_AS(LatencyFunction::from_spec("poly_log_product", {5, 1}), std::invalid_argument);
}

TEST_CASE("keys group identical curves") {
  CHECK(LatencyFunction::poly_sum({0, 1}).key() == LatencyFunction::poly_sum({0, 1}).key());
  CHECK(LatencyFunction::poly_sum({0, 1}).key() != LatencyFunction::poly_sum({0, 2}).key());
  CHECK(LatencyFunction::exp_base(2.0).key() != LatencyFunction::power_log(2.0).key());
}
