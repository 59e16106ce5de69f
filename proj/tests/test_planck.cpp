#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "thzqkd/planck.hpp"

using namespace thzqkd;

namespace {

// Independent inverse of the occupation map: bisection on the forward
// formula over log-frequency.
double frequency_by_bisection(double v0, double temperature_k) {
  const double target = 0.5 * (v0 - 1.0);
  double lo = std::log(1e6), hi = std::log(1e18);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double n = mean_thermal_photons({std::exp(mid), temperature_k});
    (n > target ? lo : hi) = mid;  // occupation falls with frequency
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("thermal occupation at the reference operating points") {
  const PreparationVariance low = preparation_variance({100e9, 296.0});
  CHECK(low.nbar == doctest::Approx(61.17774373738244).epsilon(1e-12));
  CHECK(low.v0 == doctest::Approx(123.3).epsilon(1e-3));
  CHECK(std::abs(low.v0 - 123.3) < 0.1);

  const PreparationVariance high = preparation_variance({50e12, 296.0});
  CHECK(std::abs(high.v0 - 1.001) < 1e-3);

  CHECK(low.v0 == 2.0 * low.nbar + 1.0);
}

TEST_CASE("occupation vanishes in the high-frequency limit") {
  CHECK(mean_thermal_photons({1e18, 296.0}) < 1e-60);
  CHECK(preparation_variance({1e18, 296.0}).v0 == doctest::Approx(1.0));
}

TEST_CASE("occupation is strictly decreasing in frequency") {
  double prev = mean_thermal_photons({1e9, 296.0});
  for (double f = 2e9; f < 1e15; f *= 1.7) {
    const double cur = mean_thermal_photons({f, 296.0});
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("environment validation") {
  CHECK_THROWS_AS(mean_thermal_photons({0.0, 296.0}), std::domain_error);
  CHECK_THROWS_AS(mean_thermal_photons({-1e9, 296.0}), std::domain_error);
  CHECK_THROWS_AS(mean_thermal_photons({1e12, 0.0}), std::domain_error);
}

TEST_CASE("frequency_from_variance inverts the occupation map") {
  CHECK(frequency_from_variance(123.35548747476489, 296.0) == doctest::Approx(100e9).epsilon(1e-12));

  // independent bisection oracle
  const double f3 = frequency_from_variance(3.0, 296.0);
  CHECK(f3 == doctest::Approx(frequency_by_bisection(3.0, 296.0)).epsilon(1e-10));
  CHECK(mean_thermal_photons({f3, 296.0}) == doctest::Approx(1.0).epsilon(1e-12));

  // v0 -> 1+ pushes the frequency out of any finite band
  CHECK(frequency_from_variance(1.0 + 1e-12, 296.0) > 1e14);
  CHECK_THROWS_AS(frequency_from_variance(1.0, 296.0), std::domain_error);
  CHECK_THROWS_AS(frequency_from_variance(0.5, 296.0), std::domain_error);
}

TEST_CASE("round trip variance <-> frequency across the working band") {
  for (double f = 10e9; f <= 100e12; f *= 1.3) {
    const double v0 = preparation_variance({f, 296.0}).v0;
    CHECK(frequency_from_variance(v0, 296.0) == doctest::Approx(f).epsilon(1e-10));
  }
}

TEST_CASE("entropy function reference values") {
  CHECK(entropy_h(1.0) == 0.0);
  CHECK(entropy_h(3.0) == doctest::Approx(2.0).epsilon(1e-15));
  // large-argument limit h(x) -> log2(e x / 2)
  CHECK(std::abs(entropy_h(1e6) - std::log2(std::exp(1.0) * 1e6 / 2.0)) < 1e-6);
}

TEST_CASE("entropy clamp and domain") {
  CHECK(entropy_h(1.0 - 1e-10) == 0.0);
  CHECK_THROWS_AS(entropy_h(1.0 - 1e-8), std::domain_error);
  CHECK_THROWS_AS(entropy_h(0.0), std::domain_error);
}

TEST_CASE("entropy is increasing and concave on a log grid") {
  double prev = entropy_h(1.0);
  double prev_slope = -1.0;
  double prev_x = 1.0;
  bool first = true;
  for (double x = 1.01; x < 1e8; x *= 1.6) {
    const double cur = entropy_h(x);
    CHECK(cur > prev);
    const double slope = (cur - prev) / (x - prev_x);
    if (!first) CHECK(slope < prev_slope);
    first = false;
    prev_slope = slope;
    prev = cur;
    prev_x = x;
  }
}

TEST_CASE("lambda_mix") {
  CHECK(lambda_mix(7.0, 2.0, 1.0) == 7.0);
  CHECK(lambda_mix(7.0, 2.0, 0.0) == 2.0);
  CHECK(lambda_mix(2.0, 4.0, 0.25) == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(lambda_mix(5.0, 5.0, 0.3) == doctest::Approx(5.0));
  CHECK_THROWS_AS(lambda_mix(1.0, 1.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(lambda_mix(1.0, 1.0, 1.1), std::domain_error);
}
