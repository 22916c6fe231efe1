#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cusplab/error.hpp"
#include "cusplab/weight.hpp"
#include "oracles.hpp"

using namespace cusplab;

TEST_CASE("profile shape") {
  const WeightProfile w(100.0, 10.0, 2.5);
  CHECK(w(100.0) == 0.0);
  CHECK(w(110.0) == 0.0);
  CHECK(w(99.0) == 0.0);
  CHECK(w(111.0) == 0.0);
  CHECK(w(105.0) == 1.0);
  CHECK(w(102.5) == 1.0);
  CHECK(w(107.5) == 1.0);
  CHECK(w(101.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(smooth_step(0.5) == 0.5);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);

  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    CHECK(w(100.0 + 10.0 * t) == doctest::Approx(w(110.0 - 10.0 * t)).epsilon(1e-12));
    CHECK(smooth_step(t) == doctest::Approx(oracle::smooth_step(t)).epsilon(1e-14));
  }
  double prev = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = 100.0 + 2.5 * i / 2000.0;
    CHECK(w(x) >= prev);
    prev = w(x);
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(WeightProfile(1.0, 10.0, 1.0), ValidationError);
  CHECK_THROWS_AS(WeightProfile(100.0, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(WeightProfile(100.0, 10.0, 6.0), ValidationError);
  CHECK_THROWS_AS(WeightProfile(100.0, 10.0, 0.0), ValidationError);
  CHECK_NOTHROW(WeightProfile(100.0, 10.0, 5.0));
  CHECK(WeightProfile::with_default_rise(100.0, 10.0).rise() == 2.5);
}

TEST_CASE("derivative constants") {
  // Independent: sup of the analytic psi' over a dense grid.
  double sup_psi = 0.0;
  for (int i = 1; i < 200000; ++i) sup_psi = std::max(sup_psi, std::abs(oracle::smooth_step_derivative(i / 200000.0)));
  CHECK(sup_psi == doctest::Approx(2.0).epsilon(1e-9));

  const WeightProfile w(1000.0, 100.0, 25.0);
  const auto c = derivative_bound_report(w, 4);
  REQUIRE(c.size() == 5);
  CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(c[1] == doctest::Approx(sup_psi).epsilon(1e-6));
  for (double v : c) CHECK(std::isfinite(v));

  // The scaled constants do not depend on (M, Delta, r).
  for (double r : {0.5, 5.0, 50.0, 500.0}) {
    const WeightProfile v(1e4, 4.0 * r, r);
    const auto cv = derivative_bound_report(v, 4);
    for (int n = 0; n <= 4; ++n) CHECK(cv[n] == doctest::Approx(c[n]).epsilon(1e-3));
  }
  CHECK_THROWS_AS(derivative_bound_report(w, 7), ValidationError);
  CHECK_THROWS_AS(derivative_bound_report(w, 2, 100), ValidationError);
}
