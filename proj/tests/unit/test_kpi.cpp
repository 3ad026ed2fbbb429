#include <cmath>
#include <random>

#include "asmkit/errors.hpp"
#include "asmkit/kpi.hpp"
#include "doctest.h"

using namespace asmkit;

TEST_CASE("voltage imbalance: hand-computed values") {
  CHECK(compute_vi({{1.0, 1.0, 1.0}, {0.98, 0.98, 0.98}}) == 0.0);
  // V_hat = 1.1, worst deviation 0.2.
  CHECK(compute_vi({{1.0, 1.0, 1.3}}) ==
        doctest::Approx(0.2 / 1.1).epsilon(1e-12));
  // A balanced bus contributes nothing to the max.
  CHECK(compute_vi({{1.0, 1.0, 1.3}, {1.05, 1.05, 1.05}}) ==
        doctest::Approx(0.2 / 1.1).epsilon(1e-12));
  CHECK_THROWS_AS(compute_vi({{0.0, 0.0, 0.0}}), Error);
}

TEST_CASE("substation power factor: both formula modes") {
  bool pure_reactive = false;
  CHECK(compute_spf(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(compute_spf(1.0, 0.0, SpfMode::kTanh) == doctest::Approx(1.0));
  CHECK(compute_spf(1.0, 1.0) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(compute_spf(1.0, 1.0, SpfMode::kTanh) ==
        doctest::Approx(std::abs(std::cos(std::tanh(1.0)))).epsilon(1e-12));
  // Sign of either power never pushes SPF outside [0, 1].
  CHECK(compute_spf(-1.0, 1.0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(compute_spf(0.0, 0.4, SpfMode::kArctan, &pure_reactive) == 0.0);
  CHECK(pure_reactive);
  pure_reactive = false;
  CHECK(compute_spf(2.0, 0.4, SpfMode::kArctan, &pure_reactive) > 0.0);
  CHECK_FALSE(pure_reactive);
}

TEST_CASE("combined KPI: hand values and clamping") {
  CHECK(compute_vispf(0.0, 1.0) == 1.0);
  CHECK(compute_vispf(1.0, 0.0) == 0.0);
  CHECK(compute_vispf(0.2, 0.8) == doctest::Approx(0.8).epsilon(1e-12));
  bool clamped = false;
  CHECK(compute_vispf(1.6, 0.1, &clamped) == 0.0);
  CHECK(clamped);
  clamped = false;
  CHECK(compute_vispf(0.3, 0.9, &clamped) ==
        doctest::Approx(0.8).epsilon(1e-12));
  CHECK_FALSE(clamped);
}

TEST_CASE("KPI fuzz: VISPF bounded, SPF bounded, VI nonnegative") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> power(-5.0, 5.0);
  std::uniform_real_distribution<double> volt(0.5, 1.5);
  for (int i = 0; i < 100000; ++i) {
    const double vispf = compute_vispf(unit(rng), unit(rng));
    CHECK(vispf >= 0.0);
    CHECK(vispf <= 1.0);
  }
  for (int i = 0; i < 10000; ++i) {
    const double spf = compute_spf(power(rng), power(rng));
    CHECK(spf >= 0.0);
    CHECK(spf <= 1.0);
    const double vi =
        compute_vi({{volt(rng), volt(rng), volt(rng)},
                    {volt(rng), volt(rng), volt(rng)}});
    CHECK(vi >= 0.0);
  }
}

TEST_CASE("monotone VI response to a single-phase perturbation") {
  double previous = 0.0;
  for (double bump = 0.0; bump <= 0.3; bump += 0.01) {
    const double vi = compute_vi({{1.0 + bump, 1.0, 1.0}});
    CHECK(vi >= previous);
    previous = vi;
  }
}
