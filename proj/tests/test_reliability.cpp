#include <cmath>
#include <random>

#include "doctest.h"
#include "fatigue/reliability.hpp"

using namespace fatigue;

namespace {

DailyDamageMatrix matrix_from(const ArrayXX& damages) {
  DailyDamageMatrix matrix;
  matrix.damages = damages;
  for (Index k = 0; k < damages.cols(); ++k)
    matrix.zone_names.push_back("Z" + std::to_string(k + 1));
  for (Index i = 0; i < damages.rows(); ++i)
    matrix.dates.push_back("day" + std::to_string(i));
  return matrix;
}

/// Independent route to the order-p quantile: bisection on the survival curve.
template <class Survival>
Scalar bisect_quantile(const Survival& survival, Scalar target, Scalar low, Scalar high) {
  for (int i = 0; i < 200; ++i) {
    const Scalar mid = 0.5 * (low + high);
    if (survival(mid) > target)
      low = mid;
    else
      high = mid;
  }
  return 0.5 * (low + high);
}

}  // namespace

TEST_SUITE("reliability") {

TEST_CASE("mean daily damage: constant and two-day examples") {
  CHECK(mean_daily_damage(matrix_from(ArrayXX::Constant(5, 1, 1e-3)))[0] ==
        doctest::Approx(1e-3).epsilon(1e-12));
  ArrayXX two_days(2, 1);
  two_days << 0.0, 2e-3;
  CHECK(mean_daily_damage(matrix_from(two_days))[0] == 1e-3);
}

TEST_CASE("equivalent damage carries the equivalent stress range") {
  const SNCurve curve{};  // detail category 36
  ArrayXX damages(4, 2);
  damages.col(0).setConstant(5e-7);  // anchor damage per day
  damages.col(1).setZero();
  const auto equivalent = equivalent_damage(matrix_from(damages), std::vector<SNCurve>{curve, curve});
  CHECK(equivalent.d_eq[0] == doctest::Approx(5e-7).epsilon(1e-12));
  REQUIRE(equivalent.s_eq_mpa[0].has_value());
  CHECK(*equivalent.s_eq_mpa[0] == doctest::Approx(36.0).epsilon(1e-9));
  CHECK(equivalent.d_eq[1] == 0.0);
  CHECK_FALSE(equivalent.s_eq_mpa[1].has_value());

  // inversion identity at the default one cycle per day
  CHECK(damage_per_cycle(curve, *equivalent.s_eq_mpa[0]) ==
        doctest::Approx(equivalent.d_eq[0]).epsilon(1e-10));

  // with many cycles per day the stress range is reported per mean cycle
  const auto per_cycle =
      equivalent_damage(matrix_from(damages), std::vector<SNCurve>{curve, curve}, 2.0);
  CHECK(damage_per_cycle(curve, *per_cycle.s_eq_mpa[0]) ==
        doctest::Approx(5e-7 / 2.0).epsilon(1e-10));
}

TEST_CASE("zone survival: unit cumulative damage gives 1-p") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<Scalar> p_draw(0.01, 0.95);
  std::uniform_real_distribution<Scalar> m_draw(0.5, 5.0);
  std::uniform_real_distribution<Scalar> log_d(std::log(1e-9), std::log(1e-1));
  for (int i = 0; i < 200; ++i) {
    const WeibullModel model{p_draw(rng), m_draw(rng)};
    const Scalar d_eq = std::exp(log_d(rng));
    const Scalar survival = zone_survival_det(model, d_eq, 1.0 / d_eq);
    CHECK(survival == doctest::Approx(1.0 - model.p).epsilon(1e-12));
  }
}

TEST_CASE("zone survival boundary values") {
  const WeibullModel model{0.05, 1.5};
  CHECK(zone_survival_det(model, 1e-3, 0.0) == 1.0);
  CHECK(zone_survival_det(model, 0.0, 1e9) == 1.0);
  CHECK_THROWS_AS(zone_survival_det(model, 1e-3, -1.0), std::domain_error);
}

TEST_CASE("structure survival reduces to the zone law for K=1") {
  const WeibullModel model{0.05, 1.5};
  ArrayX d_eq(1);
  d_eq << 2.5e-4;
  for (const Scalar t : {0.0, 10.0, 4000.0, 1e6})
    CHECK(structure_survival_det(model, d_eq, t) ==
          doctest::Approx(zone_survival_det(model, d_eq[0], t)).epsilon(1e-15));
}

TEST_CASE("eight identical zones at unit cumulative damage: (1-p)^8") {
  const WeibullModel model{0.05, 1.5};
  const ArrayX d_eq = ArrayX::Constant(8, 1e-3);
  CHECK(structure_survival_det(model, d_eq, 1000.0) ==
        doctest::Approx(std::pow(0.95, 8)).epsilon(1e-12));
}

TEST_CASE("factorisation: structure survival is the product of zone survivals") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<Scalar> p_draw(0.01, 0.9);
  std::uniform_real_distribution<Scalar> m_draw(0.5, 4.0);
  std::uniform_real_distribution<Scalar> scale(0.0, 1.5);
  for (int trial = 0; trial < 1000; ++trial) {
    const WeibullModel model{p_draw(rng), m_draw(rng)};
    const Index zones = 1 + static_cast<Index>(rng() % 12);
    const Scalar t = 1.0 + static_cast<Scalar>(rng() % 5000);
    ArrayX d_eq(zones);
    for (Index k = 0; k < zones; ++k) d_eq[k] = scale(rng) / t;
    Scalar product = 1.0;
    for (Index k = 0; k < zones; ++k) product *= zone_survival_det(model, d_eq[k], t);
    CHECK(structure_survival_det(model, d_eq, t) == doctest::Approx(product).epsilon(1e-12));
  }
}

TEST_CASE("structure survival never exceeds the weakest zone's survival") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<Scalar> scale(0.0, 2e-3);
  const WeibullModel model{0.05, 1.5};
  for (int trial = 0; trial < 200; ++trial) {
    ArrayX d_eq(5);
    for (Index k = 0; k < 5; ++k) d_eq[k] = scale(rng);
    const Scalar t = 1.0 + static_cast<Scalar>(rng() % 4000);
    Scalar weakest = 1.0;
    for (Index k = 0; k < 5; ++k) weakest = std::min(weakest, zone_survival_det(model, d_eq[k], t));
    CHECK(structure_survival_det(model, d_eq, t) <= weakest + 1e-15);
  }
}

TEST_CASE("structure quantile: closed form, consistency and reductions") {
  const WeibullModel model{0.05, 1.5};
  ArrayX single(1);
  single << 1e-3;
  CHECK(structure_quantile_days(model, single) == doctest::Approx(1000.0).epsilon(1e-12));

  // eight identical zones shorten the lifetime by 8^(2/3) = 4
  const ArrayX eight = ArrayX::Constant(8, 1e-3);
  CHECK(structure_quantile_days(model, eight) == doctest::Approx(250.0).epsilon(1e-9));

  // the quantile satisfies the defining survival identity
  const Scalar quantile = structure_quantile_days(model, eight);
  CHECK(structure_survival_det(model, eight, quantile) ==
        doctest::Approx(1.0 - model.p).epsilon(1e-12));

  // all-zero damages: infinite lifetime
  CHECK(std::isinf(structure_quantile_days(model, ArrayX::Zero(3))));
}

TEST_CASE("quantile agrees with bisection on the survival curve") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<Scalar> p_draw(0.01, 0.5);
  std::uniform_real_distribution<Scalar> m_draw(0.6, 4.0);
  std::uniform_real_distribution<Scalar> log_d(std::log(1e-7), std::log(1e-2));
  for (int trial = 0; trial < 50; ++trial) {
    const WeibullModel model{p_draw(rng), m_draw(rng)};
    ArrayX d_eq(4);
    for (Index k = 0; k < 4; ++k) d_eq[k] = std::exp(log_d(rng));
    const Scalar closed = structure_quantile_days(model, d_eq);
    const Scalar bisected = bisect_quantile(
        [&](Scalar t) { return structure_survival_det(model, d_eq, t); }, 1.0 - model.p,
        closed / 16.0, closed * 16.0);
    CHECK(bisected == doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("zone quantile equals the extrapolated lifetime for any modulus") {
  const ArrayX d_eq = ArrayX::Constant(1, 3.7e-4);
  for (const Scalar modulus : {0.7, 1.5, 3.0}) {
    const WeibullModel model{0.05, modulus};
    const Scalar bisected = bisect_quantile(
        [&](Scalar t) { return zone_survival_det(model, d_eq[0], t); }, 1.0 - model.p, 1.0,
        1e8);
    CHECK(bisected == doctest::Approx(extrapolated_lifetime_days(d_eq[0])).epsilon(1e-9));
  }
}

TEST_CASE("weakest link report: identical zones overestimate by K^(1/m)") {
  const WeibullModel model{0.05, 1.5};
  const auto report = weakest_link_report(model, ArrayX::Constant(8, 1e-3));
  CHECK(report.minimal_ncf_days == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(report.structure_quantile_days == doctest::Approx(250.0).epsilon(1e-9));
  CHECK(report.overestimation_factor == doctest::Approx(4.0).epsilon(1e-9));

  const auto solo = weakest_link_report(model, ArrayX::Constant(1, 1e-3));
  CHECK(solo.overestimation_factor == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(weakest_link_report(model, ArrayX::Zero(4)), std::invalid_argument);
}

TEST_CASE("weakest link never underestimates the structure quantile") {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<Scalar> log_d(std::log(1e-8), std::log(1e-2));
  const WeibullModel model{0.05, 1.5};
  for (int trial = 0; trial < 500; ++trial) {
    ArrayX d_eq(6);
    for (Index k = 0; k < 6; ++k) d_eq[k] = std::exp(log_d(rng));
    const auto report = weakest_link_report(model, d_eq);
    CHECK(report.overestimation_factor >= 1.0);
    CHECK(report.structure_quantile_days <= report.minimal_ncf_days * (1 + 1e-12));
  }
  // exactly one damaged zone: both estimates coincide
  ArrayX lonely = ArrayX::Zero(5);
  lonely[2] = 4e-4;
  const auto report = weakest_link_report(model, lonely);
  CHECK(report.overestimation_factor == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.structure_quantile_days == doctest::Approx(2500.0).epsilon(1e-12));
}

TEST_CASE("adding a damaged zone strictly lowers the structure quantile") {
  const WeibullModel model{0.05, 1.5};
  ArrayX base(3);
  base << 1e-3, 2e-4, 5e-5;
  ArrayX extended(4);
  extended << 1e-3, 2e-4, 5e-5, 6e-4;
  CHECK(structure_quantile_days(model, extended) < structure_quantile_days(model, base));
}

TEST_CASE("single-row bootstrap collapses to the closed form") {
  const WeibullModel model{0.05, 1.5};
  ArrayXX row(1, 3);
  row << 2e-4, 5e-5, 1e-3;
  const DailyDamageMatrix matrix = matrix_from(row);
  for (const std::int64_t t : {1, 10, 800}) {
    const ArrayX cumulative = row.row(0).transpose() * static_cast<Scalar>(t);
    CHECK(structure_survival_mc(model, matrix, t, 37, 99) ==
          doctest::Approx(structure_survival_det(model, cumulative, 1.0)).epsilon(1e-12));
    CHECK(zone_survival_mc(model, matrix, 2, t, 37, 99) ==
          doctest::Approx(zone_survival_det(model, row(0, 2), static_cast<Scalar>(t)))
              .epsilon(1e-12));
  }
}

TEST_CASE("bootstrap on an all-zero matrix reports certain survival") {
  const WeibullModel model{0.05, 1.5};
  const DailyDamageMatrix matrix = matrix_from(ArrayXX::Zero(6, 2));
  CHECK(structure_survival_mc(model, matrix, 1000, 25, 7) == 1.0);
  CHECK(zone_survival_mc(model, matrix, 1, 1000, 25, 7) == 1.0);
}

TEST_CASE("bootstrap is a pure function of the seed") {
  const WeibullModel model{0.05, 1.5};
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<Scalar> value(0.0, 2e-3);
  ArrayXX damages(40, 3);
  for (Index i = 0; i < damages.rows(); ++i)
    for (Index k = 0; k < damages.cols(); ++k) damages(i, k) = value(rng);
  const DailyDamageMatrix matrix = matrix_from(damages);

  const Scalar first = structure_survival_mc(model, matrix, 700, 200, 12345);
  const Scalar second = structure_survival_mc(model, matrix, 700, 200, 12345);
  CHECK(first == second);
  const Scalar other_seed = structure_survival_mc(model, matrix, 700, 200, 54321);
  CHECK(first != other_seed);  // astronomically unlikely to collide
  CHECK(first >= 0.0);
  CHECK(first <= 1.0);
}

TEST_CASE("single-zone matrix: zone and structure bootstraps coincide bitwise") {
  const WeibullModel model{0.08, 2.0};
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<Scalar> value(0.0, 1e-3);
  ArrayXX damages(25, 1);
  for (Index i = 0; i < damages.rows(); ++i) damages(i, 0) = value(rng);
  const DailyDamageMatrix matrix = matrix_from(damages);
  CHECK(zone_survival_mc(model, matrix, 0, 500, 64, 2024) ==
        structure_survival_mc(model, matrix, 500, 64, 2024));
}

TEST_CASE("bootstrap curves share draws with single-time estimates") {
  const WeibullModel model{0.05, 1.5};
  std::mt19937_64 rng(28);
  std::uniform_real_distribution<Scalar> value(0.0, 2e-3);
  ArrayXX damages(30, 2);
  for (Index i = 0; i < damages.rows(); ++i)
    for (Index k = 0; k < damages.cols(); ++k) damages(i, k) = value(rng);
  const DailyDamageMatrix matrix = matrix_from(damages);

  ArrayX times(3);
  times << 100.0, 250.0, 400.0;
  const SurvivalCurve curve = survival_curve_mc(model, matrix, times, 150, 777);
  for (Index i = 0; i < times.size(); ++i) {
    const auto t = static_cast<std::int64_t>(times[i]);
    CHECK(curve.structure_survival[i] == structure_survival_mc(model, matrix, t, 150, 777));
    for (Index k = 0; k < 2; ++k)
      CHECK(curve.zone_survival(i, k) == zone_survival_mc(model, matrix, k, t, 150, 777));
  }

  // non-integer times interpolate between the bracketing whole days
  ArrayX fractional(1);
  fractional << 100.5;
  const SurvivalCurve lerped = survival_curve_mc(model, matrix, fractional, 150, 777);
  const Scalar low = structure_survival_mc(model, matrix, 100, 150, 777);
  const Scalar high = structure_survival_mc(model, matrix, 101, 150, 777);
  CHECK(lerped.structure_survival[0] == doctest::Approx(low + 0.5 * (high - low)).epsilon(1e-15));
}

TEST_CASE("bootstrap curves are monotone, within [0,1], and lose to fewer zones") {
  const WeibullModel model{0.05, 1.5};
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<Scalar> value(0.0, 1.5e-3);
  ArrayXX damages(50, 3);
  for (Index i = 0; i < damages.rows(); ++i)
    for (Index k = 0; k < damages.cols(); ++k) damages(i, k) = value(rng);
  const DailyDamageMatrix matrix = matrix_from(damages);

  const ArrayX times = geometric_time_grid(1.0, 5000.0, 40);
  const SurvivalCurve curve = survival_curve_mc(model, matrix, times, 60, 31);
  for (Index i = 0; i < times.size(); ++i) {
    CHECK(curve.structure_survival[i] >= 0.0);
    CHECK(curve.structure_survival[i] <= 1.0);
    if (i > 0) {
      CHECK(curve.structure_survival[i] <= curve.structure_survival[i - 1] + 1e-15);
      for (Index k = 0; k < 3; ++k)
        CHECK(curve.zone_survival(i, k) <= curve.zone_survival(i - 1, k) + 1e-15);
    }
  }

  // dropping a zone cannot lower the structure's survival (same seed, same draws)
  const DailyDamageMatrix narrower = matrix_from(damages.leftCols(2));
  const Scalar with_three = structure_survival_mc(model, matrix, 1000, 60, 31);
  const Scalar with_two = structure_survival_mc(model, narrower, 1000, 60, 31);
  CHECK(with_two >= with_three);
}

TEST_CASE("deterministic curves are monotone and pinned at t=0") {
  const WeibullModel model{0.05, 1.5};
  ArrayX d_eq(3);
  d_eq << 1e-3, 2e-4, 0.0;
  ArrayX times(5);
  times << 0.0, 1.0, 10.0, 100.0, 1000.0;
  const SurvivalCurve curve = survival_curve_det(model, d_eq, times);
  CHECK(curve.structure_survival[0] == 1.0);
  CHECK(curve.zone_survival(0, 0) == 1.0);
  CHECK(curve.zone_survival(4, 2) == 1.0);  // undamaged zone never fails
  for (Index i = 1; i < times.size(); ++i)
    CHECK(curve.structure_survival[i] <= curve.structure_survival[i - 1]);
}

TEST_CASE("geometric grid spans the requested range") {
  const ArrayX times = geometric_time_grid(1.0, 1000.0, 200);
  CHECK(times.size() == 200);
  CHECK(times[0] == 1.0);
  CHECK(times[199] == 1000.0);
  const Scalar ratio = times[1] / times[0];
  for (Index i = 2; i < times.size(); ++i)
    CHECK(times[i] / times[i - 1] == doctest::Approx(ratio).epsilon(1e-9));
  CHECK_THROWS_AS(geometric_time_grid(0.0, 10.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(geometric_time_grid(10.0, 1.0, 5), std::invalid_argument);
}

TEST_CASE("default horizon: ten lifetimes, or 1000 days with no damage") {
  ArrayX d_eq(2);
  d_eq << 1e-3, 1e-4;
  CHECK(default_time_horizon_days(d_eq) == doctest::Approx(1e5).epsilon(1e-12));
  CHECK(default_time_horizon_days(ArrayX::Zero(2)) == 1000.0);
}

TEST_CASE("bootstrap standard error behaves like a standard error") {
  const WeibullModel model{0.05, 1.5};
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<Scalar> value(0.0, 2e-3);
  ArrayXX damages(60, 2);
  for (Index i = 0; i < damages.rows(); ++i)
    for (Index k = 0; k < damages.cols(); ++k) damages(i, k) = value(rng);
  const DailyDamageMatrix matrix = matrix_from(damages);
  const McEstimate estimate = structure_survival_mc_detail(model, matrix, 600, 400, 5);
  CHECK(estimate.std_error >= 0.0);
  CHECK(estimate.std_error < 0.5);
  const McEstimate single = structure_survival_mc_detail(model, matrix, 600, 1, 5);
  CHECK(std::isnan(single.std_error));
}

}  // TEST_SUITE
