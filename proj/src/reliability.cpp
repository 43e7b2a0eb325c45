#include "fatigue/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fatigue/prng.hpp"

namespace fatigue {

namespace {

constexpr Scalar infinity = std::numeric_limits<Scalar>::infinity();

void check_damages(const Eigen::Ref<const ArrayX>& d_eq, const char* where) {
  if (d_eq.size() < 1) throw std::invalid_argument(std::string(where) + ": empty damage vector");
  if (!((d_eq >= 0).all() && d_eq.isFinite().all()))
    throw std::invalid_argument(std::string(where) + ": damages must be finite and >= 0");
}

}  // namespace

void WeibullModel::validate() const {
  if (!(p > 0) || !(p < 1)) throw std::invalid_argument("WeibullModel: p must lie in (0, 1)");
  if (!(modulus > 0) || !std::isfinite(modulus))
    throw std::invalid_argument("WeibullModel: modulus must be > 0");
}

ArrayX mean_daily_damage(const DailyDamageMatrix& matrix) {
  matrix.validate();
  ArrayX means(matrix.zones());
  for (Index k = 0; k < matrix.zones(); ++k) {
    CompensatedSum column_sum;
    for (Index i = 0; i < matrix.days(); ++i) column_sum.add(matrix.damages(i, k));
    means[k] = column_sum.value() / static_cast<Scalar>(matrix.days());
  }
  return means;
}

EquivalentDamage equivalent_damage(const DailyDamageMatrix& matrix,
                                   std::span<const SNCurve> curves,
                                   const PerZone& cycles_per_day) {
  if (static_cast<Index>(curves.size()) != matrix.zones())
    throw std::invalid_argument("equivalent_damage: one S-N curve per zone required");
  if (!cycles_per_day.shared() && cycles_per_day.size() != matrix.zones())
    throw std::invalid_argument("equivalent_damage: cycles_per_day must hold 1 or K values");

  EquivalentDamage result;
  result.d_eq = mean_daily_damage(matrix);
  result.s_eq_mpa.resize(static_cast<std::size_t>(matrix.zones()));
  for (Index k = 0; k < matrix.zones(); ++k) {
    const Scalar per_day = cycles_per_day(k);
    if (!(per_day > 0))
      throw std::invalid_argument("equivalent_damage: cycles_per_day must be > 0");
    const Scalar per_cycle = result.d_eq[k] / per_day;
    result.s_eq_mpa[static_cast<std::size_t>(k)] =
        per_cycle > 0 ? severity_from_damage(curves[static_cast<std::size_t>(k)], per_cycle)
                      : std::nullopt;
  }
  return result;
}

Scalar zone_survival_det(const WeibullModel& model, Scalar d_eq, Scalar t_days) {
  if (!(t_days >= 0)) throw std::domain_error("zone_survival_det: time must be >= 0");
  if (!(d_eq >= 0)) throw std::domain_error("zone_survival_det: damage must be >= 0");
  return std::exp(model.log_survival_base() * std::pow(t_days * d_eq, model.modulus));
}

Scalar structure_survival_det(const WeibullModel& model, const Eigen::Ref<const ArrayX>& d_eq,
                              Scalar t_days) {
  check_damages(d_eq, "structure_survival_det");
  if (!(t_days >= 0)) throw std::domain_error("structure_survival_det: time must be >= 0");
  return std::exp(model.log_survival_base() * (t_days * d_eq).pow(model.modulus).sum());
}

ArrayX structure_survival_det(const WeibullModel& model, const Eigen::Ref<const ArrayX>& d_eq,
                              const Eigen::Ref<const ArrayX>& t_days) {
  check_damages(d_eq, "structure_survival_det");
  ArrayX survival(t_days.size());
  for (Index i = 0; i < t_days.size(); ++i)
    survival[i] = structure_survival_det(model, d_eq, t_days[i]);
  return survival;
}

Scalar structure_quantile_days(const WeibullModel& model, const Eigen::Ref<const ArrayX>& d_eq) {
  check_damages(d_eq, "structure_quantile_days");
  const Scalar largest = d_eq.maxCoeff();
  if (largest == 0) return infinity;
  // factor out the largest damage so the power sum stays well scaled
  const Scalar power_sum = (d_eq / largest).pow(model.modulus).sum();
  return 1.0 / (largest * std::pow(power_sum, 1.0 / model.modulus));
}

// ---------------------------------------------------------------------------
// Bootstrap engine. One pass evaluates all requested whole-day checkpoints
// for all zones and the structure: each replicate owns a PRNG substream of
// day-row indices and the checkpoints read prefixes of that stream, so a
// single-checkpoint call and a whole-curve call see identical draws.

namespace {

struct McCheckpointValues {
  ArrayXX zone_survival;       // checkpoints x zones
  ArrayX structure_survival;   // checkpoints
  ArrayX structure_std_error;  // checkpoints
};

McCheckpointValues mc_survival_at_days(const WeibullModel& model, const DailyDamageMatrix& matrix,
                                       std::span<const std::int64_t> checkpoint_days, int samples,
                                       std::uint64_t seed) {
  model.validate();
  matrix.validate();
  if (samples < 1) throw std::invalid_argument("bootstrap survival: samples must be >= 1");
  if (!std::is_sorted(checkpoint_days.begin(), checkpoint_days.end()))
    throw std::invalid_argument("bootstrap survival: checkpoints must be sorted");
  if (!checkpoint_days.empty() && checkpoint_days.front() < 0)
    throw std::invalid_argument("bootstrap survival: checkpoints must be >= 0");

  const Index zones = matrix.zones();
  const std::uint64_t day_rows = static_cast<std::uint64_t>(matrix.days());
  const Index n_checkpoints = static_cast<Index>(checkpoint_days.size());
  const Scalar log_base = model.log_survival_base();

  std::vector<CompensatedSum> zone_mean(static_cast<std::size_t>(n_checkpoints * zones));
  std::vector<CompensatedSum> structure_mean(static_cast<std::size_t>(n_checkpoints));
  std::vector<CompensatedSum> structure_square(static_cast<std::size_t>(n_checkpoints));

  std::vector<CompensatedSum> cumulative(static_cast<std::size_t>(zones));
  for (int replicate = 0; replicate < samples; ++replicate) {
    std::mt19937_64 rng = make_substream(seed, static_cast<std::uint64_t>(replicate));
    std::fill(cumulative.begin(), cumulative.end(), CompensatedSum{});
    std::int64_t day = 0;
    for (Index q = 0; q < n_checkpoints; ++q) {
      while (day < checkpoint_days[static_cast<std::size_t>(q)]) {
        const auto row = static_cast<Index>(uniform_index(rng, day_rows));
        for (Index k = 0; k < zones; ++k)
          cumulative[static_cast<std::size_t>(k)].add(matrix.damages(row, k));
        ++day;
      }
      Scalar power_sum = 0;
      for (Index k = 0; k < zones; ++k) {
        const Scalar powered = std::pow(cumulative[static_cast<std::size_t>(k)].value(), model.modulus);
        zone_mean[static_cast<std::size_t>(q * zones + k)].add(std::exp(log_base * powered));
        power_sum += powered;
      }
      const Scalar structure_term = std::exp(log_base * power_sum);
      structure_mean[static_cast<std::size_t>(q)].add(structure_term);
      structure_square[static_cast<std::size_t>(q)].add(structure_term * structure_term);
    }
  }

  McCheckpointValues values;
  values.zone_survival.resize(n_checkpoints, zones);
  values.structure_survival.resize(n_checkpoints);
  values.structure_std_error.resize(n_checkpoints);
  const Scalar m = static_cast<Scalar>(samples);
  for (Index q = 0; q < n_checkpoints; ++q) {
    for (Index k = 0; k < zones; ++k)
      values.zone_survival(q, k) = zone_mean[static_cast<std::size_t>(q * zones + k)].value() / m;
    const Scalar mean = structure_mean[static_cast<std::size_t>(q)].value() / m;
    values.structure_survival[q] = mean;
    if (samples > 1) {
      const Scalar variance =
          std::max(0.0, (structure_square[static_cast<std::size_t>(q)].value() - m * mean * mean) /
                            (m - 1.0));
      values.structure_std_error[q] = std::sqrt(variance / m);
    } else {
      values.structure_std_error[q] = std::numeric_limits<Scalar>::quiet_NaN();
    }
  }
  return values;
}

DailyDamageMatrix single_zone_view(const DailyDamageMatrix& matrix, Index zone) {
  if (zone < 0 || zone >= matrix.zones())
    throw std::invalid_argument("zone_survival_mc: zone index out of range");
  DailyDamageMatrix column;
  column.damages = matrix.damages.col(zone);
  column.zone_names = {matrix.zone_names[static_cast<std::size_t>(zone)]};
  column.dates = matrix.dates;
  return column;
}

}  // namespace

McEstimate structure_survival_mc_detail(const WeibullModel& model, const DailyDamageMatrix& matrix,
                                        std::int64_t t_days, int samples, std::uint64_t seed) {
  if (t_days < 1) throw std::invalid_argument("structure_survival_mc: t_days must be >= 1");
  const std::int64_t checkpoints[] = {t_days};
  const McCheckpointValues values = mc_survival_at_days(model, matrix, checkpoints, samples, seed);
  return {values.structure_survival[0], values.structure_std_error[0]};
}

Scalar structure_survival_mc(const WeibullModel& model, const DailyDamageMatrix& matrix,
                             std::int64_t t_days, int samples, std::uint64_t seed) {
  return structure_survival_mc_detail(model, matrix, t_days, samples, seed).value;
}

Scalar zone_survival_mc(const WeibullModel& model, const DailyDamageMatrix& matrix, Index zone,
                        std::int64_t t_days, int samples, std::uint64_t seed) {
  return structure_survival_mc(model, single_zone_view(matrix, zone), t_days, samples, seed);
}

ArrayX geometric_time_grid(Scalar t_min, Scalar t_max, Index points) {
  if (!(t_min > 0) || !(t_max >= t_min) || !std::isfinite(t_max))
    throw std::invalid_argument("geometric_time_grid: need 0 < t_min <= t_max < inf");
  if (points < 1) throw std::invalid_argument("geometric_time_grid: need at least one point");
  ArrayX times(points);
  if (points == 1) {
    times[0] = t_min;
    return times;
  }
  const Scalar log_ratio = std::log(t_max / t_min);
  for (Index i = 0; i < points; ++i)
    times[i] = t_min * std::exp(log_ratio * static_cast<Scalar>(i) / static_cast<Scalar>(points - 1));
  times[points - 1] = t_max;  // pin the endpoint against rounding drift
  return times;
}

Scalar default_time_horizon_days(const Eigen::Ref<const ArrayX>& d_eq) {
  check_damages(d_eq, "default_time_horizon_days");
  const Scalar largest = d_eq.maxCoeff();
  Scalar longest_finite = 0;
  for (Index k = 0; k < d_eq.size(); ++k)
    if (d_eq[k] > 0) longest_finite = std::max(longest_finite, 1.0 / d_eq[k]);
  if (largest == 0 || longest_finite == 0) return 1000.0;
  return 10.0 * longest_finite;
}

SurvivalCurve survival_curve_det(const WeibullModel& model, const Eigen::Ref<const ArrayX>& d_eq,
                                 const Eigen::Ref<const ArrayX>& times) {
  model.validate();
  check_damages(d_eq, "survival_curve_det");
  SurvivalCurve curve;
  curve.method = SurvivalMethod::det_eq;
  curve.times = times;
  curve.zone_survival.resize(times.size(), d_eq.size());
  for (Index k = 0; k < d_eq.size(); ++k)
    curve.zone_survival.col(k) = zone_survival_det(model, d_eq[k], times);
  curve.structure_survival = structure_survival_det(model, d_eq, times);
  return curve;
}

SurvivalCurve survival_curve_mc(const WeibullModel& model, const DailyDamageMatrix& matrix,
                                const Eigen::Ref<const ArrayX>& times, int samples,
                                std::uint64_t seed) {
  if (times.size() < 1) throw std::invalid_argument("survival_curve_mc: empty time grid");
  if (!((times >= 0).all() && times.isFinite().all()))
    throw std::invalid_argument("survival_curve_mc: times must be finite and >= 0");

  // whole-day checkpoints bracketing every grid time
  std::vector<std::int64_t> checkpoints;
  checkpoints.reserve(static_cast<std::size_t>(times.size()) * 2);
  for (Index i = 0; i < times.size(); ++i) {
    const auto low = static_cast<std::int64_t>(std::floor(times[i]));
    const auto high = static_cast<std::int64_t>(std::ceil(times[i]));
    if (low > 0) checkpoints.push_back(low);
    if (high > 0) checkpoints.push_back(high);
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());

  const McCheckpointValues values = mc_survival_at_days(model, matrix, checkpoints, samples, seed);

  const auto checkpoint_index = [&](std::int64_t day) -> Index {
    const auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), day);
    return static_cast<Index>(it - checkpoints.begin());
  };
  // survival at whole day t; day 0 survives with certainty
  const auto zone_at = [&](std::int64_t day, Index k) -> Scalar {
    return day == 0 ? 1.0 : values.zone_survival(checkpoint_index(day), k);
  };
  const auto structure_at = [&](std::int64_t day) -> Scalar {
    return day == 0 ? 1.0 : values.structure_survival[checkpoint_index(day)];
  };

  SurvivalCurve curve;
  curve.method = SurvivalMethod::monte_carlo;
  curve.mc_samples = samples;
  curve.seed = seed;
  curve.times = times;
  curve.zone_survival.resize(times.size(), matrix.zones());
  curve.structure_survival.resize(times.size());
  for (Index i = 0; i < times.size(); ++i) {
    const auto low = static_cast<std::int64_t>(std::floor(times[i]));
    const auto high = static_cast<std::int64_t>(std::ceil(times[i]));
    const Scalar fraction = times[i] - static_cast<Scalar>(low);
    for (Index k = 0; k < matrix.zones(); ++k) {
      const Scalar at_low = zone_at(low, k);
      curve.zone_survival(i, k) =
          low == high ? at_low : at_low + fraction * (zone_at(high, k) - at_low);
    }
    const Scalar at_low = structure_at(low);
    curve.structure_survival[i] =
        low == high ? at_low : at_low + fraction * (structure_at(high) - at_low);
  }
  return curve;
}

WeakestLinkReport weakest_link_report(const WeibullModel& model,
                                      const Eigen::Ref<const ArrayX>& d_eq) {
  check_damages(d_eq, "weakest_link_report");
  if (!(d_eq > 0).any())
    throw std::invalid_argument("weakest_link_report: at least one zone must accrue damage");
  WeakestLinkReport report;
  report.zone_lifetime_days.resize(d_eq.size());
  for (Index k = 0; k < d_eq.size(); ++k)
    report.zone_lifetime_days[k] = extrapolated_lifetime_days(d_eq[k]);
  report.minimal_ncf_days = report.zone_lifetime_days.minCoeff();
  report.structure_quantile_days = structure_quantile_days(model, d_eq);
  report.overestimation_factor = report.minimal_ncf_days / report.structure_quantile_days;
  return report;
}

}  // namespace fatigue
