#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fatigue/damage_model.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

/// Weibull survival model for the random number of cycles (or days) to
/// failure. With cumulative damage D accrued so far, a zone survives with
/// probability (1-p)^(D^m): the S-N curve's reference probability p pins the
/// curve at D = 1 and the modulus m shapes the distribution around it.
struct WeibullModel {
  Scalar p = 0.05;        // reference probability of the underlying S-N curve
  Scalar modulus = 1.5;   // Weibull modulus m_W

  Scalar log_survival_base() const { return std::log1p(-p); }  // log(1-p) < 0
  void validate() const;
};

/// Deterministic equivalent of the random daily loading: per-zone mean daily
/// damage, plus the constant stress range that would produce the same damage
/// per cycle (empty where the mean damage falls below the S-N cut-off).
struct EquivalentDamage {
  ArrayX d_eq;                                // per-zone mean daily damage
  std::vector<std::optional<Scalar>> s_eq_mpa;
};

/// Column means of the daily damage matrix (compensated summation).
ArrayX mean_daily_damage(const DailyDamageMatrix& matrix);

/// Mean daily damages with their equivalent stress ranges. `cycles_per_day`
/// rescales the mean daily damage to a per-cycle damage before inversion;
/// the default 1 reads d_eq itself as a per-cycle damage.
EquivalentDamage equivalent_damage(const DailyDamageMatrix& matrix,
                                   std::span<const SNCurve> curves,
                                   const PerZone& cycles_per_day = 1.0);

// -- closed-form (deterministic equivalent damage) survival ---------------

/// Survival probability of one zone after t days of constant daily damage:
/// exp(log(1-p) (t d_eq)^m).
Scalar zone_survival_det(const WeibullModel& model, Scalar d_eq, Scalar t_days);

/// Expression form of zone_survival_det for a whole time grid.
template <class Derived>
auto zone_survival_det(const WeibullModel& model, Scalar d_eq,
                       const Eigen::ArrayBase<Derived>& t_days) {
  return (model.log_survival_base() * (t_days.derived() * d_eq).pow(model.modulus)).exp();
}

/// Survival probability of the whole structure: the product over the
/// statistically independent zones, exp(log(1-p) sum_k (t d_eq_k)^m).
Scalar structure_survival_det(const WeibullModel& model, const Eigen::Ref<const ArrayX>& d_eq,
                              Scalar t_days);
ArrayX structure_survival_det(const WeibullModel& model, const Eigen::Ref<const ArrayX>& d_eq,
                              const Eigen::Ref<const ArrayX>& t_days);

/// Time at which the structure's survival drops to 1-p, the order-p lifetime
/// quantile: (sum_k d_eq_k^m)^(-1/m) days. Infinite when no zone accrues
/// damage. Throws std::invalid_argument on negative or non-finite damages.
Scalar structure_quantile_days(const WeibullModel& model, const Eigen::Ref<const ArrayX>& d_eq);

// -- bootstrap (Monte Carlo) survival --------------------------------------

/// Bootstrap estimate of the structure's survival probability after t whole
/// days. Each of `samples` replicates draws t day-rows (all zones jointly,
/// preserving the cross-zone dependence of the observations) uniformly with
/// replacement from the matrix, accumulates them, and evaluates the Weibull
/// survival of the replicate; the estimate is the replicate mean. Fixed
/// substream per replicate and fixed reduction order make the result a pure
/// function of (model, matrix, t, samples, seed).
Scalar structure_survival_mc(const WeibullModel& model, const DailyDamageMatrix& matrix,
                             std::int64_t t_days, int samples, std::uint64_t seed);

/// As structure_survival_mc restricted to a single zone column. For a
/// one-zone matrix this coincides bit for bit with structure_survival_mc at
/// the same seed (the replicate day-draws depend only on seed and day count).
Scalar zone_survival_mc(const WeibullModel& model, const DailyDamageMatrix& matrix, Index zone,
                        std::int64_t t_days, int samples, std::uint64_t seed);

/// Bootstrap estimate together with the standard error of the replicate mean.
struct McEstimate {
  Scalar value = 0;
  Scalar std_error = 0;  // sample std of replicate terms / sqrt(samples)
};
McEstimate structure_survival_mc_detail(const WeibullModel& model, const DailyDamageMatrix& matrix,
                                        std::int64_t t_days, int samples, std::uint64_t seed);

// -- sampled survival curves ----------------------------------------------

enum class SurvivalMethod { det_eq, monte_carlo };

/// Survival probabilities sampled on a time grid: one column per zone plus
/// the structure curve. Every curve starts at 1 and is non-increasing.
struct SurvivalCurve {
  ArrayX times;              // days
  ArrayXX zone_survival;     // times x zones
  ArrayX structure_survival;
  SurvivalMethod method = SurvivalMethod::det_eq;
  int mc_samples = 0;        // when monte_carlo
  std::uint64_t seed = 0;    // when monte_carlo
};

/// Geometric grid of `points` times from t_min to t_max inclusive.
ArrayX geometric_time_grid(Scalar t_min, Scalar t_max, Index points);

/// Default curve horizon: 10x the largest finite zone lifetime, or 1000 days
/// when no zone accrues damage.
Scalar default_time_horizon_days(const Eigen::Ref<const ArrayX>& d_eq);

SurvivalCurve survival_curve_det(const WeibullModel& model, const Eigen::Ref<const ArrayX>& d_eq,
                                 const Eigen::Ref<const ArrayX>& times);

/// Bootstrap curve on an arbitrary grid. Replicates are evaluated at whole
/// days; non-integer grid times are linearly interpolated between the two
/// neighbouring whole days (display convenience only). Within one replicate
/// all grid times share the same day-draw stream, so a prefix of the draws
/// at a later time is exactly the draw sequence of an earlier time.
SurvivalCurve survival_curve_mc(const WeibullModel& model, const DailyDamageMatrix& matrix,
                                const Eigen::Ref<const ArrayX>& times, int samples,
                                std::uint64_t seed);

// -- weakest link comparison ------------------------------------------------

/// Side-by-side lifetime estimates: per-zone Miner lifetimes 1/d_eq_k, their
/// minimum (the weakest-link figure), the structure's order-p quantile, and
/// the factor by which the former overestimates the latter (>= 1, equal to 1
/// only when a single zone carries all the damage).
struct WeakestLinkReport {
  ArrayX zone_lifetime_days;
  Scalar minimal_ncf_days = 0;
  Scalar structure_quantile_days = 0;
  Scalar overestimation_factor = 1;
};

/// Requires at least one strictly positive equivalent damage.
WeakestLinkReport weakest_link_report(const WeibullModel& model,
                                      const Eigen::Ref<const ArrayX>& d_eq);

}  // namespace fatigue
