#pragma once

#include <optional>

#include "fatigue/types.hpp"

namespace fatigue {

/// Fatigue strength curve after Eurocode 3 Part 1-9: in log-log coordinates
/// the number of cycles to failure N(S) is piecewise linear in the stress
/// range S, with slope -1/3 above the knee, slope -1/5 between knee and
/// cut-off, and no damage below the cut-off. The curve is anchored by its
/// detail category, the stress range at which N equals `n_ref` (2e6 cycles).
/// Knee and cut-off stress ranges follow from slope continuity at `n_knee`
/// and `n_cutoff`; the code's standard positions are the defaults, both
/// configurable to model alternative provisions.
struct SNCurve {
  Scalar detail_category = 36.0;  // MPa, stress range with n_ref cycles to failure
  Scalar n_ref = 2.0e6;
  Scalar n_knee = 5.0e6;
  Scalar n_cutoff = 1.0e8;
  Scalar slope_high = 3.0;  // N ~ S^-3 above the knee
  Scalar slope_low = 5.0;   // N ~ S^-5 between knee and cut-off

  /// Stress range at the slope change (knee), strictly below detail_category.
  Scalar knee_severity() const;
  /// Stress range below which cycles cause no damage, strictly below the knee.
  Scalar cutoff_severity() const;

  void validate() const;
};

/// Cycles to failure at the given stress range; +infinity below the cut-off.
/// Throws std::domain_error for negative severity.
Scalar cycles_to_failure(const SNCurve& curve, Scalar severity);

/// Damage contributed by one cycle: 1 / cycles_to_failure, exactly 0 below
/// the cut-off.
Scalar damage_per_cycle(const SNCurve& curve, Scalar severity);

/// Inverse of damage_per_cycle: the unique stress range producing the given
/// per-cycle damage. Empty when the damage is below the cut-off level
/// 1/n_cutoff (no finite stress range on the curve produces it). Throws
/// std::domain_error for damage <= 0.
std::optional<Scalar> severity_from_damage(const SNCurve& curve, Scalar damage);

}  // namespace fatigue
