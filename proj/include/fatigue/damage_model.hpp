#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatigue/compensated_sum.hpp"
#include "fatigue/rainflow.hpp"
#include "fatigue/sn_curve.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

/// How the recorded cycle magnitude epsilon relates to the stress range:
/// `range` treats it as the full peak-to-valley range, `amplitude` as the
/// half range (doubled before entering the S-N curve).
enum class EpsilonInterpretation { range, amplitude };

/// Zone-resolved parameter: either one value shared by every zone or one
/// value per zone.
class PerZone {
 public:
  PerZone(Scalar shared) : values_(ArrayX::Constant(1, shared)) {}  // NOLINT(google-explicit-constructor)
  explicit PerZone(ArrayX per_zone) : values_(std::move(per_zone)) {
    if (values_.size() == 0) throw std::invalid_argument("PerZone: empty value list");
  }

  Scalar operator()(Index zone) const { return values_.size() == 1 ? values_[0] : values_[zone]; }
  bool shared() const { return values_.size() == 1; }
  Index size() const { return values_.size(); }
  const ArrayX& values() const { return values_; }

 private:
  ArrayX values_;
};

/// One analysis configuration: the S-N detail category, the safety factor
/// applied on top of the measured strains, the Young modulus converting
/// strain to stress, and the survival-model parameters.
struct ScenarioConfig {
  PerZone detail_category_mpa = 36.0;
  PerZone safety_factor = 1.0;        // >= 1
  PerZone young_modulus_mpa = 210.0e3;
  Scalar p = 0.05;                    // reference probability of the S-N curve
  Scalar weibull_modulus = 1.5;
  EpsilonInterpretation epsilon_interpretation = EpsilonInterpretation::range;

  void validate(Index zone_count) const;
};

/// S-N curves for all zones of a scenario (Eurocode defaults for knee and
/// cut-off positions).
std::vector<SNCurve> make_curves(const ScenarioConfig& config, Index zone_count);

/// Daily cumulative damages: one row per day, one column per monitored zone.
/// Entries are dimensionless Miner damages, zero for days without damaging
/// cycles.
struct DailyDamageMatrix {
  ArrayXX damages;                      // days x zones
  std::vector<std::string> zone_names;  // column labels
  std::vector<std::string> dates;       // row labels, ISO-8601, ascending

  Index days() const { return damages.rows(); }
  Index zones() const { return damages.cols(); }
  void validate() const;
};

/// Stress range of one cycle: safety_factor * young_modulus * epsilon, with
/// amplitude readings doubled first. Throws std::domain_error for negative
/// epsilon.
Scalar severity(const ScenarioConfig& config, Index zone, Scalar epsilon);

/// Miner damage accumulated by the given counted cycles of one zone on one
/// day (weights honoured, compensated summation). Empty input gives 0.
Scalar daily_damage(const ScenarioConfig& config, Index zone, const SNCurve& curve,
                    std::span<const CountedCycle> cycles);

/// Smallest 1-based step count at which the running damage sum reaches 1,
/// or empty if the sequence ends first ("no failure within horizon"). Steps
/// are whatever unit the sequence is expressed in (cycles or days).
template <std::ranges::input_range R>
std::optional<std::uint64_t> miner_ncf(R&& step_damages) {
  CompensatedSum accumulated;
  std::uint64_t step = 0;
  for (const Scalar damage : step_damages) {
    if (!(damage >= 0) || !std::isfinite(damage))
      throw std::domain_error("miner_ncf: step damages must be finite and >= 0");
    ++step;
    accumulated.add(damage);
    if (accumulated.value() >= 1.0) return step;
  }
  return std::nullopt;
}

/// Lifetime from a constant equivalent daily damage: 1/d_eq days, infinite
/// when no damage accrues. Throws std::domain_error for negative input.
Scalar extrapolated_lifetime_days(Scalar d_eq);

}  // namespace fatigue
