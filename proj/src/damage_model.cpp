#include "fatigue/damage_model.hpp"

#include <limits>

namespace fatigue {

namespace {

void check_per_zone(const PerZone& parameter, Index zone_count, const char* name,
                    Scalar lower_bound) {
  if (!parameter.shared() && parameter.size() != zone_count)
    throw std::invalid_argument(std::string("ScenarioConfig: ") + name + " must hold 1 or " +
                                std::to_string(zone_count) + " values");
  for (Index i = 0; i < parameter.size(); ++i) {
    const Scalar v = parameter.values()[i];
    if (!std::isfinite(v) || !(v >= lower_bound))
      throw std::invalid_argument(std::string("ScenarioConfig: ") + name + " must be >= " +
                                  std::to_string(lower_bound));
  }
}

}  // namespace

void ScenarioConfig::validate(Index zone_count) const {
  if (zone_count < 1) throw std::invalid_argument("ScenarioConfig: zone count must be >= 1");
  check_per_zone(detail_category_mpa, zone_count, "detail_category_mpa",
                 std::numeric_limits<Scalar>::min());
  check_per_zone(safety_factor, zone_count, "safety_factor", 1.0);
  check_per_zone(young_modulus_mpa, zone_count, "young_modulus_mpa",
                 std::numeric_limits<Scalar>::min());
  if (!(p > 0) || !(p < 1))
    throw std::invalid_argument("ScenarioConfig: p must lie in (0, 1)");
  if (!(weibull_modulus > 0) || !std::isfinite(weibull_modulus))
    throw std::invalid_argument("ScenarioConfig: weibull_modulus must be > 0");
}

std::vector<SNCurve> make_curves(const ScenarioConfig& config, Index zone_count) {
  config.validate(zone_count);
  std::vector<SNCurve> curves;
  curves.reserve(static_cast<std::size_t>(zone_count));
  for (Index k = 0; k < zone_count; ++k) {
    SNCurve curve;
    curve.detail_category = config.detail_category_mpa(k);
    curve.validate();
    curves.push_back(curve);
  }
  return curves;
}

void DailyDamageMatrix::validate() const {
  if (days() < 1 || zones() < 1)
    throw std::invalid_argument("DailyDamageMatrix: need at least one day and one zone");
  if (static_cast<Index>(zone_names.size()) != zones())
    throw std::invalid_argument("DailyDamageMatrix: zone_names size mismatch");
  if (static_cast<Index>(dates.size()) != days())
    throw std::invalid_argument("DailyDamageMatrix: dates size mismatch");
  if (!((damages >= 0).all() && damages.isFinite().all()))
    throw std::invalid_argument("DailyDamageMatrix: damages must be finite and >= 0");
}

Scalar severity(const ScenarioConfig& config, Index zone, Scalar epsilon) {
  if (!(epsilon >= 0)) throw std::domain_error("severity: cycle magnitude must be >= 0");
  const Scalar range =
      config.epsilon_interpretation == EpsilonInterpretation::amplitude ? 2.0 * epsilon : epsilon;
  // scaled innermost-first so that (C_s, eps) and (1, C_s*eps) agree exactly
  return config.young_modulus_mpa(zone) * (config.safety_factor(zone) * range);
}

Scalar daily_damage(const ScenarioConfig& config, Index zone, const SNCurve& curve,
                    std::span<const CountedCycle> cycles) {
  CompensatedSum accumulated;
  for (const CountedCycle& cycle : cycles)
    accumulated.add(cycle.weight * damage_per_cycle(curve, severity(config, zone, cycle.magnitude)));
  return accumulated.value();
}

Scalar extrapolated_lifetime_days(Scalar d_eq) {
  if (!(d_eq >= 0)) throw std::domain_error("extrapolated_lifetime_days: damage must be >= 0");
  if (d_eq == 0) return std::numeric_limits<Scalar>::infinity();
  return 1.0 / d_eq;
}

}  // namespace fatigue
