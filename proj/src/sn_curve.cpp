#include "fatigue/sn_curve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fatigue {

Scalar SNCurve::knee_severity() const {
  return detail_category * std::pow(n_ref / n_knee, 1.0 / slope_high);
}

Scalar SNCurve::cutoff_severity() const {
  return knee_severity() * std::pow(n_knee / n_cutoff, 1.0 / slope_low);
}

void SNCurve::validate() const {
  if (!(detail_category > 0) || !std::isfinite(detail_category))
    throw std::invalid_argument("SNCurve: detail_category must be a positive stress range");
  if (!(n_ref > 0) || !(n_knee > n_ref) || !(n_cutoff > n_knee))
    throw std::invalid_argument("SNCurve: cycle anchors must satisfy 0 < n_ref < n_knee < n_cutoff");
  if (!(slope_high > 0) || !(slope_low > 0))
    throw std::invalid_argument("SNCurve: slope exponents must be positive");
}

Scalar cycles_to_failure(const SNCurve& curve, Scalar severity) {
  if (!(severity >= 0))
    throw std::domain_error("cycles_to_failure: severity must be >= 0");
  const Scalar knee = curve.knee_severity();
  if (severity >= knee)
    return curve.n_ref * std::pow(curve.detail_category / severity, curve.slope_high);
  if (severity >= curve.cutoff_severity())
    return curve.n_knee * std::pow(knee / severity, curve.slope_low);
  return std::numeric_limits<Scalar>::infinity();
}

Scalar damage_per_cycle(const SNCurve& curve, Scalar severity) {
  const Scalar n = cycles_to_failure(curve, severity);
  return std::isinf(n) ? 0.0 : 1.0 / n;
}

std::optional<Scalar> severity_from_damage(const SNCurve& curve, Scalar damage) {
  if (!(damage > 0))
    throw std::domain_error("severity_from_damage: damage must be > 0");
  if (damage >= 1.0 / curve.n_knee)
    return curve.detail_category * std::pow(curve.n_ref * damage, 1.0 / curve.slope_high);
  // domain boundary taken from the forward map at the cut-off severity, so
  // the inverse accepts exactly the damages the curve can produce
  const Scalar knee = curve.knee_severity();
  const Scalar damage_at_cutoff =
      1.0 / (curve.n_knee * std::pow(knee / curve.cutoff_severity(), curve.slope_low));
  if (damage >= damage_at_cutoff)
    return knee * std::pow(curve.n_knee * damage, 1.0 / curve.slope_low);
  return std::nullopt;  // below cut-off, no finite equivalent stress range
}

}  // namespace fatigue
