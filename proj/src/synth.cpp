#include "fatigue/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "fatigue/prng.hpp"
#include "fatigue/textio.hpp"

namespace fatigue {

SeverityLaw SeverityLaw::constant(Scalar s) {
  SeverityLaw law;
  law.kind = Kind::constant;
  law.value = s;
  return law;
}

SeverityLaw SeverityLaw::lognormal(Scalar log_mean, Scalar log_sigma) {
  SeverityLaw law;
  law.kind = Kind::lognormal;
  law.log_mean = log_mean;
  law.log_sigma = log_sigma;
  return law;
}

SeverityLaw SeverityLaw::mixture(Scalar s1, Scalar p1, Scalar s2) {
  SeverityLaw law;
  law.kind = Kind::mixture;
  law.s1 = s1;
  law.p1 = p1;
  law.s2 = s2;
  return law;
}

void SeverityLaw::validate() const {
  switch (kind) {
    case Kind::constant:
      if (!(value >= 0) || !std::isfinite(value))
        throw std::invalid_argument("SeverityLaw: constant severity must be finite and >= 0");
      return;
    case Kind::lognormal:
      if (!std::isfinite(log_mean) || !(log_sigma > 0) || !std::isfinite(log_sigma))
        throw std::invalid_argument("SeverityLaw: lognormal needs finite log_mean, log_sigma > 0");
      return;
    case Kind::mixture:
      if (!(s1 >= 0) || !(s2 >= 0) || !std::isfinite(s1) || !std::isfinite(s2))
        throw std::invalid_argument("SeverityLaw: mixture severities must be finite and >= 0");
      if (!(p1 >= 0) || !(p1 <= 1))
        throw std::invalid_argument("SeverityLaw: mixture probability must lie in [0, 1]");
      return;
  }
  throw std::invalid_argument("SeverityLaw: unknown kind");
}

CyclesPerDay CyclesPerDay::constant(Scalar count) { return {Kind::constant, count}; }
CyclesPerDay CyclesPerDay::poisson(Scalar mean) { return {Kind::poisson, mean}; }

void CyclesPerDay::validate() const {
  if (!(value >= 0) || !std::isfinite(value))
    throw std::invalid_argument("CyclesPerDay: value must be finite and >= 0");
  if (kind == Kind::constant && value != std::floor(value))
    throw std::invalid_argument("CyclesPerDay: constant count must be an integer");
}

const SeverityLaw& SynthSpec::law_for_zone(Index k) const {
  return severity_law.size() == 1 ? severity_law.front()
                                  : severity_law[static_cast<std::size_t>(k)];
}

std::vector<std::string> SynthSpec::resolved_zone_names() const {
  if (!zone_names.empty()) return zone_names;
  const auto& roster = default_sensor_roster();
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(zones));
  for (Index k = 0; k < zones; ++k) {
    if (static_cast<std::size_t>(k) < roster.size())
      names.push_back(roster[static_cast<std::size_t>(k)]);
    else
      names.push_back("Z" + std::to_string(k + 1));
  }
  return names;
}

void SynthSpec::validate() const {
  if (zones < 1) throw std::invalid_argument("SynthSpec: zones must be >= 1");
  if (days < 1 || days > 2'000'000)
    throw std::invalid_argument("SynthSpec: days must lie in [1, 2e6]");
  cycles_per_day.validate();
  if (severity_law.empty() ||
      (severity_law.size() != 1 && severity_law.size() != static_cast<std::size_t>(zones)))
    throw std::invalid_argument("SynthSpec: severity_law must hold 1 or `zones` entries");
  for (const SeverityLaw& law : severity_law) law.validate();
  if (!(correlation >= 0) || !(correlation <= 1))
    throw std::invalid_argument("SynthSpec: correlation must lie in [0, 1]");
  if (!(shock_sigma >= 0) || !std::isfinite(shock_sigma))
    throw std::invalid_argument("SynthSpec: shock_sigma must be finite and >= 0");
  if (!(safety_factor > 0) || !(young_modulus_mpa > 0))
    throw std::invalid_argument("SynthSpec: conversion factors must be > 0");
  if (!zone_names.empty() && zone_names.size() != static_cast<std::size_t>(zones))
    throw std::invalid_argument("SynthSpec: zone_names must match the zone count");
  if (!parse_iso_date(start_date))
    throw std::invalid_argument("SynthSpec: start_date must be ISO-8601");
}

CycleDatabase generate(const SynthSpec& spec) {
  spec.validate();
  const auto start = *parse_iso_date(spec.start_date);
  const Scalar epsilon_scale = 1.0 / (spec.safety_factor * spec.young_modulus_mpa);

  CycleDatabase db;
  db.roster = spec.resolved_zone_names();
  for (Index day = 0; day < spec.days; ++day) {
    std::mt19937_64 rng = make_substream(spec.seed, static_cast<std::uint64_t>(day));
    const Scalar shock = std::exp(spec.correlation * spec.shock_sigma * normal01(rng));
    const std::string date = format_iso_date(start + std::chrono::days{day});
    for (Index k = 0; k < spec.zones; ++k) {
      std::uint64_t count = 0;
      if (spec.cycles_per_day.kind == CyclesPerDay::Kind::constant)
        count = static_cast<std::uint64_t>(spec.cycles_per_day.value);
      else
        count = poisson_count(rng, spec.cycles_per_day.value);
      const SeverityLaw& law = spec.law_for_zone(k);
      for (std::uint64_t cycle = 0; cycle < count; ++cycle) {
        Scalar base = 0;
        switch (law.kind) {
          case SeverityLaw::Kind::constant:
            base = law.value;
            break;
          case SeverityLaw::Kind::lognormal:
            base = std::exp(law.log_mean + law.log_sigma * normal01(rng));
            break;
          case SeverityLaw::Kind::mixture:
            base = uniform01(rng) < law.p1 ? law.s1 : law.s2;
            break;
        }
        db.records.push_back({date, k, base * shock * epsilon_scale});
      }
    }
  }
  return db;
}

namespace {

/// E[damage_per_cycle(exp(mu + sigma X))] for standard normal X: composite
/// Simpson on [-12, 12], split at the knee and cut-off boundaries where the
/// damage law changes branch. Each segment integrates its branch's power law
/// directly, so the jump to zero damage at the cut-off cannot leak into the
/// neighbouring segment through endpoint rounding.
Scalar expected_damage_lognormal(const SNCurve& curve, Scalar mu, Scalar sigma) {
  constexpr Scalar x_limit = 12.0;
  constexpr Index intervals = 1 << 13;  // per segment, even
  const Scalar inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi_v<Scalar>);
  const Scalar knee = curve.knee_severity();
  const auto low_branch = [&](Scalar s) {
    return std::pow(s / knee, curve.slope_low) / curve.n_knee;
  };
  const auto high_branch = [&](Scalar s) {
    return std::pow(s / curve.detail_category, curve.slope_high) / curve.n_ref;
  };
  const Scalar x_cut = (std::log(curve.cutoff_severity()) - mu) / sigma;
  const Scalar x_knee = (std::log(knee) - mu) / sigma;
  const auto simpson = [&](Scalar a, Scalar b, const auto& branch_damage) -> Scalar {
    a = std::max(a, -x_limit);
    b = std::min(b, x_limit);
    if (!(b > a)) return 0.0;
    const auto integrand = [&](Scalar x) {
      return inv_sqrt_2pi * std::exp(-0.5 * x * x) * branch_damage(std::exp(mu + sigma * x));
    };
    const Scalar h = (b - a) / static_cast<Scalar>(intervals);
    CompensatedSum sum;
    sum.add(integrand(a));
    sum.add(integrand(b));
    for (Index i = 1; i < intervals; ++i)
      sum.add((i % 2 == 1 ? 4.0 : 2.0) * integrand(a + h * static_cast<Scalar>(i)));
    return sum.value() * h / 3.0;
  };
  return simpson(x_cut, x_knee, low_branch) + simpson(x_knee, x_limit, high_branch);
}

Scalar expected_damage_atom(const SNCurve& curve, Scalar severity_value, Scalar sigma_shock) {
  if (severity_value == 0) return 0.0;
  if (sigma_shock == 0) return damage_per_cycle(curve, severity_value);
  return expected_damage_lognormal(curve, std::log(severity_value), sigma_shock);
}

}  // namespace

ArrayX analytic_d_eq(const SynthSpec& spec, const ScenarioConfig& config) {
  spec.validate();
  const std::vector<SNCurve> curves = make_curves(config, spec.zones);
  const Scalar sigma_shock = spec.correlation * spec.shock_sigma;
  const Scalar mean_cycles = spec.cycles_per_day.mean();

  ArrayX d_eq(spec.zones);
  for (Index k = 0; k < spec.zones; ++k) {
    // severity seen by the analysis: the drawn severity rescaled by the
    // analysis-side strain-to-stress conversion over the generation-side one
    const Scalar amplitude_factor =
        config.epsilon_interpretation == EpsilonInterpretation::amplitude ? 2.0 : 1.0;
    const Scalar scale = config.safety_factor(k) * config.young_modulus_mpa(k) *
                         amplitude_factor / (spec.safety_factor * spec.young_modulus_mpa);
    const SNCurve& curve = curves[static_cast<std::size_t>(k)];
    const SeverityLaw& law = spec.law_for_zone(k);
    Scalar per_cycle = 0;
    switch (law.kind) {
      case SeverityLaw::Kind::constant:
        per_cycle = expected_damage_atom(curve, law.value * scale, sigma_shock);
        break;
      case SeverityLaw::Kind::mixture:
        per_cycle = law.p1 * expected_damage_atom(curve, law.s1 * scale, sigma_shock) +
                    (1.0 - law.p1) * expected_damage_atom(curve, law.s2 * scale, sigma_shock);
        break;
      case SeverityLaw::Kind::lognormal:
        per_cycle = expected_damage_lognormal(
            curve, law.log_mean + std::log(scale),
            std::sqrt(law.log_sigma * law.log_sigma + sigma_shock * sigma_shock));
        break;
    }
    d_eq[k] = mean_cycles * per_cycle;
  }
  return d_eq;
}

namespace {

SeverityLaw law_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1)
    throw std::invalid_argument("synth spec: severity law must be a single-key object");
  if (j.contains("constant")) return SeverityLaw::constant(j.at("constant").get<Scalar>());
  if (j.contains("lognormal")) {
    const auto& params = j.at("lognormal");
    return SeverityLaw::lognormal(params.at("log_mean").get<Scalar>(),
                                  params.at("log_sigma").get<Scalar>());
  }
  if (j.contains("mixture")) {
    const auto& params = j.at("mixture");
    return SeverityLaw::mixture(params.at("s1").get<Scalar>(), params.at("p1").get<Scalar>(),
                                params.at("s2").get<Scalar>());
  }
  throw std::invalid_argument("synth spec: severity law must be constant, lognormal or mixture");
}

}  // namespace

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("synth spec: " + std::string(e.what()));
  }
  SynthSpec spec;
  try {
    spec.zones = j.at("zones").get<Index>();
    spec.days = j.at("days").get<Index>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("cycles_per_day")) {
      const auto& c = j.at("cycles_per_day");
      if (c.contains("constant"))
        spec.cycles_per_day = CyclesPerDay::constant(c.at("constant").get<Scalar>());
      else if (c.contains("poisson"))
        spec.cycles_per_day = CyclesPerDay::poisson(c.at("poisson").get<Scalar>());
      else
        throw std::invalid_argument("synth spec: cycles_per_day must be constant or poisson");
    }
    const auto& laws = j.at("severity_law");
    if (laws.is_array())
      for (const auto& entry : laws) spec.severity_law.push_back(law_from_json(entry));
    else
      spec.severity_law.push_back(law_from_json(laws));
    if (j.contains("correlation")) spec.correlation = j.at("correlation").get<Scalar>();
    if (j.contains("shock_sigma")) spec.shock_sigma = j.at("shock_sigma").get<Scalar>();
    if (j.contains("safety_factor")) spec.safety_factor = j.at("safety_factor").get<Scalar>();
    if (j.contains("young_modulus_mpa"))
      spec.young_modulus_mpa = j.at("young_modulus_mpa").get<Scalar>();
    if (j.contains("zone_names"))
      spec.zone_names = j.at("zone_names").get<std::vector<std::string>>();
    if (j.contains("start_date")) spec.start_date = j.at("start_date").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("synth spec: " + std::string(e.what()));
  }
  spec.validate();
  return spec;
}

}  // namespace fatigue
