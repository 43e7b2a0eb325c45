#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fatigue/dataio.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

/// Distribution of the per-cycle stress range (MPa) of one zone.
struct SeverityLaw {
  enum class Kind { constant, lognormal, mixture };
  Kind kind = Kind::constant;
  Scalar value = 0;                    // constant
  Scalar log_mean = 0, log_sigma = 0;  // lognormal parameters of ln S
  Scalar s1 = 0, p1 = 0, s2 = 0;       // mixture: s1 with probability p1, else s2

  static SeverityLaw constant(Scalar s);
  static SeverityLaw lognormal(Scalar log_mean, Scalar log_sigma);
  static SeverityLaw mixture(Scalar s1, Scalar p1, Scalar s2);
  void validate() const;
};

/// Number of cycles recorded per zone per day.
struct CyclesPerDay {
  enum class Kind { constant, poisson };
  Kind kind = Kind::constant;
  Scalar value = 1;  // exact count, or Poisson mean

  static CyclesPerDay constant(Scalar count);
  static CyclesPerDay poisson(Scalar mean);
  Scalar mean() const { return value; }
  void validate() const;
};

/// Recipe for a synthetic cycle database with known ground truth. Days are
/// independent; zones within one day are coupled by a shared lognormal
/// shock: every severity drawn on day i is multiplied by
/// exp(correlation * shock_sigma * G_i) with one standard normal G_i per
/// day, so correlation 0 decouples the zones exactly and larger weights
/// couple them progressively. Severities are converted to stored strain
/// magnitudes through epsilon = S / (safety_factor * young_modulus).
struct SynthSpec {
  Index zones = 8;
  Index days = 912;
  CyclesPerDay cycles_per_day = CyclesPerDay::constant(1);
  std::vector<SeverityLaw> severity_law;  // one shared entry or one per zone
  Scalar correlation = 0;                 // common-shock weight in [0, 1]
  Scalar shock_sigma = 0.5;               // log-scale of the daily shock
  Scalar safety_factor = 1.0;
  Scalar young_modulus_mpa = 210.0e3;
  std::uint64_t seed = 0;
  std::vector<std::string> zone_names;    // optional, defaults derived
  std::string start_date = "2020-01-01";

  const SeverityLaw& law_for_zone(Index k) const;
  std::vector<std::string> resolved_zone_names() const;
  void validate() const;
};

/// Deterministic synthetic database: identical spec gives identical records.
CycleDatabase generate(const SynthSpec& spec);

/// Ground-truth expected daily damage per zone when the generated database
/// is analysed under `config`: mean cycles per day times the expected
/// per-cycle damage. Point laws without shock evaluate exactly; anything
/// lognormal (including shocked point laws) integrates the damage against
/// the normal density by high-resolution quadrature.
ArrayX analytic_d_eq(const SynthSpec& spec, const ScenarioConfig& config);

/// Read a spec from its JSON form (schema documented in the README).
SynthSpec load_synth_spec(const std::filesystem::path& path);

}  // namespace fatigue
