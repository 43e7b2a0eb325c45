#pragma once

#include <span>
#include <vector>

#include "fatigue/types.hpp"

namespace fatigue {

struct StrainSample {
  Scalar time;    // seconds (any strictly increasing clock)
  Scalar strain;  // dimensionless
};

/// Raw strain history of one sensor, e.g. one day of measurements.
struct StrainSignal {
  std::vector<StrainSample> samples;
  void validate() const;  // strictly increasing timestamps, finite strains
};

/// One counted loading cycle: peak-to-valley strain range and its count
/// weight, 1.0 for a closed cycle and 0.5 for a residual half cycle.
struct CountedCycle {
  Scalar magnitude;
  Scalar weight;
};

/// Local extrema of the sampled history, endpoints included and consecutive
/// equal samples collapsed. The result alternates maxima and minima; a
/// constant signal reduces to its single value. Throws on empty input.
std::vector<Scalar> extract_turning_points(std::span<const Scalar> strains);

/// Rainflow count per ASTM E1049-85 (three-point rules on the turning-point
/// sequence). Closed cycles carry weight 1, the unmatched residue is flushed
/// as half cycles of weight 0.5 once the signal ends. Counted cycles with
/// magnitude below `magnitude_floor` are dropped; the default keeps
/// everything.
std::vector<CountedCycle> rainflow_count(std::span<const Scalar> strains,
                                         Scalar magnitude_floor = 0.0);
std::vector<CountedCycle> rainflow_count(const StrainSignal& signal,
                                         Scalar magnitude_floor = 0.0);

}  // namespace fatigue
