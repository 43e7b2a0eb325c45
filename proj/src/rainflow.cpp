#include "fatigue/rainflow.hpp"

#include <cmath>
#include <stdexcept>

namespace fatigue {

void StrainSignal::validate() const {
  if (samples.empty()) throw std::invalid_argument("StrainSignal: empty signal");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].strain))
      throw std::invalid_argument("StrainSignal: non-finite strain at sample " + std::to_string(i));
    if (i > 0 && !(samples[i].time > samples[i - 1].time))
      throw std::invalid_argument("StrainSignal: timestamps must be strictly increasing (sample " +
                                  std::to_string(i) + ")");
  }
}

std::vector<Scalar> extract_turning_points(std::span<const Scalar> strains) {
  if (strains.empty())
    throw std::invalid_argument("extract_turning_points: empty signal");
  std::vector<Scalar> turning;
  turning.reserve(strains.size());
  for (const Scalar value : strains) {
    if (!turning.empty() && value == turning.back()) continue;  // plateau collapse
    // drop the previous point while it is not an extremum of the path so far
    while (turning.size() >= 2) {
      const Scalar before = turning[turning.size() - 2];
      const Scalar last = turning.back();
      const bool was_rising = last > before;
      const bool is_rising = value > last;
      if (was_rising != is_rising) break;
      turning.pop_back();
    }
    turning.push_back(value);
  }
  return turning;
}

std::vector<CountedCycle> rainflow_count(std::span<const Scalar> strains, Scalar magnitude_floor) {
  const std::vector<Scalar> turning = extract_turning_points(strains);

  std::vector<CountedCycle> counted;
  std::vector<Scalar> open;  // turning points not yet consumed by a cycle
  open.reserve(turning.size());

  const auto emit = [&](Scalar magnitude, Scalar weight) {
    if (magnitude >= magnitude_floor) counted.push_back({magnitude, weight});
  };

  // Three-point rules: with the latest range X and the preceding range Y,
  // X >= Y closes Y. A range Y that still touches the history's first
  // remaining point cannot be enclosed from the left and counts as a half
  // cycle instead, dropping that first point.
  for (const Scalar value : turning) {
    open.push_back(value);
    while (open.size() >= 3) {
      const std::size_t n = open.size();
      const Scalar range_x = std::abs(open[n - 1] - open[n - 2]);
      const Scalar range_y = std::abs(open[n - 2] - open[n - 3]);
      if (range_x < range_y) break;
      if (n == 3) {
        emit(range_y, 0.5);
        open.erase(open.begin());
      } else {
        emit(range_y, 1.0);
        open.erase(open.end() - 3, open.end() - 1);
      }
    }
  }
  // signal exhausted: the residue's remaining ranges are half cycles
  for (std::size_t i = 1; i < open.size(); ++i)
    emit(std::abs(open[i] - open[i - 1]), 0.5);
  return counted;
}

std::vector<CountedCycle> rainflow_count(const StrainSignal& signal, Scalar magnitude_floor) {
  signal.validate();
  std::vector<Scalar> strains;
  strains.reserve(signal.samples.size());
  for (const StrainSample& sample : signal.samples) strains.push_back(sample.strain);
  return rainflow_count(std::span<const Scalar>(strains), magnitude_floor);
}

}  // namespace fatigue
