#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatigue/damage_model.hpp"
#include "fatigue/types.hpp"

namespace fatigue {

/// One recorded loading cycle: day, monitored zone (index into the roster)
/// and dimensionless cycle magnitude. A day/zone pair may carry any number
/// of records, including repeats of the same magnitude.
struct CycleRecord {
  std::string date;  // ISO-8601
  Index zone = 0;
  Scalar epsilon = 0;
};

struct CycleDatabase {
  std::vector<std::string> roster;  // zone/sensor names, column order everywhere
  std::vector<CycleRecord> records;

  /// Distinct record dates in ascending order.
  std::vector<std::string> distinct_dates() const;
};

/// Default eight-sensor crane roster.
const std::vector<std::string>& default_sensor_roster();

/// Copy one sensor's records onto another, e.g. when a sensor never reported
/// and a symmetrically placed one stands in for it. Replaces any records the
/// target already has, so applying a rule twice equals applying it once.
struct DuplicationRule {
  std::string target;
  std::string source;
};
CycleDatabase apply_duplication(CycleDatabase db, std::span<const DuplicationRule> rules);

struct IngestIssue {
  std::size_t line = 0;  // 1-based line number in the input file
  std::string message;
};

/// Parse or validation failure with the itemised per-line issues attached.
class IngestError : public std::runtime_error {
 public:
  explicit IngestError(std::vector<IngestIssue> issues);
  const std::vector<IngestIssue>& issues() const { return issues_; }

 private:
  std::vector<IngestIssue> issues_;
};

/// Load a cycle database CSV (`date,sensor,epsilon` with a header line).
/// Collects every malformed line (unknown sensor, negative or malformed
/// epsilon, bad date) and throws one IngestError listing them all; an empty
/// database is also an error. Duplication rules are applied after parsing.
CycleDatabase load_database(const std::filesystem::path& path,
                            std::vector<std::string> roster = default_sensor_roster(),
                            std::span<const DuplicationRule> duplication = {});

void save_database(const CycleDatabase& db, const std::filesystem::path& path);

/// Declared monitoring period (inclusive ISO dates). Days inside the span
/// without any record still count as zero-damage days.
struct DaySpan {
  std::string first;
  std::string last;
};

/// Daily damage matrix from the cycle database: one row per day (observed
/// dates, or every calendar day of the declared span), one column per roster
/// entry, Miner damages accumulated per cell. Records are full cycles
/// (weight 1).
DailyDamageMatrix build_damage_matrix(const CycleDatabase& db, const ScenarioConfig& config,
                                      std::span<const SNCurve> curves,
                                      const std::optional<DaySpan>& declared_span = {});

/// Per-zone histogram of daily damages: days with exactly zero damage are
/// reported separately, positive damages fall into equal-width bins over
/// (0, upper]. Percentages (zero class plus bins) sum to 100.
struct DamageHistogram {
  Scalar zero_pct = 0;
  Scalar upper = 0;
  ArrayX bin_pct;  // empty when the zone never accrues damage
};

struct DamageStatistics {
  std::vector<DamageHistogram> histograms;
  ArrayX zero_day_fraction_pct;
  /// Pearson correlation of daily damages across zones; NaN marks entries
  /// undefined because a zone has zero variance.
  MatrixX correlation;
};

/// Requires at least two days. Throws std::invalid_argument otherwise.
DamageStatistics damage_statistics(const DailyDamageMatrix& matrix, Index bins = 30);

// -- damage matrix CSV (`date,<zone>,...` header) ---------------------------

void write_damage_matrix_csv(const DailyDamageMatrix& matrix, const std::filesystem::path& path);
DailyDamageMatrix read_damage_matrix_csv(const std::filesystem::path& path);

// -- raw strain signal CSV (`timestamp,strain` header) -----------------------

/// Timestamps are ISO-8601 date-times (T or space separator, optional
/// fractional seconds) or plain numeric seconds; they only need to increase.
StrainSignal load_strain_signal(const std::filesystem::path& path);

}  // namespace fatigue
