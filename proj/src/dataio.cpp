#include "fatigue/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "fatigue/textio.hpp"

namespace fatigue {

namespace {

constexpr Index max_span_days = 2'000'000;  // guards against typo'd years

std::string join_issues(const std::vector<IngestIssue>& issues) {
  std::ostringstream out;
  out << "ingestion failed with " << issues.size() << " issue(s)";
  const std::size_t shown = std::min<std::size_t>(issues.size(), 20);
  for (std::size_t i = 0; i < shown; ++i)
    out << "\n  line " << issues[i].line << ": " << issues[i].message;
  if (shown < issues.size()) out << "\n  ... (" << issues.size() - shown << " more)";
  return out.str();
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

IngestError::IngestError(std::vector<IngestIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

const std::vector<std::string>& default_sensor_roster() {
  static const std::vector<std::string> roster = {
      "OS1-Back-Right", "OS2-Front-Right", "OS3-Back-Left",  "OS4-Front-Left",
      "OS5-Support-Right", "OS6-Support-Left", "OS7-Front-Mid", "OS8-Back-Mid"};
  return roster;
}

std::vector<std::string> CycleDatabase::distinct_dates() const {
  std::vector<std::string> dates;
  dates.reserve(records.size());
  for (const CycleRecord& record : records) dates.push_back(record.date);
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());
  return dates;
}

CycleDatabase apply_duplication(CycleDatabase db, std::span<const DuplicationRule> rules) {
  for (const DuplicationRule& rule : rules) {
    const auto find_zone = [&](const std::string& name) -> Index {
      const auto it = std::find(db.roster.begin(), db.roster.end(), name);
      if (it == db.roster.end())
        throw std::invalid_argument("duplication rule names unknown sensor '" + name + "'");
      return static_cast<Index>(it - db.roster.begin());
    };
    const Index target = find_zone(rule.target);
    const Index source = find_zone(rule.source);
    if (target == source)
      throw std::invalid_argument("duplication rule '" + rule.target + "=" + rule.source +
                                  "' copies a sensor onto itself");
    std::erase_if(db.records, [&](const CycleRecord& r) { return r.zone == target; });
    std::vector<CycleRecord> copies;
    for (const CycleRecord& record : db.records)
      if (record.zone == source) copies.push_back({record.date, target, record.epsilon});
    db.records.insert(db.records.end(), copies.begin(), copies.end());
  }
  return db;
}

CycleDatabase load_database(const std::filesystem::path& path, std::vector<std::string> roster,
                            std::span<const DuplicationRule> duplication) {
  if (roster.empty()) throw std::invalid_argument("load_database: empty sensor roster");
  std::ifstream in = open_for_read(path);

  std::unordered_map<std::string_view, Index> zone_of;
  for (Index k = 0; k < static_cast<Index>(roster.size()); ++k)
    zone_of.emplace(roster[static_cast<std::size_t>(k)], k);

  CycleDatabase db;
  db.roster = roster;
  std::vector<IngestIssue> issues;
  std::string line;
  std::size_t line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    const auto fields = split_csv(line);
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 3 && fields[0] == "date" && fields[1] == "sensor" &&
          fields[2] == "epsilon")
        continue;
      issues.push_back({line_number, "expected header 'date,sensor,epsilon'"});
      continue;
    }
    if (fields.size() != 3) {
      issues.push_back({line_number, "expected 3 fields, got " + std::to_string(fields.size())});
      continue;
    }
    const auto date = parse_iso_date(fields[0]);
    if (!date) {
      issues.push_back({line_number, "unparseable date '" + std::string(fields[0]) + "'"});
      continue;
    }
    const auto zone_it = zone_of.find(fields[1]);
    if (zone_it == zone_of.end()) {
      issues.push_back({line_number, "unknown sensor '" + std::string(fields[1]) + "'"});
      continue;
    }
    const auto epsilon = parse_double(fields[2]);
    if (!epsilon || !std::isfinite(*epsilon)) {
      issues.push_back({line_number, "unparseable epsilon '" + std::string(fields[2]) + "'"});
      continue;
    }
    if (*epsilon < 0) {
      issues.push_back({line_number, "negative epsilon " + std::string(fields[2])});
      continue;
    }
    db.records.push_back({format_iso_date(*date), zone_it->second, *epsilon});
  }
  if (!issues.empty()) throw IngestError(std::move(issues));
  if (db.records.empty()) throw IngestError({{line_number, "no records"}});
  return apply_duplication(std::move(db), duplication);
}

void save_database(const CycleDatabase& db, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << "date,sensor,epsilon\n";
  for (const CycleRecord& record : db.records)
    out << record.date << ',' << db.roster[static_cast<std::size_t>(record.zone)] << ','
        << format_double(record.epsilon) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DailyDamageMatrix build_damage_matrix(const CycleDatabase& db, const ScenarioConfig& config,
                                      std::span<const SNCurve> curves,
                                      const std::optional<DaySpan>& declared_span) {
  const Index zones = static_cast<Index>(db.roster.size());
  config.validate(zones);
  if (static_cast<Index>(curves.size()) != zones)
    throw std::invalid_argument("build_damage_matrix: one S-N curve per zone required");

  std::vector<std::string> dates;
  if (declared_span) {
    const auto first = parse_iso_date(declared_span->first);
    const auto last = parse_iso_date(declared_span->last);
    if (!first || !last)
      throw std::invalid_argument("build_damage_matrix: declared span dates must be ISO-8601");
    if (*last < *first)
      throw std::invalid_argument("build_damage_matrix: declared span ends before it starts");
    const auto span_days = (*last - *first).count() + 1;
    if (span_days > max_span_days)
      throw std::invalid_argument("build_damage_matrix: declared span too large");
    dates.reserve(static_cast<std::size_t>(span_days));
    for (auto day = *first; day <= *last; day += std::chrono::days{1})
      dates.push_back(format_iso_date(day));
  } else {
    dates = db.distinct_dates();
  }
  if (dates.empty()) throw std::invalid_argument("build_damage_matrix: no days to populate");

  std::unordered_map<std::string_view, Index> row_of;
  for (Index i = 0; i < static_cast<Index>(dates.size()); ++i)
    row_of.emplace(dates[static_cast<std::size_t>(i)], i);

  DailyDamageMatrix matrix;
  matrix.zone_names = db.roster;
  matrix.dates = dates;
  matrix.damages = ArrayXX::Zero(static_cast<Index>(dates.size()), zones);

  // Per-cell contributions are sorted before compensated accumulation so the
  // matrix depends only on the multiset of records, not on file order.
  struct Contribution {
    Index row;
    Index zone;
    Scalar damage;
    bool operator<(const Contribution& other) const {
      if (row != other.row) return row < other.row;
      if (zone != other.zone) return zone < other.zone;
      return damage < other.damage;
    }
  };
  std::vector<Contribution> contributions;
  contributions.reserve(db.records.size());
  for (const CycleRecord& record : db.records) {
    const auto row_it = row_of.find(record.date);
    if (row_it == row_of.end())
      throw std::invalid_argument("build_damage_matrix: record date " + record.date +
                                  " outside the declared span");
    const Index k = record.zone;
    const Scalar damage =
        damage_per_cycle(curves[static_cast<std::size_t>(k)], severity(config, k, record.epsilon));
    contributions.push_back({row_it->second, k, damage});
  }
  std::sort(contributions.begin(), contributions.end());
  for (std::size_t start = 0; start < contributions.size();) {
    std::size_t end = start;
    CompensatedSum cell;
    while (end < contributions.size() && contributions[end].row == contributions[start].row &&
           contributions[end].zone == contributions[start].zone) {
      cell.add(contributions[end].damage);
      ++end;
    }
    matrix.damages(contributions[start].row, contributions[start].zone) = cell.value();
    start = end;
  }
  return matrix;
}

DamageStatistics damage_statistics(const DailyDamageMatrix& matrix, Index bins) {
  matrix.validate();
  if (matrix.days() < 2)
    throw std::invalid_argument("damage_statistics: need at least 2 days");
  if (bins < 1) throw std::invalid_argument("damage_statistics: need at least 1 bin");

  const Index days = matrix.days();
  const Index zones = matrix.zones();

  DamageStatistics stats;
  stats.zero_day_fraction_pct.resize(zones);
  stats.histograms.resize(static_cast<std::size_t>(zones));
  for (Index k = 0; k < zones; ++k) {
    DamageHistogram& histogram = stats.histograms[static_cast<std::size_t>(k)];
    Index zero_days = 0;
    Scalar largest = 0;
    for (Index i = 0; i < days; ++i) {
      const Scalar v = matrix.damages(i, k);
      if (v == 0)
        ++zero_days;
      else
        largest = std::max(largest, v);
    }
    histogram.zero_pct = static_cast<Scalar>(zero_days) * 100.0 / static_cast<Scalar>(days);
    stats.zero_day_fraction_pct[k] = histogram.zero_pct;
    if (largest > 0) {
      histogram.upper = largest;
      ArrayX counts = ArrayX::Zero(bins);
      for (Index i = 0; i < days; ++i) {
        const Scalar v = matrix.damages(i, k);
        if (v == 0) continue;
        const Index bin = std::min<Index>(bins - 1, static_cast<Index>(v / largest *
                                                                       static_cast<Scalar>(bins)));
        counts[bin] += 1;
      }
      histogram.bin_pct = counts * 100.0 / static_cast<Scalar>(days);
    }
  }

  // Pearson correlation over day rows; denominators built as a single
  // product under one square root so an exactly duplicated pair of columns
  // comes out at exactly 1.
  ArrayX mean(zones);
  for (Index k = 0; k < zones; ++k) {
    CompensatedSum sum;
    for (Index i = 0; i < days; ++i) sum.add(matrix.damages(i, k));
    mean[k] = sum.value() / static_cast<Scalar>(days);
  }
  MatrixX cross = MatrixX::Zero(zones, zones);
  for (Index a = 0; a < zones; ++a) {
    for (Index b = a; b < zones; ++b) {
      CompensatedSum sum;
      for (Index i = 0; i < days; ++i)
        sum.add((matrix.damages(i, a) - mean[a]) * (matrix.damages(i, b) - mean[b]));
      cross(a, b) = sum.value();
      cross(b, a) = sum.value();
    }
  }
  stats.correlation = MatrixX::Constant(zones, zones, std::numeric_limits<Scalar>::quiet_NaN());
  for (Index a = 0; a < zones; ++a) {
    if (cross(a, a) <= 0) continue;  // constant column: correlation undefined
    for (Index b = a; b < zones; ++b) {
      if (cross(b, b) <= 0) continue;
      const Scalar r = std::clamp(cross(a, b) / std::sqrt(cross(a, a) * cross(b, b)), -1.0, 1.0);
      stats.correlation(a, b) = r;
      stats.correlation(b, a) = r;
    }
  }
  return stats;
}

void write_damage_matrix_csv(const DailyDamageMatrix& matrix, const std::filesystem::path& path) {
  matrix.validate();
  std::ofstream out = open_for_write(path);
  out << "date";
  for (const std::string& name : matrix.zone_names) out << ',' << name;
  out << '\n';
  for (Index i = 0; i < matrix.days(); ++i) {
    out << matrix.dates[static_cast<std::size_t>(i)];
    for (Index k = 0; k < matrix.zones(); ++k) out << ',' << format_double(matrix.damages(i, k));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DailyDamageMatrix read_damage_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::string line;
  std::size_t line_number = 0;
  std::vector<IngestIssue> issues;

  DailyDamageMatrix matrix;
  std::vector<std::string> dates;
  std::vector<Scalar> values;
  Index zones = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto fields = split_csv(line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (line_number == 1) {
      if (fields.size() < 2 || fields[0] != "date") {
        issues.push_back({line_number, "expected header 'date,<zone>,...'"});
        break;
      }
      zones = static_cast<Index>(fields.size()) - 1;
      for (std::size_t k = 1; k < fields.size(); ++k)
        matrix.zone_names.emplace_back(fields[k]);
      continue;
    }
    if (static_cast<Index>(fields.size()) != zones + 1) {
      issues.push_back({line_number, "expected " + std::to_string(zones + 1) + " fields"});
      continue;
    }
    const auto date = parse_iso_date(fields[0]);
    if (!date) {
      issues.push_back({line_number, "unparseable date '" + std::string(fields[0]) + "'"});
      continue;
    }
    bool row_ok = true;
    std::vector<Scalar> row(static_cast<std::size_t>(zones));
    for (Index k = 0; k < zones; ++k) {
      const auto v = parse_double(fields[static_cast<std::size_t>(k) + 1]);
      if (!v || !std::isfinite(*v) || *v < 0) {
        issues.push_back({line_number, "invalid damage value '" +
                                           std::string(fields[static_cast<std::size_t>(k) + 1]) +
                                           "'"});
        row_ok = false;
        break;
      }
      row[static_cast<std::size_t>(k)] = *v;
    }
    if (!row_ok) continue;
    dates.push_back(format_iso_date(*date));
    values.insert(values.end(), row.begin(), row.end());
  }
  if (!issues.empty()) throw IngestError(std::move(issues));
  if (dates.empty()) throw IngestError({{line_number, "no damage rows"}});

  matrix.dates = std::move(dates);
  matrix.damages.resize(static_cast<Index>(matrix.dates.size()), zones);
  for (Index i = 0; i < matrix.damages.rows(); ++i)
    for (Index k = 0; k < zones; ++k)
      matrix.damages(i, k) = values[static_cast<std::size_t>(i * zones + k)];
  matrix.validate();
  return matrix;
}

namespace {

std::optional<Scalar> parse_timestamp_seconds(std::string_view text) {
  if (const auto plain = parse_double(text)) return plain;  // numeric seconds
  if (text.size() < 19 || (text[10] != 'T' && text[10] != ' ')) return std::nullopt;
  const auto date = parse_iso_date(text.substr(0, 10));
  if (!date) return std::nullopt;
  if (text[13] != ':' || text[16] != ':') return std::nullopt;
  int hours = 0, minutes = 0;
  const auto parse_int = [](std::string_view part, int& out) {
    const auto result = std::from_chars(part.data(), part.data() + part.size(), out);
    return result.ec == std::errc{} && result.ptr == part.data() + part.size();
  };
  if (!parse_int(text.substr(11, 2), hours) || !parse_int(text.substr(14, 2), minutes))
    return std::nullopt;
  const auto seconds = parse_double(text.substr(17));
  if (!seconds || hours < 0 || hours > 23 || minutes < 0 || minutes > 59 || *seconds < 0 ||
      *seconds >= 60)
    return std::nullopt;
  const Scalar day_seconds =
      static_cast<Scalar>(date->time_since_epoch().count()) * 86400.0;
  return day_seconds + hours * 3600.0 + minutes * 60.0 + *seconds;
}

}  // namespace

StrainSignal load_strain_signal(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  StrainSignal signal;
  std::vector<IngestIssue> issues;
  std::string line;
  std::size_t line_number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_number;
    const auto fields = split_csv(line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (fields.size() == 2 && fields[0] == "timestamp" && fields[1] == "strain") continue;
      issues.push_back({line_number, "expected header 'timestamp,strain'"});
      continue;
    }
    if (fields.size() != 2) {
      issues.push_back({line_number, "expected 2 fields, got " + std::to_string(fields.size())});
      continue;
    }
    const auto time = parse_timestamp_seconds(fields[0]);
    if (!time) {
      issues.push_back({line_number, "unparseable timestamp '" + std::string(fields[0]) + "'"});
      continue;
    }
    const auto strain = parse_double(fields[1]);
    if (!strain || !std::isfinite(*strain)) {
      issues.push_back({line_number, "unparseable strain '" + std::string(fields[1]) + "'"});
      continue;
    }
    if (!signal.samples.empty() && !(*time > signal.samples.back().time)) {
      issues.push_back({line_number, "timestamps must be strictly increasing"});
      continue;
    }
    signal.samples.push_back({*time, *strain});
  }
  if (!issues.empty()) throw IngestError(std::move(issues));
  if (signal.samples.empty()) throw IngestError({{line_number, "no samples"}});
  return signal;
}

}  // namespace fatigue
