// Command-line front end: ingest cycle databases, accumulate Miner damage,
// produce survival curves, lifetime reports, statistics and synthetic data.
// Outputs are plot-ready CSV/JSON; a fixed invocation writes byte-identical
// files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fatigue/dataio.hpp"
#include "fatigue/reliability.hpp"
#include "fatigue/synth.hpp"
#include "fatigue/textio.hpp"

namespace {

using nlohmann::ordered_json;
using namespace fatigue;

ordered_json json_number(Scalar value) {
  if (std::isinf(value) && value > 0) return nullptr;  // infinite lifetime
  return value;
}

/// Two significant figures for human-readable lifetime tables: plain digits
/// in a comfortable range, scientific notation outside it.
std::string format_sig2(Scalar value) {
  if (std::isinf(value)) return "inf";
  if (value == 0) return "0";
  int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
  const Scalar scale = std::pow(10.0, exponent - 1);
  const Scalar rounded = std::round(value / scale) * scale;
  exponent = static_cast<int>(std::floor(std::log10(std::abs(rounded))));
  char buffer[48];
  if (exponent >= -2 && exponent < 5)
    std::snprintf(buffer, sizeof buffer, "%.*f", std::max(0, 1 - exponent), rounded);
  else
    std::snprintf(buffer, sizeof buffer, "%.1e", rounded);
  return buffer;
}

ArrayX parse_comma_list(const std::string& text, const std::string& flag) {
  std::vector<Scalar> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto value = parse_double(item);
    if (!value) throw CLI::ValidationError(flag, "cannot parse number '" + item + "'");
    values.push_back(*value);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  ArrayX array(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) array[static_cast<Index>(i)] = values[i];
  return array;
}

PerZone per_zone_from_flag(const std::string& text, const std::string& flag) {
  const ArrayX values = parse_comma_list(text, flag);
  return values.size() == 1 ? PerZone(values[0]) : PerZone(values);
}

// Flags shared by every analysis subcommand.
struct ScenarioFlags {
  std::string detail_category = "36";
  std::string safety_factor = "1";
  std::string young_modulus = "210e3";
  Scalar p = 0.05;
  Scalar weibull_modulus = 1.5;
  std::string epsilon_interpretation = "range";

  ScenarioConfig to_config() const {
    ScenarioConfig config;
    config.detail_category_mpa = per_zone_from_flag(detail_category, "--detail-category");
    config.safety_factor = per_zone_from_flag(safety_factor, "--safety-factor");
    config.young_modulus_mpa = per_zone_from_flag(young_modulus, "--young-modulus");
    config.p = p;
    config.weibull_modulus = weibull_modulus;
    config.epsilon_interpretation = epsilon_interpretation == "amplitude"
                                        ? EpsilonInterpretation::amplitude
                                        : EpsilonInterpretation::range;
    return config;
  }
  WeibullModel to_model() const { return {p, weibull_modulus}; }
};

void add_scenario_flags(CLI::App* sub, ScenarioFlags& flags) {
  sub->add_option("--detail-category", flags.detail_category,
                  "S-N detail category in MPa (one value or comma list per zone)");
  sub->add_option("--safety-factor", flags.safety_factor,
                  "safety factor C_s (one value or comma list per zone)");
  sub->add_option("--young-modulus", flags.young_modulus,
                  "Young modulus in MPa (one value or comma list per zone)");
  sub->add_option("--p", flags.p, "reference probability of the S-N curve");
  sub->add_option("--weibull-modulus", flags.weibull_modulus, "Weibull modulus m_W");
  sub->add_option("--epsilon-interpretation", flags.epsilon_interpretation,
                  "cycle magnitude reading: range or amplitude")
      ->check(CLI::IsMember({"range", "amplitude"}));
}

// Flags shared by subcommands that ingest the cycle database.
struct IngestFlags {
  std::string db_path;
  std::string roster_list;  // comma-separated, empty = default roster
  std::vector<std::string> duplicates;
  std::string span_first, span_last;

  std::vector<std::string> roster() const {
    if (roster_list.empty()) return default_sensor_roster();
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start <= roster_list.size()) {
      const std::size_t comma = roster_list.find(',', start);
      names.push_back(roster_list.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return names;
  }
  std::vector<DuplicationRule> duplication() const {
    std::vector<DuplicationRule> rules;
    for (const std::string& entry : duplicates) {
      const std::size_t eq = entry.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
        throw CLI::ValidationError("--duplicate", "expected <target>=<source>, got '" + entry + "'");
      rules.push_back({entry.substr(0, eq), entry.substr(eq + 1)});
    }
    return rules;
  }
  std::optional<DaySpan> span() const {
    if (span_first.empty() && span_last.empty()) return std::nullopt;
    if (span_first.empty() || span_last.empty())
      throw CLI::ValidationError("--span-first/--span-last", "both span bounds are required");
    return DaySpan{span_first, span_last};
  }
  CycleDatabase load() const {
    const auto rules = duplication();
    return load_database(db_path, roster(), rules);
  }
};

void add_ingest_flags(CLI::App* sub, IngestFlags& flags) {
  sub->add_option("--db", flags.db_path, "cycle database CSV (date,sensor,epsilon)")->required();
  sub->add_option("--roster", flags.roster_list,
                  "comma-separated sensor roster (default: the eight crane sensors)");
  sub->add_option("--duplicate", flags.duplicates,
                  "copy one sensor's records onto another, <target>=<source>; repeatable");
  sub->add_option("--span-first", flags.span_first, "first day of the declared monitoring span");
  sub->add_option("--span-last", flags.span_last, "last day of the declared monitoring span");
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const ordered_json& value) {
  write_text_file(path, value.dump(2) + "\n");
}

// --config accepting CLI11's TOML/INI format (with [subcommand] sections) or
// the equivalent JSON: an object per subcommand keyed by long option names.
class JsonAwareConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::istream::int_type c;
    while ((c = input.peek()) != std::istream::traits_type::eof() &&
           (c == ' ' || c == '\n' || c == '\r' || c == '\t'))
      input.get();
    if (input.peek() != '{') return CLI::ConfigTOML::from_config(input);
    const nlohmann::json parsed = nlohmann::json::parse(input);
    std::vector<CLI::ConfigItem> items;
    std::vector<std::string> parents;
    flatten(parsed, parents, items);
    return items;
  }

 private:
  static void flatten(const nlohmann::json& node, std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : node.items()) {
      if (value.is_object()) {
        parents.push_back(key);
        flatten(value, parents, items);
        parents.pop_back();
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array())
        for (const auto& element : value)
          item.inputs.push_back(element.is_string() ? element.get<std::string>()
                                                    : element.dump());
      else
        item.inputs.push_back(value.is_string() ? value.get<std::string>() : value.dump());
      items.push_back(std::move(item));
    }
  }
};

// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& spec_path, const std::string& out_path,
                 const std::optional<std::uint64_t>& seed_override) {
  SynthSpec spec = load_synth_spec(spec_path);
  if (seed_override) spec.seed = *seed_override;
  const CycleDatabase db = generate(spec);
  save_database(db, out_path);
  std::cout << "wrote " << db.records.size() << " cycle records for " << spec.zones
            << " zones over " << spec.days << " days to " << out_path << "\n";
  return 0;
}

int cmd_damage(const IngestFlags& ingest, const ScenarioFlags& scenario,
               const std::string& out_path) {
  const CycleDatabase db = ingest.load();
  const ScenarioConfig config = scenario.to_config();
  const Index zones = static_cast<Index>(db.roster.size());
  const std::vector<SNCurve> curves = make_curves(config, zones);
  const DailyDamageMatrix matrix = build_damage_matrix(db, config, curves, ingest.span());
  write_damage_matrix_csv(matrix, out_path);

  const ArrayX d_eq = mean_daily_damage(matrix);
  std::printf("%-22s %14s %15s %16s\n", "zone", "d_eq[1/day]", "lifetime[days]",
              "lifetime[years]");
  for (Index k = 0; k < zones; ++k) {
    const Scalar lifetime = extrapolated_lifetime_days(d_eq[k]);
    std::printf("%-22s %14.6g %15.6g %16.6g\n",
                matrix.zone_names[static_cast<std::size_t>(k)].c_str(), d_eq[k], lifetime,
                lifetime / days_per_year);
  }
  std::cout << "wrote damage matrix (" << matrix.days() << " days x " << matrix.zones()
            << " zones) to " << out_path << "\n";
  return 0;
}

std::string survival_csv(const SurvivalCurve* det, const SurvivalCurve* mc,
                         const std::vector<std::string>& zone_names) {
  const SurvivalCurve& reference = det ? *det : *mc;
  const bool both = det && mc;
  std::string csv = "t_days";
  const auto append_headers = [&](const char* suffix) {
    for (const std::string& name : zone_names) csv += ",zone_" + name + suffix;
    csv += std::string(",structure") + suffix;
  };
  if (det) append_headers(both ? "_det" : "");
  if (mc) append_headers(both ? "_mc" : "");
  csv += '\n';
  for (Index i = 0; i < reference.times.size(); ++i) {
    csv += format_double(reference.times[i]);
    for (const SurvivalCurve* curve : {det, mc}) {
      if (!curve) continue;
      for (Index k = 0; k < curve->zone_survival.cols(); ++k)
        csv += ',' + format_double(curve->zone_survival(i, k));
      csv += ',' + format_double(curve->structure_survival[i]);
    }
    csv += '\n';
  }
  return csv;
}

int cmd_survival(const IngestFlags& ingest, const ScenarioFlags& scenario, bool from_matrix,
                 const std::string& matrix_path, const std::string& method, int mc_samples,
                 std::uint64_t seed, Index grid_points, Scalar t_min, Scalar t_max,
                 const std::string& out_path) {
  DailyDamageMatrix matrix;
  if (from_matrix) {
    matrix = read_damage_matrix_csv(matrix_path);
  } else {
    const CycleDatabase db = ingest.load();
    const ScenarioConfig config = scenario.to_config();
    const std::vector<SNCurve> curves = make_curves(config, static_cast<Index>(db.roster.size()));
    matrix = build_damage_matrix(db, config, curves, ingest.span());
  }
  const WeibullModel model = scenario.to_model();
  model.validate();
  const ArrayX d_eq = mean_daily_damage(matrix);

  if (!(t_max > 0)) t_max = default_time_horizon_days(d_eq);
  const ArrayX times = geometric_time_grid(t_min, std::max(t_min, t_max), grid_points);

  std::optional<SurvivalCurve> det, mc;
  if (method == "det-eq" || method == "both") det = survival_curve_det(model, d_eq, times);
  if (method == "mc" || method == "both")
    mc = survival_curve_mc(model, matrix, times, mc_samples, seed);
  write_text_file(out_path, survival_csv(det ? &*det : nullptr, mc ? &*mc : nullptr,
                                         matrix.zone_names));
  if (det && mc) {
    const Scalar max_gap =
        (det->structure_survival - mc->structure_survival).abs().maxCoeff();
    std::cout << "max |det-eq - mc| structure gap: " << format_double(max_gap) << "\n";
  }

  // quantile markers of order p, per zone and for the structure
  ordered_json quantiles;
  quantiles["p"] = model.p;
  quantiles["unit"] = "days";
  ordered_json zone_quantiles;
  for (Index k = 0; k < matrix.zones(); ++k)
    zone_quantiles[matrix.zone_names[static_cast<std::size_t>(k)]] =
        json_number(extrapolated_lifetime_days(d_eq[k]));
  quantiles["zone_quantiles_days"] = zone_quantiles;
  quantiles["structure_quantile_days"] = json_number(structure_quantile_days(model, d_eq));
  std::filesystem::path quantile_path(out_path);
  quantile_path.replace_extension(".quantiles.json");
  write_json_file(quantile_path, quantiles);

  std::cout << "wrote survival curves (" << times.size() << " time points, method " << method
            << ") to " << out_path << " and quantiles to " << quantile_path.string() << "\n";
  return 0;
}

struct ScenarioCell {
  Scalar detail_category;
  Scalar safety_factor;
  WeakestLinkReport report;
};

int cmd_report(const IngestFlags& ingest, const ScenarioFlags& scenario,
               const std::string& scenario_grid, const std::string& out_prefix) {
  const CycleDatabase db = ingest.load();
  const Index zones = static_cast<Index>(db.roster.size());
  const WeibullModel model = scenario.to_model();

  std::vector<std::pair<Scalar, Scalar>> grid;
  for (std::string_view item : split_csv(scenario_grid)) {
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos)
      throw CLI::ValidationError("--scenarios", "expected <detail_category>:<safety_factor> pairs");
    const auto dc = parse_double(item.substr(0, colon));
    const auto cs = parse_double(item.substr(colon + 1));
    if (!dc || !cs)
      throw CLI::ValidationError("--scenarios", "cannot parse '" + std::string(item) + "'");
    grid.emplace_back(*dc, *cs);
  }
  if (grid.empty()) throw CLI::ValidationError("--scenarios", "scenario grid is empty");

  std::vector<ScenarioCell> cells;
  for (const auto& [detail_category, safety_factor] : grid) {
    ScenarioFlags local = scenario;
    local.detail_category = format_double(detail_category);
    local.safety_factor = format_double(safety_factor);
    const ScenarioConfig config = local.to_config();
    const std::vector<SNCurve> curves = make_curves(config, zones);
    const DailyDamageMatrix matrix = build_damage_matrix(db, config, curves, ingest.span());
    const ArrayX d_eq = mean_daily_damage(matrix);
    cells.push_back({detail_category, safety_factor, weakest_link_report(model, d_eq)});
  }

  // machine output: full precision
  const PerZone young_modulus = per_zone_from_flag(scenario.young_modulus, "--young-modulus");
  ordered_json young_json;
  if (young_modulus.shared()) {
    young_json = young_modulus.values()[0];
  } else {
    young_json = ordered_json::array();
    for (Index k = 0; k < young_modulus.size(); ++k) young_json.push_back(young_modulus.values()[k]);
  }
  ordered_json machine = ordered_json::array();
  for (const ScenarioCell& cell : cells) {
    ordered_json entry;
    entry["scenario"] = {{"detail_category_mpa", cell.detail_category},
                         {"safety_factor", cell.safety_factor},
                         {"young_modulus_mpa", young_json},
                         {"p", model.p},
                         {"weibull_modulus", model.modulus},
                         {"epsilon_interpretation", scenario.epsilon_interpretation}};
    entry["unit"] = "years";
    ordered_json zone_lifetimes;
    for (Index k = 0; k < zones; ++k)
      zone_lifetimes[db.roster[static_cast<std::size_t>(k)]] =
          json_number(cell.report.zone_lifetime_days[k] / days_per_year);
    entry["zone_lifetimes_years"] = zone_lifetimes;
    entry["minimal_ncf_years"] = json_number(cell.report.minimal_ncf_days / days_per_year);
    entry["structure_quantile_years"] =
        json_number(cell.report.structure_quantile_days / days_per_year);
    entry["overestimation_factor"] = json_number(cell.report.overestimation_factor);
    machine.push_back(entry);
  }
  const std::filesystem::path json_path(out_prefix + ".json");
  write_json_file(json_path, machine);

  // human table: zones down, scenarios across, two significant figures
  std::string csv = "lifetime_years";
  for (const ScenarioCell& cell : cells)
    csv += ",dsigma_c=" + format_double(cell.detail_category) +
           "MPa C_s=" + format_double(cell.safety_factor);
  csv += '\n';
  for (Index k = 0; k < zones; ++k) {
    csv += db.roster[static_cast<std::size_t>(k)];
    for (const ScenarioCell& cell : cells)
      csv += ',' + format_sig2(cell.report.zone_lifetime_days[k] / days_per_year);
    csv += '\n';
  }
  csv += "Minimal NCF";
  for (const ScenarioCell& cell : cells)
    csv += ',' + format_sig2(cell.report.minimal_ncf_days / days_per_year);
  csv += '\n';
  csv += "Lifetime quantile";
  for (const ScenarioCell& cell : cells)
    csv += ',' + format_sig2(cell.report.structure_quantile_days / days_per_year);
  csv += '\n';
  const std::filesystem::path csv_path(out_prefix + ".csv");
  write_text_file(csv_path, csv);

  std::cout << "wrote lifetime report for " << cells.size() << " scenario(s) to "
            << json_path.string() << " and " << csv_path.string() << "\n";
  return 0;
}

int cmd_stats(const IngestFlags& ingest, const ScenarioFlags& scenario, Index bins,
              const std::string& out_path) {
  const CycleDatabase db = ingest.load();
  const ScenarioConfig config = scenario.to_config();
  const std::vector<SNCurve> curves = make_curves(config, static_cast<Index>(db.roster.size()));
  const DailyDamageMatrix matrix = build_damage_matrix(db, config, curves, ingest.span());
  const DamageStatistics stats = damage_statistics(matrix, bins);

  ordered_json j;
  j["zones"] = matrix.zone_names;
  j["days"] = matrix.days();
  j["unit"] = "percent of days";
  ordered_json histograms;
  for (Index k = 0; k < matrix.zones(); ++k) {
    const DamageHistogram& histogram = stats.histograms[static_cast<std::size_t>(k)];
    ordered_json h;
    h["zero_pct"] = histogram.zero_pct;
    h["upper"] = histogram.upper;
    ordered_json bins_json = ordered_json::array();
    for (Index b = 0; b < histogram.bin_pct.size(); ++b) bins_json.push_back(histogram.bin_pct[b]);
    h["bin_pct"] = bins_json;
    histograms[matrix.zone_names[static_cast<std::size_t>(k)]] = h;
  }
  j["histograms"] = histograms;
  ordered_json zero_fraction;
  for (Index k = 0; k < matrix.zones(); ++k)
    zero_fraction[matrix.zone_names[static_cast<std::size_t>(k)]] =
        stats.zero_day_fraction_pct[k];
  j["zero_day_fraction"] = zero_fraction;
  ordered_json correlation = ordered_json::array();
  for (Index a = 0; a < matrix.zones(); ++a) {
    ordered_json row = ordered_json::array();
    for (Index b = 0; b < matrix.zones(); ++b) {
      const Scalar r = stats.correlation(a, b);
      row.push_back(std::isnan(r) ? ordered_json(nullptr) : ordered_json(r));
    }
    correlation.push_back(row);
  }
  j["correlation"] = correlation;
  write_json_file(out_path, j);

  const std::filesystem::path out(out_path);
  const std::filesystem::path histogram_path =
      out.parent_path() / (out.stem().string() + "_histograms.csv");
  std::string histogram_csv = "zone,bin_index,bin_low,bin_high,percent\n";
  for (Index k = 0; k < matrix.zones(); ++k) {
    const DamageHistogram& histogram = stats.histograms[static_cast<std::size_t>(k)];
    const std::string& name = matrix.zone_names[static_cast<std::size_t>(k)];
    histogram_csv += name + ",-1,0,0," + format_double(histogram.zero_pct) + '\n';
    const Index n_bins = histogram.bin_pct.size();
    for (Index b = 0; b < n_bins; ++b) {
      const Scalar width = histogram.upper / static_cast<Scalar>(n_bins);
      histogram_csv += name + ',' + std::to_string(b) + ',' +
                       format_double(width * static_cast<Scalar>(b)) + ',' +
                       format_double(width * static_cast<Scalar>(b + 1)) + ',' +
                       format_double(histogram.bin_pct[b]) + '\n';
    }
  }
  write_text_file(histogram_path, histogram_csv);

  const std::filesystem::path correlation_path =
      out.parent_path() / (out.stem().string() + "_correlation.csv");
  std::string correlation_csv = "zone";
  for (const std::string& name : matrix.zone_names) correlation_csv += ',' + name;
  correlation_csv += '\n';
  for (Index a = 0; a < matrix.zones(); ++a) {
    correlation_csv += matrix.zone_names[static_cast<std::size_t>(a)];
    for (Index b = 0; b < matrix.zones(); ++b) {
      const Scalar r = stats.correlation(a, b);
      correlation_csv += ',';
      if (!std::isnan(r)) correlation_csv += format_double(r);
    }
    correlation_csv += '\n';
  }
  write_text_file(correlation_path, correlation_csv);

  std::cout << "wrote statistics to " << out_path << ", " << histogram_path.string() << ", "
            << correlation_path.string() << "\n";
  return 0;
}

int cmd_rainflow(const std::string& signal_path, Scalar magnitude_floor,
                 const std::string& out_path) {
  const StrainSignal signal = load_strain_signal(signal_path);
  const std::vector<CountedCycle> cycles = rainflow_count(signal, magnitude_floor);
  std::string csv = "magnitude,weight\n";
  Scalar total_weight = 0;
  for (const CountedCycle& cycle : cycles) {
    csv += format_double(cycle.magnitude) + ',' + format_double(cycle.weight) + '\n';
    total_weight += cycle.weight;
  }
  write_text_file(out_path, csv);
  std::cout << "counted " << cycles.size() << " cycle(s), total weight "
            << format_double(total_weight) << ", from " << signal.samples.size()
            << " samples; wrote " << out_path << "\n";
  return 0;
}

ordered_json error_json(const std::string& type, const std::string& message,
                        const std::vector<IngestIssue>* issues = nullptr) {
  ordered_json j;
  j["error"]["type"] = type;
  j["error"]["message"] = message;
  if (issues) {
    ordered_json list = ordered_json::array();
    for (const IngestIssue& issue : *issues)
      list.push_back({{"line", issue.line}, {"message", issue.message}});
    j["error"]["issues"] = list;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fatigue-life reliability toolkit: Miner damage accumulation, Weibull survival "
               "curves and lifetime quantiles from per-cycle strain databases"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "defaults from a TOML file ([subcommand] sections) or the JSON equivalent; "
                 "command-line flags win");
  app.config_formatter(std::make_shared<JsonAwareConfig>());

  // simulate
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic cycle database");
  std::string simulate_spec, simulate_out;
  std::optional<std::uint64_t> simulate_seed;
  simulate->add_option("--spec", simulate_spec, "synthetic spec JSON")->required();
  simulate->add_option("--out", simulate_out, "output database CSV")->required();
  simulate->add_option("--seed", simulate_seed, "override the seed in the spec file");

  // damage
  auto* damage = app.add_subcommand("damage", "build the daily damage matrix");
  IngestFlags damage_ingest;
  ScenarioFlags damage_scenario;
  std::string damage_out;
  add_ingest_flags(damage, damage_ingest);
  add_scenario_flags(damage, damage_scenario);
  damage->add_option("--out", damage_out, "output damage matrix CSV")->required();

  // survival
  auto* survival = app.add_subcommand("survival", "per-zone and structure survival curves");
  IngestFlags survival_ingest;
  ScenarioFlags survival_scenario;
  std::string survival_matrix, survival_method = "det-eq", survival_out;
  int survival_samples = 100;
  std::uint64_t survival_seed = 0;
  Index survival_points = 200;
  Scalar survival_t_min = 1.0, survival_t_max = 0.0;
  survival->add_option("--db", survival_ingest.db_path,
                       "cycle database CSV (date,sensor,epsilon)");
  survival->add_option("--roster", survival_ingest.roster_list, "comma-separated sensor roster");
  survival->add_option("--duplicate", survival_ingest.duplicates,
                       "copy one sensor's records onto another, <target>=<source>");
  survival->add_option("--span-first", survival_ingest.span_first, "first day of declared span");
  survival->add_option("--span-last", survival_ingest.span_last, "last day of declared span");
  add_scenario_flags(survival, survival_scenario);
  survival->add_option("--matrix", survival_matrix, "precomputed damage matrix CSV");
  survival->add_option("--method", survival_method, "det-eq, mc, or both")
      ->check(CLI::IsMember({"det-eq", "mc", "both"}));
  survival->add_option("--mc-samples", survival_samples, "bootstrap replicates M");
  survival->add_option("--seed", survival_seed, "bootstrap seed");
  survival->add_option("--grid-points", survival_points, "time grid size");
  survival->add_option("--t-min", survival_t_min, "first grid time in days");
  survival->add_option("--t-max", survival_t_max,
                       "last grid time in days (default: 10x the longest zone lifetime)");
  survival->add_option("--out", survival_out, "output survival CSV")->required();

  // report
  auto* report = app.add_subcommand("report", "lifetime table across scenarios");
  IngestFlags report_ingest;
  ScenarioFlags report_scenario;
  std::string report_scenarios = "36:3,80:3,36:1,80:1";
  std::string report_out;
  add_ingest_flags(report, report_ingest);
  add_scenario_flags(report, report_scenario);
  report->add_option("--scenarios", report_scenarios,
                     "comma list of <detail_category>:<safety_factor> pairs");
  report->add_option("--out", report_out, "output prefix (<prefix>.json and <prefix>.csv)")
      ->required();

  // stats
  auto* stats = app.add_subcommand("stats", "daily damage statistics");
  IngestFlags stats_ingest;
  ScenarioFlags stats_scenario;
  Index stats_bins = 30;
  std::string stats_out;
  add_ingest_flags(stats, stats_ingest);
  add_scenario_flags(stats, stats_scenario);
  stats->add_option("--bins", stats_bins, "histogram bin count");
  stats->add_option("--out", stats_out, "output JSON (CSV tables derived from its name)")
      ->required();

  // rainflow
  auto* rainflow = app.add_subcommand("rainflow", "count cycles in a raw strain signal");
  std::string rainflow_signal, rainflow_out;
  Scalar rainflow_floor = 0.0;
  rainflow->add_option("--signal", rainflow_signal, "strain signal CSV (timestamp,strain)")
      ->required();
  rainflow->add_option("--magnitude-floor", rainflow_floor,
                       "drop counted cycles below this magnitude");
  rainflow->add_option("--out", rainflow_out, "output cycle CSV (magnitude,weight)")->required();

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return cmd_simulate(simulate_spec, simulate_out, simulate_seed);
    if (damage->parsed()) return cmd_damage(damage_ingest, damage_scenario, damage_out);
    if (survival->parsed()) {
      const bool from_matrix = !survival_matrix.empty();
      if (from_matrix == !survival_ingest.db_path.empty())
        throw CLI::ValidationError("--db/--matrix", "exactly one input source is required");
      return cmd_survival(survival_ingest, survival_scenario, from_matrix, survival_matrix,
                          survival_method, survival_samples, survival_seed, survival_points,
                          survival_t_min, survival_t_max, survival_out);
    }
    if (report->parsed())
      return cmd_report(report_ingest, report_scenario, report_scenarios, report_out);
    if (stats->parsed()) return cmd_stats(stats_ingest, stats_scenario, stats_bins, stats_out);
    if (rainflow->parsed()) return cmd_rainflow(rainflow_signal, rainflow_floor, rainflow_out);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("usage", e.what()).dump(2) << "\n";
    const int code = e.get_exit_code();
    return code == 0 ? 1 : code;
  } catch (const IngestError& e) {
    std::cerr << error_json("ingest", e.what(), &e.issues()).dump(2) << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << error_json("invalid_argument", e.what()).dump(2) << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << error_json("domain", e.what()).dump(2) << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << error_json("io", e.what()).dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_json("internal", e.what()).dump(2) << "\n";
    return 1;
  }
}
