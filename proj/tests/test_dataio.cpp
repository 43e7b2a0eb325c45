#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "fatigue/dataio.hpp"
#include "fatigue/textio.hpp"

using namespace fatigue;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& content) {
    path = std::filesystem::temp_directory_path() / ("fatigue_test_" + name);
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

ScenarioConfig config36() {
  ScenarioConfig config;
  config.detail_category_mpa = 36.0;
  return config;
}

const Scalar anchor_eps = 36.0 / 210.0e3;  // strain whose severity is the detail category

}  // namespace

TEST_SUITE("dataio") {

TEST_CASE("load, duplicate a silent sensor, and report itemised issues") {
  const std::string good =
      "date,sensor,epsilon\n"
      "2021-03-01,OS1-Back-Right,0.0005\n"
      "2021-03-01,OS3-Back-Left,0.0002\n"
      "2021-03-02,OS1-Back-Right,0.0004\n";

  SUBCASE("duplication fills the silent sensor with its twin's records") {
    TempFile file("dup.csv", good);
    const DuplicationRule rule{"OS2-Front-Right", "OS1-Back-Right"};
    const CycleDatabase db = load_database(file.path, default_sensor_roster(), {&rule, 1});
    const auto curves = make_curves(config36(), 8);
    const auto matrix = build_damage_matrix(db, config36(), curves);
    CHECK((matrix.damages.col(0) == matrix.damages.col(1)).all());
    CHECK(matrix.damages.col(0).sum() > 0);
  }

  SUBCASE("applying the duplication twice changes nothing") {
    TempFile file("dup2.csv", good);
    const DuplicationRule rule{"OS2-Front-Right", "OS1-Back-Right"};
    CycleDatabase once = load_database(file.path, default_sensor_roster(), {&rule, 1});
    CycleDatabase twice = apply_duplication(once, {&rule, 1});
    const auto curves = make_curves(config36(), 8);
    const auto matrix_once = build_damage_matrix(once, config36(), curves);
    const auto matrix_twice = build_damage_matrix(twice, config36(), curves);
    CHECK((matrix_once.damages == matrix_twice.damages).all());
  }

  SUBCASE("bad lines are itemised with their line numbers") {
    TempFile file("bad.csv",
                  "date,sensor,epsilon\n"
                  "2021-03-01,OS1-Back-Right,0.0005\n"
                  "2021-03-99,OS1-Back-Right,0.0005\n"
                  "2021-03-02,OS9-Nowhere,0.0005\n"
                  "2021-03-03,OS1-Back-Right,-0.1\n"
                  "2021-03-04,OS1-Back-Right,abc\n");
    try {
      load_database(file.path);
      FAIL("expected IngestError");
    } catch (const IngestError& error) {
      REQUIRE(error.issues().size() == 4);
      CHECK(error.issues()[0].line == 3);
      CHECK(error.issues()[1].line == 4);
      CHECK(error.issues()[1].message.find("OS9-Nowhere") != std::string::npos);
      CHECK(error.issues()[2].line == 5);
      CHECK(error.issues()[2].message.find("negative") != std::string::npos);
      CHECK(error.issues()[3].line == 6);
    }
  }

  SUBCASE("empty database is an error") {
    TempFile file("empty.csv", "date,sensor,epsilon\n");
    CHECK_THROWS_AS(load_database(file.path), IngestError);
  }

  SUBCASE("wrong header is an error") {
    TempFile file("header.csv", "day,sensor,eps\n2021-03-01,OS1-Back-Right,0.0005\n");
    CHECK_THROWS_AS(load_database(file.path), IngestError);
  }

  SUBCASE("missing file names the path") {
    try {
      load_database("/nonexistent/db.csv");
      FAIL("expected error");
    } catch (const std::runtime_error& error) {
      CHECK(std::string(error.what()).find("/nonexistent/db.csv") != std::string::npos);
    }
  }
}

TEST_CASE("duplicate records are kept: equal cycles on one day are legitimate") {
  TempFile file("multi.csv",
                "date,sensor,epsilon\n"
                "2021-03-01,OS1-Back-Right,0.0005\n"
                "2021-03-01,OS1-Back-Right,0.0005\n");
  const CycleDatabase db = load_database(file.path);
  CHECK(db.records.size() == 2);
}

TEST_CASE("save and reload round-trips the database") {
  CycleDatabase db;
  db.roster = {"A", "B"};
  db.records = {{"2020-01-01", 0, 1.25e-4}, {"2020-01-01", 1, 3.0e-4}, {"2020-01-02", 0, 0.0}};
  const auto path = std::filesystem::temp_directory_path() / "fatigue_test_roundtrip.csv";
  save_database(db, path);
  const CycleDatabase reloaded = load_database(path, db.roster);
  std::filesystem::remove(path);
  REQUIRE(reloaded.records.size() == db.records.size());
  for (std::size_t i = 0; i < db.records.size(); ++i) {
    CHECK(reloaded.records[i].date == db.records[i].date);
    CHECK(reloaded.records[i].zone == db.records[i].zone);
    CHECK(reloaded.records[i].epsilon == db.records[i].epsilon);
  }
}

TEST_CASE("damage matrix: anchor record fills exactly one cell") {
  CycleDatabase db;
  db.roster = default_sensor_roster();
  db.records = {{"2021-03-01", 0, anchor_eps}};
  const auto curves = make_curves(config36(), 8);
  const auto matrix = build_damage_matrix(db, config36(), curves);
  CHECK(matrix.days() == 1);
  CHECK(matrix.zones() == 8);
  CHECK(matrix.damages(0, 0) == doctest::Approx(5e-7).epsilon(1e-9));
  CHECK(matrix.damages.sum() == doctest::Approx(5e-7).epsilon(1e-9));
}

TEST_CASE("damage matrix: below-cutoff records leave the matrix zero") {
  CycleDatabase db;
  db.roster = {"A"};
  const Scalar tiny = 0.5 * SNCurve{}.cutoff_severity() / 210.0e3;
  for (int i = 0; i < 10; ++i) db.records.push_back({"2021-03-01", 0, tiny});
  const auto curves = make_curves(config36(), 1);
  const auto matrix = build_damage_matrix(db, config36(), curves);
  CHECK((matrix.damages == 0.0).all());
}

TEST_CASE("damage matrix: same-day records add and input order is irrelevant") {
  CycleDatabase db;
  db.roster = {"A", "B"};
  db.records = {{"2021-03-02", 0, anchor_eps},
                {"2021-03-01", 0, anchor_eps},
                {"2021-03-01", 0, 2 * anchor_eps},
                {"2021-03-01", 1, anchor_eps}};
  const auto curves = make_curves(config36(), 2);
  const auto matrix = build_damage_matrix(db, config36(), curves);
  CHECK(matrix.dates == std::vector<std::string>{"2021-03-01", "2021-03-02"});
  CHECK(matrix.damages(0, 0) ==
        doctest::Approx(5e-7 + damage_per_cycle(curves[0], 72.0)).epsilon(1e-9));

  CycleDatabase shuffled = db;
  std::reverse(shuffled.records.begin(), shuffled.records.end());
  const auto matrix2 = build_damage_matrix(shuffled, config36(), curves);
  CHECK((matrix.damages == matrix2.damages).all());
  CHECK(matrix.dates == matrix2.dates);
}

TEST_CASE("declared span counts silent days as zero-damage days") {
  CycleDatabase db;
  db.roster = {"A"};
  db.records = {{"2021-03-02", 0, anchor_eps}};
  const auto curves = make_curves(config36(), 1);
  const DaySpan span{"2021-03-01", "2021-03-05"};
  const auto matrix = build_damage_matrix(db, config36(), curves, span);
  CHECK(matrix.days() == 5);
  CHECK(matrix.dates.front() == "2021-03-01");
  CHECK(matrix.dates.back() == "2021-03-05");
  CHECK(matrix.damages.col(0).sum() == matrix.damages(1, 0));

  const DaySpan bad{"2021-03-03", "2021-03-05"};
  CHECK_THROWS_AS(build_damage_matrix(db, config36(), curves, bad), std::invalid_argument);
  const DaySpan reversed{"2021-03-05", "2021-03-01"};
  CHECK_THROWS_AS(build_damage_matrix(db, config36(), curves, reversed), std::invalid_argument);
}

TEST_CASE("statistics: duplicated columns correlate at exactly one") {
  DailyDamageMatrix matrix;
  matrix.zone_names = {"A", "B", "C"};
  matrix.dates = {"d1", "d2", "d3", "d4"};
  matrix.damages.resize(4, 3);
  matrix.damages.col(0) << 1e-4, 0.0, 3e-4, 2e-4;
  matrix.damages.col(1) << 1e-4, 0.0, 3e-4, 2e-4;  // exact copy
  matrix.damages.col(2) << 5e-5, 5e-5, 5e-5, 5e-5;  // constant: undefined correlation
  const DamageStatistics stats = damage_statistics(matrix);
  CHECK(stats.correlation(0, 1) == 1.0);
  CHECK(stats.correlation(1, 0) == 1.0);
  CHECK(stats.correlation(0, 0) == 1.0);
  CHECK(std::isnan(stats.correlation(2, 2)));
  CHECK(std::isnan(stats.correlation(0, 2)));
}

TEST_CASE("statistics: zero-day fraction is exact and histograms close to 100%") {
  DailyDamageMatrix matrix;
  matrix.zone_names = {"A"};
  matrix.damages.resize(100, 1);
  matrix.damages.setZero();
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<Scalar> value(1e-6, 9e-4);
  for (Index i = 84; i < 100; ++i) matrix.damages(i, 0) = value(rng);
  for (Index i = 0; i < 100; ++i) matrix.dates.push_back("d" + std::to_string(i));
  const DamageStatistics stats = damage_statistics(matrix);
  CHECK(stats.zero_day_fraction_pct[0] == 84.0);
  const DamageHistogram& histogram = stats.histograms[0];
  CHECK(histogram.bin_pct.size() == 30);
  CHECK(histogram.zero_pct + histogram.bin_pct.sum() == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(histogram.upper == matrix.damages.col(0).maxCoeff());
}

TEST_CASE("statistics: independent columns decorrelate as the sample grows") {
  DailyDamageMatrix matrix;
  matrix.zone_names = {"A", "B", "C"};
  const Index days = 100000;
  matrix.damages.resize(days, 3);
  std::mt19937_64 rng(56);
  std::uniform_real_distribution<Scalar> value(0.0, 1e-3);
  for (Index i = 0; i < days; ++i) {
    for (Index k = 0; k < 3; ++k) matrix.damages(i, k) = value(rng);
    matrix.dates.push_back("d" + std::to_string(i));
  }
  const DamageStatistics stats = damage_statistics(matrix);
  for (Index a = 0; a < 3; ++a) {
    CHECK(stats.correlation(a, a) == 1.0);
    for (Index b = 0; b < 3; ++b) {
      CHECK(stats.correlation(a, b) == stats.correlation(b, a));
      if (a != b) CHECK(std::abs(stats.correlation(a, b)) < 0.02);
    }
  }
}

TEST_CASE("statistics preconditions") {
  DailyDamageMatrix matrix;
  matrix.zone_names = {"A"};
  matrix.dates = {"d1"};
  matrix.damages = ArrayXX::Zero(1, 1);
  CHECK_THROWS_AS(damage_statistics(matrix), std::invalid_argument);
}

TEST_CASE("damage matrix CSV round trip is exact") {
  DailyDamageMatrix matrix;
  matrix.zone_names = {"OS1-Back-Right", "OS2-Front-Right"};
  matrix.dates = {"2020-01-01", "2020-01-02", "2020-01-03"};
  matrix.damages.resize(3, 2);
  matrix.damages << 1.234567890123e-7, 0.0, 5e-7, 2.5e-7, 0.0, 9.999999999e-5;
  const auto path = std::filesystem::temp_directory_path() / "fatigue_test_matrix.csv";
  write_damage_matrix_csv(matrix, path);
  const DailyDamageMatrix reloaded = read_damage_matrix_csv(path);
  std::filesystem::remove(path);
  CHECK(reloaded.zone_names == matrix.zone_names);
  CHECK(reloaded.dates == matrix.dates);
  CHECK((reloaded.damages == matrix.damages).all());
}

TEST_CASE("strain signal CSV accepts ISO date-times and numeric seconds") {
  TempFile file("signal.csv",
                "timestamp,strain\n"
                "2021-03-01T00:00:00,0.0\n"
                "2021-03-01T00:00:01.5,0.001\n"
                "2021-03-01 00:00:03,-0.001\n");
  const StrainSignal signal = load_strain_signal(file.path);
  REQUIRE(signal.samples.size() == 3);
  CHECK(signal.samples[1].time - signal.samples[0].time == doctest::Approx(1.5));
  CHECK(signal.samples[2].strain == -0.001);

  TempFile numeric("signal_seconds.csv", "timestamp,strain\n0,0.0\n0.5,1.0\n1.25,-1.0\n");
  CHECK(load_strain_signal(numeric.path).samples.size() == 3);

  TempFile broken("signal_bad.csv",
                  "timestamp,strain\n"
                  "2021-03-01T00:00:02,0.0\n"
                  "2021-03-01T00:00:01,0.1\n"
                  "not-a-time,0.2\n");
  try {
    load_strain_signal(broken.path);
    FAIL("expected IngestError");
  } catch (const IngestError& error) {
    REQUIRE(error.issues().size() == 2);
    CHECK(error.issues()[0].line == 3);
    CHECK(error.issues()[1].line == 4);
  }
}

}  // TEST_SUITE
