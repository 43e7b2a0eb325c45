#pragma once

#include <charconv>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fatigue/types.hpp"

namespace fatigue {

/// Shortest round-trip decimal form of a double (std::to_chars), so emitted
/// files are byte-stable across runs.
std::string format_double(Scalar value);

/// Strict float parse of the whole field; empty on failure.
std::optional<Scalar> parse_double(std::string_view text);

/// Split one CSV line on commas (no quoting; the formats used here never
/// embed commas). Fields keep surrounding whitespace trimmed.
std::vector<std::string_view> split_csv(std::string_view line);

/// Strict ISO-8601 calendar date (YYYY-MM-DD); empty on malformed input.
std::optional<std::chrono::sys_days> parse_iso_date(std::string_view text);
std::string format_iso_date(std::chrono::sys_days day);

}  // namespace fatigue
