#pragma once

// Instance document: a single UTF-8 JSON object with one section per domain
// type and a mandatory "schema_version". Times of day are "HH:MM" with an
// optional "+N" day suffix, dates are YYYY-MM-DD, rest durations are hours.

#include "roster/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace roster {

nlohmann::json instance_to_json(const RosterInstance& inst);
/// Throws DocumentError on malformed input or a schema-version mismatch.
RosterInstance instance_from_json(const nlohmann::json& doc);

std::string encode_instance(const RosterInstance& inst);
RosterInstance decode_instance(std::string_view text);

RosterInstance load_instance_file(const std::filesystem::path& path);
void save_instance_file(const std::filesystem::path& path, const RosterInstance& inst);

nlohmann::json preference_to_json(const PreferenceRecord& pref);
PreferenceRecord preference_from_json(const nlohmann::json& j);

PreferenceLevel parse_preference_level(std::string_view s);
nlohmann::json weekdays_to_json(const WeekdaySet& days);
WeekdaySet weekdays_from_json(const nlohmann::json& j);

/// Reads a whole file or, for "-", standard input.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace roster
