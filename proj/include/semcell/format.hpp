#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semcell {

// Shortest decimal that round-trips to the same double. Used by snapshots,
// traces and GeoJSON so goldens are platform-stable.
std::string fmt_double_shortest(double value);

// 6 significant digits, for the ranking CSV's div column.
std::string fmt_double_sig6(double value);

double parse_double(std::string_view text, const std::string& context);
std::int64_t parse_int64(std::string_view text, const std::string& context);

// ISO-8601 UTC timestamps at second resolution: YYYY-MM-DDTHH:MM:SS with an
// optional fractional part (ignored) and optional trailing 'Z'. Offsets
// other than UTC are rejected.
std::int64_t parse_iso8601_utc(std::string_view text, const std::string& context);
std::string format_iso8601_utc(std::int64_t epoch_seconds);

// Current wall-clock time in the same format (manifest timestamps).
std::string now_iso8601_utc();

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

// Returns the byte offset of the first invalid sequence, or nullopt if the
// input is well-formed UTF-8.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

// Minimal RFC-4180 CSV. Fields never span lines (item ids cannot contain
// newlines). Quoting is applied only when needed.
std::string csv_escape(std::string_view field);
std::vector<std::string> csv_split_line(std::string_view line, const std::string& context);

std::string_view trim(std::string_view s);

} // namespace semcell
