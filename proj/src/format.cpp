#include "semcell/format.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "semcell/types.hpp"

namespace semcell {

std::string fmt_double_shortest(double value) {
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, result.ptr);
}

std::string fmt_double_sig6(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return std::string(buf);
}

double parse_double(std::string_view text, const std::string& context) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last || !std::isfinite(value)) {
        throw DataError(context + ": cannot parse '" + std::string(text) + "' as a finite number");
    }
    return value;
}

std::int64_t parse_int64(std::string_view text, const std::string& context) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last) {
        throw DataError(context + ": cannot parse '" + std::string(text) + "' as an integer");
    }
    return value;
}

namespace {

int parse_fixed_digits(std::string_view text, std::size_t pos, int width, const std::string& context) {
    if (pos + static_cast<std::size_t>(width) > text.size()) {
        throw DataError(context + ": timestamp '" + std::string(text) + "' is truncated");
    }
    int value = 0;
    for (int i = 0; i < width; ++i) {
        const char c = text[pos + static_cast<std::size_t>(i)];
        if (c < '0' || c > '9') {
            throw DataError(context + ": timestamp '" + std::string(text) + "' has a non-digit where a digit is required");
        }
        value = value * 10 + (c - '0');
    }
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char expected, const std::string& context) {
    if (pos >= text.size() || text[pos] != expected) {
        throw DataError(context + ": timestamp '" + std::string(text) + "' is not ISO-8601 (expected '" +
                        std::string(1, expected) + "' at position " + std::to_string(pos) + ")");
    }
}

} // namespace

std::int64_t parse_iso8601_utc(std::string_view text, const std::string& context) {
    using namespace std::chrono;
    const int year = parse_fixed_digits(text, 0, 4, context);
    expect_char(text, 4, '-', context);
    const int month = parse_fixed_digits(text, 5, 2, context);
    expect_char(text, 7, '-', context);
    const int day = parse_fixed_digits(text, 8, 2, context);
    expect_char(text, 10, 'T', context);
    const int hour = parse_fixed_digits(text, 11, 2, context);
    expect_char(text, 13, ':', context);
    const int minute = parse_fixed_digits(text, 14, 2, context);
    expect_char(text, 16, ':', context);
    const int second = parse_fixed_digits(text, 17, 2, context);

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) {
            throw DataError(context + ": timestamp '" + std::string(text) + "' has an empty fractional part");
        }
        // sub-second precision is carried by the catalog but truncated here
    }
    if (pos < text.size()) {
        if (text[pos] != 'Z' || pos + 1 != text.size()) {
            throw DataError(context + ": timestamp '" + std::string(text) +
                            "' must be UTC ('Z' or no designator; offsets are not supported)");
        }
    }

    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                             std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) {
        throw DataError(context + ": '" + std::string(text) + "' is not a valid calendar date");
    }
    if (hour > 23 || minute > 59 || second > 59) {
        throw DataError(context + ": '" + std::string(text) + "' has an out-of-range time of day");
    }
    const sys_days days{ymd};
    return duration_cast<seconds>(days.time_since_epoch()).count() +
           hour * 3600LL + minute * 60LL + second;
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{epoch_seconds}};
    const sys_days day_point = floor<days>(tp);
    const year_month_day ymd{day_point};
    const hh_mm_ss<seconds> tod{tp - day_point};
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()),
                  static_cast<long long>(tod.hours().count()),
                  static_cast<long long>(tod.minutes().count()),
                  static_cast<long long>(tod.seconds().count()));
    return std::string(buf);
}

std::string now_iso8601_utc() {
    using namespace std::chrono;
    const auto now = duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
    return format_iso8601_utc(now);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw DataError("error while reading file: " + path);
    return buffer.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("error while writing file: " + path);
}

std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char c = s[i];
        std::size_t len;
        std::uint32_t cp;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > n) return i;
        for (std::size_t k = 1; k < len; ++k) {
            if ((s[i + k] & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (s[i + k] & 0x3F);
        }
        // overlongs, surrogates, out of range
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
            (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
            return i;
        }
        i += len;
    }
    return std::nullopt;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::string> csv_split_line(std::string_view line, const std::string& context) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            if (!current.empty()) {
                throw DataError(context + ": stray quote inside unquoted CSV field");
            }
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
        ++i;
    }
    if (in_quotes) throw DataError(context + ": unterminated quoted CSV field");
    fields.push_back(std::move(current));
    return fields;
}

std::string_view trim(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && (s[begin] == ' ' || s[begin] == '\t' || s[begin] == '\r' || s[begin] == '\n')) ++begin;
    while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r' || s[end - 1] == '\n')) --end;
    return s.substr(begin, end - begin);
}

} // namespace semcell
