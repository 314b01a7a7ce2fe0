#include "tsbench/timestamp.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace tsbench {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '"' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool read_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out)
{
    if (pos + len > s.size())
        return false;
    int value = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (s[i] < '0' || s[i] > '9')
            return false;
        value = value * 10 + (s[i] - '0');
    }
    out = value;
    return true;
}

std::optional<Instant> parse_iso(std::string_view s)
{
    int y = 0, mo = 0, d = 0;
    if (!read_fixed(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || s[7] != '-' ||
        !read_fixed(s, 5, 2, mo) || !read_fixed(s, 8, 2, d))
        return std::nullopt;

    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        return std::nullopt;

    int hh = 0, mm = 0, ss = 0;
    std::size_t pos = 10;
    if (pos < s.size()) {
        if (s[pos] != ' ' && s[pos] != 'T')
            return std::nullopt;
        ++pos;
        if (!read_fixed(s, pos, 2, hh) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
            !read_fixed(s, pos + 3, 2, mm))
            return std::nullopt;
        pos += 5;
        if (pos < s.size() && s[pos] == ':') {
            if (!read_fixed(s, pos + 1, 2, ss))
                return std::nullopt;
            pos += 3;
            if (pos < s.size() && s[pos] == '.') {
                ++pos;
                const std::size_t start = pos;
                while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9')
                    ++pos;
                if (pos == start)
                    return std::nullopt;
            }
        }
        if (hh > 23 || mm > 59 || ss > 59)
            return std::nullopt;
    }

    Instant offset = 0;
    if (pos < s.size()) {
        if (s[pos] == 'Z' && pos + 1 == s.size()) {
            pos += 1;
        } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
            int oh = 0, om = 0;
            if (!read_fixed(s, pos + 1, 2, oh) || !read_fixed(s, pos + 4, 2, om) || oh > 23 || om > 59)
                return std::nullopt;
            offset = (s[pos] == '+' ? 1 : -1) * (oh * 3600 + om * 60);
            pos = s.size();
        } else {
            return std::nullopt;
        }
    }

    const auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
    return static_cast<Instant>(days) * 86400 + hh * 3600 + mm * 60 + ss - offset;
}

std::optional<Instant> parse_epoch(std::string_view s)
{
    Instant value = 0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    if (first != last && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
        return std::nullopt;
    return value;
}

} // namespace

std::optional<TimestampFormat> timestamp_format_from_string(std::string_view name)
{
    if (name == "iso8601")
        return TimestampFormat::iso8601;
    if (name == "epoch")
        return TimestampFormat::epoch;
    return std::nullopt;
}

std::string to_string(TimestampFormat format)
{
    return format == TimestampFormat::iso8601 ? "iso8601" : "epoch";
}

std::optional<Instant> parse_timestamp(std::string_view text, TimestampFormat format)
{
    const auto s = trim(text);
    if (s.empty())
        return std::nullopt;
    return format == TimestampFormat::iso8601 ? parse_iso(s) : parse_epoch(s);
}

std::string format_timestamp(Instant t, TimestampFormat format)
{
    if (format == TimestampFormat::epoch)
        return std::to_string(t);

    Instant days = t / 86400;
    Instant secs = t % 86400;
    if (secs < 0) {
        secs += 86400;
        days -= 1;
    }
    const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(secs / 3600), static_cast<int>((secs / 60) % 60), static_cast<int>(secs % 60));
    return buf;
}

} // namespace tsbench
