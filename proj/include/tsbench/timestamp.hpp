#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tsbench/common.hpp"

namespace tsbench {

enum class TimestampFormat { iso8601, epoch };

std::optional<TimestampFormat> timestamp_format_from_string(std::string_view name);
std::string to_string(TimestampFormat format);

/// Parses "YYYY-MM-DD[ T]HH:MM[:SS[.fff]][Z|+HH:MM]" (UTC seconds) or a signed integer.
/// Fractional seconds are truncated. Returns nullopt for anything malformed.
std::optional<Instant> parse_timestamp(std::string_view text, TimestampFormat format);

/// ISO output is "YYYY-MM-DD HH:MM:SS" (the NAB corpus convention).
std::string format_timestamp(Instant t, TimestampFormat format);

} // namespace tsbench
