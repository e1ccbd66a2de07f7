#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace atprank {

using Date = std::chrono::sys_days;

struct DateRange {
    std::optional<Date> from;  // inclusive
    std::optional<Date> to;    // inclusive

    bool contains(Date d) const {
        return (!from || d >= *from) && (!to || d <= *to);
    }
};

/// Parses "yyyymmdd" or "yyyy-mm-dd". Returns nullopt on anything else,
/// including calendar-invalid dates such as 20170230.
std::optional<Date> parse_date(std::string_view text);

/// Like parse_date but throws UsageError naming the offending text.
Date parse_date_or_throw(std::string_view text);

/// ISO "yyyy-mm-dd".
std::string format_date(Date d);

}  // namespace atprank
