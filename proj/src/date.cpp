#include <atprank/date.hpp>
#include <atprank/error.hpp>

#include <cctype>

#include <fmt/format.h>

namespace atprank {

namespace {

std::optional<int> digits(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    std::string_view y, m, d;
    if (text.size() == 8) {
        y = text.substr(0, 4);
        m = text.substr(4, 2);
        d = text.substr(6, 2);
    } else if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        y = text.substr(0, 4);
        m = text.substr(5, 2);
        d = text.substr(8, 2);
    } else {
        return std::nullopt;
    }
    auto yy = digits(y), mm = digits(m), dd = digits(d);
    if (!yy || !mm || !dd) return std::nullopt;
    std::chrono::year_month_day ymd{std::chrono::year{*yy}, std::chrono::month{static_cast<unsigned>(*mm)},
                                    std::chrono::day{static_cast<unsigned>(*dd)}};
    if (!ymd.ok()) return std::nullopt;
    return Date{ymd};
}

Date parse_date_or_throw(std::string_view text) {
    auto d = parse_date(text);
    if (!d) throw UsageError(fmt::format("invalid date '{}' (expected yyyymmdd or yyyy-mm-dd)", text));
    return *d;
}

std::string format_date(Date d) {
    std::chrono::year_month_day ymd{d};
    return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

}  // namespace atprank
