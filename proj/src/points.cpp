#include <atprank/points.hpp>
#include <atprank/error.hpp>

#include <algorithm>
#include <bit>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace atprank {

int count_per_year(Category c) {
    switch (c) {
        case Category::GrandSlam: return 4;
        case Category::Masters1000: return 9;
        case Category::Tour500: return 13;
        case Category::Tour250: return 40;
    }
    throw DomainError("unknown category");
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::GrandSlam: return "GrandSlam";
        case Category::Masters1000: return "Masters1000";
        case Category::Tour500: return "Tour500";
        case Category::Tour250: return "Tour250";
    }
    return "?";
}

std::string_view to_string(Round r) {
    switch (r) {
        case Round::W: return "W";
        case Round::F: return "F";
        case Round::SF: return "SF";
        case Round::QF: return "QF";
        case Round::R16: return "R16";
        case Round::R32: return "R32";
        case Round::R64: return "R64";
        case Round::R128: return "R128";
        case Round::Q: return "Q";
    }
    return "?";
}

std::optional<Category> parse_category(std::string_view text) {
    for (auto c : kCategories) {
        if (text == to_string(c)) return c;
    }
    if (text == "G" || text == "GS") return Category::GrandSlam;
    if (text == "M" || text == "1000") return Category::Masters1000;
    if (text == "500") return Category::Tour500;
    if (text == "250") return Category::Tour250;
    return std::nullopt;
}

std::optional<Round> parse_round(std::string_view text) {
    for (auto r : kRounds) {
        if (text == to_string(r)) return r;
    }
    return std::nullopt;
}

Round round_reached(int draw_size, int wins) {
    if (draw_size < 2 || !std::has_single_bit(static_cast<unsigned>(draw_size))) {
        throw DomainError(fmt::format("draw size {} is not a power of two", draw_size));
    }
    const int rounds = std::countr_zero(static_cast<unsigned>(draw_size));
    if (wins < 0 || wins > rounds) throw DomainError(fmt::format("{} wins impossible in a {}-draw", wins, draw_size));
    if (wins == rounds) return Round::W;
    switch (draw_size >> wins) {
        case 2: return Round::F;
        case 4: return Round::SF;
        case 8: return Round::QF;
        case 16: return Round::R16;
        case 32: return Round::R32;
        case 64: return Round::R64;
        case 128: return Round::R128;
        default: break;
    }
    throw DomainError(fmt::format("no round tag for a {}-draw", draw_size));
}

DrawAlternates default_draw_alternates() {
    return {
        {{Category::Masters1000, Round::R64}, {96, 128}},
        {{Category::Masters1000, Round::R128}, {96, 128}},
        {{Category::Tour500, Round::R32}, {48, 64}},
        {{Category::Tour250, Round::R32}, {48, 64}},
    };
}

DrawAlternates parse_draw_alternates(const KeyValues& kv) {
    DrawAlternates out = default_draw_alternates();
    for (const auto& [key, value] : kv) {
        const auto dot = key.find('.');
        if (dot == std::string::npos) throw SchemaError(fmt::format("draw alternates: bad key '{}'", key));
        auto cat = parse_category(std::string_view(key).substr(0, dot));
        auto round = parse_round(std::string_view(key).substr(dot + 1));
        if (!cat || !round) throw SchemaError(fmt::format("draw alternates: bad key '{}'", key));
        std::set<int> sizes;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item.erase(0, item.find_first_not_of(' '));
            item.erase(item.find_last_not_of(' ') + 1);
            if (item.empty()) continue;
            sizes.insert(static_cast<int>(kv_to_int(key, item)));
        }
        out[{*cat, *round}] = std::move(sizes);
    }
    return out;
}

namespace {

using Cell = PointTable::Cell;

// Row order follows kRounds: W F SF QF R16 R32 R64 R128 Q.
constexpr std::optional<int> kNone = std::nullopt;

const std::array<std::array<Cell, 9>, 4>& raw_table() {
    static const std::array<std::array<Cell, 9>, 4> table = {{
        {{{2000, kNone}, {1200, kNone}, {720, kNone}, {360, kNone}, {180, kNone}, {90, kNone}, {45, kNone},
          {10, kNone}, {25, kNone}}},
        {{{1000, kNone}, {600, kNone}, {360, kNone}, {180, kNone}, {90, kNone}, {45, kNone}, {10, 25},
          {kNone, 10}, {16, kNone}}},
        {{{500, kNone}, {300, kNone}, {180, kNone}, {90, kNone}, {45, kNone}, {kNone, 20}, {kNone, kNone},
          {kNone, kNone}, {20, kNone}}},
        {{{250, kNone}, {150, kNone}, {90, kNone}, {45, kNone}, {20, kNone}, {kNone, 5}, {kNone, kNone},
          {kNone, kNone}, {12, kNone}}},
    }};
    return table;
}

}  // namespace

PointTable::PointTable(DrawAlternates alternates) : alternates_(std::move(alternates)) {}

const PointTable& PointTable::standard() {
    static const PointTable table;
    return table;
}

const PointTable::Cell& PointTable::cell(Category c, Round r) const {
    return raw_table()[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
}

int PointTable::points_for(Category c, Round r, std::optional<int> draw_size) const {
    const Cell& cl = cell(c, r);
    if (!cl.value && !cl.alternate) {
        throw DomainError(fmt::format("round not awarded in category: {} {}", to_string(r), to_string(c)));
    }
    if (draw_size && cl.alternate) {
        auto it = alternates_.find({c, r});
        if (it != alternates_.end() && it->second.contains(*draw_size)) return *cl.alternate;
    }
    return cl.value.value_or(0);
}

void PointTable::write_delimited(std::ostream& out) const {
    out << "category,round,points,alternate\n";
    for (auto c : kCategories) {
        for (auto r : kRounds) {
            const Cell& cl = cell(c, r);
            if (!cl.value && !cl.alternate) continue;
            out << to_string(c) << ',' << to_string(r) << ',';
            if (cl.value) out << *cl.value;
            out << ',';
            if (cl.alternate) out << *cl.alternate;
            out << '\n';
        }
    }
}

int points_for(Category c, Round r, std::optional<int> draw_size) {
    return PointTable::standard().points_for(c, r, draw_size);
}

int best_18_total(std::span<const SeasonResult> results, Date as_of) {
    std::vector<int> in_window;
    in_window.reserve(results.size());
    const Date oldest = as_of - std::chrono::days{kWindowDays - 1};
    for (const auto& r : results) {
        if (r.date <= as_of && r.date >= oldest) in_window.push_back(r.points);
    }
    const auto keep = std::min<std::size_t>(in_window.size(), 18);
    std::partial_sort(in_window.begin(), in_window.begin() + static_cast<std::ptrdiff_t>(keep), in_window.end(),
                      std::greater<>());
    int total = 0;
    for (std::size_t i = 0; i < keep; ++i) total += in_window[i];
    return total;
}

std::vector<ScheduleEntry> expected_schedule(int rank_band) {
    switch (rank_band) {
        case 16:
            return {{Category::GrandSlam, 4, Round::R16, std::nullopt},
                    {Category::Masters1000, 8, Round::R16, std::nullopt},
                    {Category::Tour500, 3, Round::SF, std::nullopt},
                    {Category::Tour250, 3, Round::F, std::nullopt}};
        case 32:
            return {{Category::GrandSlam, 4, Round::R32, std::nullopt},
                    {Category::Masters1000, 8, Round::R32, std::nullopt},
                    {Category::Tour500, 3, Round::QF, std::nullopt},
                    {Category::Tour250, 3, Round::SF, std::nullopt}};
        case 64:
            // Masters R64 at 25 is the 96-draw alternate.
            return {{Category::GrandSlam, 4, Round::R64, std::nullopt},
                    {Category::Masters1000, 8, Round::R64, 96},
                    {Category::Tour500, 3, Round::R16, std::nullopt},
                    {Category::Tour250, 3, Round::QF, std::nullopt}};
        default:
            throw DomainError(fmt::format("unsupported rank band {} (expected 16, 32 or 64)", rank_band));
    }
}

int expected_points(int rank_band) {
    int total = 0;
    for (const auto& e : expected_schedule(rank_band)) {
        total += e.events * points_for(e.category, e.round, e.draw_size);
    }
    return total;
}

double expected_ratio_to_32(int rank_band) {
    return static_cast<double>(expected_points(rank_band)) / static_cast<double>(expected_points(32));
}

}  // namespace atprank
