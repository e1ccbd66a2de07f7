#include <atprank/ingest.hpp>
#include <atprank/csv.hpp>
#include <atprank/error.hpp>

#include <algorithm>
#include <charconv>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace atprank {

namespace {

const std::vector<std::string>& logical_fields() {
    static const std::vector<std::string> fields = {
        "tourney_id", "tourney_name", "date",      "level",       "round",     "draw_size",     "winner_id",
        "winner_rank", "winner_points", "loser_id", "loser_rank", "loser_points", "score"};
    return fields;
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
    if (text.empty()) return std::nullopt;
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

std::optional<int> parse_int_loose(const std::string& text) {
    if (auto v = parse_number<int>(text)) return v;
    // Some exports write integers as "12.0".
    if (auto d = parse_number<double>(text); d && *d == static_cast<double>(static_cast<int>(*d))) {
        return static_cast<int>(*d);
    }
    return std::nullopt;
}

}  // namespace

MatchSchema MatchSchema::archive_default() {
    MatchSchema s;
    s.columns = {{"tourney_id", "tourney_id"},
                 {"tourney_name", "tourney_name"},
                 {"date", "tourney_date"},
                 {"level", "tourney_level"},
                 {"round", "round"},
                 {"draw_size", "draw_size"},
                 {"winner_id", "winner_id"},
                 {"winner_rank", "winner_rank"},
                 {"winner_points", "winner_rank_points"},
                 {"loser_id", "loser_id"},
                 {"loser_rank", "loser_rank"},
                 {"loser_points", "loser_rank_points"},
                 {"score", "score"}};
    return s;
}

MatchSchema MatchSchema::from_key_values(const KeyValues& kv) {
    MatchSchema s = archive_default();
    for (const auto& [logical, column] : kv) {
        if (!s.columns.contains(logical)) throw SchemaError(fmt::format("schema: unknown field '{}'", logical));
        s.columns[logical] = column;
    }
    return s;
}

const std::string& MatchSchema::column(const std::string& logical) const {
    auto it = columns.find(logical);
    if (it == columns.end()) throw SchemaError(fmt::format("schema: unknown field '{}'", logical));
    return it->second;
}

const std::vector<std::string>& required_match_fields() {
    static const std::vector<std::string> fields = {"date", "level", "round", "winner_points", "loser_points"};
    return fields;
}

RawMatchRow::RawMatchRow(std::map<std::string, std::string> fields, std::string source, std::size_t line)
    : fields_(std::move(fields)), source_(std::move(source)), line_(line) {}

const std::string& RawMatchRow::field(const std::string& logical) const {
    static const std::string empty;
    auto it = fields_.find(logical);
    return it == fields_.end() ? empty : it->second;
}

std::optional<Date> RawMatchRow::date() const { return parse_date(field("date")); }
std::optional<int> RawMatchRow::draw_size() const { return parse_int_loose(field("draw_size")); }
std::optional<int> RawMatchRow::winner_rank() const { return parse_int_loose(field("winner_rank")); }
std::optional<int> RawMatchRow::loser_rank() const { return parse_int_loose(field("loser_rank")); }
std::optional<double> RawMatchRow::winner_points() const { return parse_number<double>(field("winner_points")); }
std::optional<double> RawMatchRow::loser_points() const { return parse_number<double>(field("loser_points")); }

std::vector<RawMatchRow> load_raw_matches(std::span<const std::filesystem::path> paths, const MatchSchema& schema) {
    std::vector<RawMatchRow> rows;
    for (const auto& path : paths) {
        const CsvTable table = read_csv(path);
        std::vector<std::string> absent;
        for (const auto& logical : required_match_fields()) {
            if (!table.column(schema.column(logical))) absent.push_back(schema.column(logical));
        }
        if (!absent.empty()) {
            throw SchemaError(fmt::format("{}: missing required columns: {}", path.string(), fmt::join(absent, ", ")));
        }
        std::vector<std::pair<std::string, std::size_t>> mapping;
        for (const auto& logical : logical_fields()) {
            if (auto col = table.column(schema.column(logical))) mapping.emplace_back(logical, *col);
        }
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto& cells = table.rows[i];
            std::map<std::string, std::string> fields;
            for (const auto& [logical, col] : mapping) {
                if (col < cells.size()) fields[logical] = cells[col];
            }
            rows.emplace_back(std::move(fields), path.string(), i + 2);
        }
    }
    return rows;
}

bool is_qualifying_round(const std::string& round) { return !round.empty() && round.front() == 'Q' && round != "QF"; }

bool is_walkover(const std::string& score) { return score.find("W/O") != std::string::npos; }

RowVerdict classify_row(const RawMatchRow& row, const IngestOptions& options) {
    const auto date = row.date();
    if (!date) return RowVerdict::Missing;
    if (!options.range.contains(*date)) return RowVerdict::OutOfRange;
    if (!options.levels.contains(row.level())) return RowVerdict::OutOfRange;
    if (!options.include_qualifying && is_qualifying_round(row.round())) return RowVerdict::OutOfRange;
    if (options.drop_walkovers && is_walkover(row.score())) return RowVerdict::OutOfRange;
    const auto wp = row.winner_points();
    const auto lp = row.loser_points();
    if (!wp || !lp) return RowVerdict::Missing;
    if (!(*wp > 0.0) || !(*lp > 0.0)) return RowVerdict::ZeroPoints;
    return RowVerdict::Kept;
}

IngestResult filter_matches(std::span<const RawMatchRow> rows, const IngestOptions& options) {
    IngestResult result;
    result.report.total_rows = rows.size();
    for (const auto& row : rows) {
        switch (classify_row(row, options)) {
            case RowVerdict::Kept:
                result.matches.emplace_back(*row.winner_points(), *row.loser_points(), *row.date(),
                                            row.level().empty() ? "other" : row.level(),
                                            row.round().empty() ? "unknown" : row.round());
                ++result.report.kept;
                break;
            case RowVerdict::ZeroPoints: ++result.report.dropped_zero_points; break;
            case RowVerdict::Missing: ++result.report.dropped_missing; break;
            case RowVerdict::OutOfRange: ++result.report.dropped_out_of_range; break;
        }
    }
    return result;
}

IngestResult load_matches(std::span<const std::filesystem::path> paths, const IngestOptions& options) {
    const auto rows = load_raw_matches(paths, options.schema);
    return filter_matches(rows, options);
}

void write_observations(std::ostream& out, std::span<const MatchObservation> matches) {
    out << "date,level,round,winner_points,loser_points\n";
    for (const auto& m : matches) {
        out << fmt::format("{},{},{},{:.17g},{:.17g}\n", format_date(m.date()), m.level(), m.round(),
                           m.winner_points(), m.loser_points());
    }
}

void write_ingest_report(std::ostream& out, const IngestReport& r) {
    out << "total_rows = " << r.total_rows << '\n'
        << "kept = " << r.kept << '\n'
        << "dropped_zero_points = " << r.dropped_zero_points << '\n'
        << "dropped_missing = " << r.dropped_missing << '\n'
        << "dropped_out_of_range = " << r.dropped_out_of_range << '\n';
}

RankingLoad load_rankings(std::span<const std::filesystem::path> paths, const std::set<Date>& dates) {
    RankingLoad load;
    std::map<Date, std::set<int>> seen_ranks;
    for (const auto& path : paths) {
        const CsvTable table = read_csv(path);
        const auto c_date = table.column("ranking_date");
        const auto c_rank = table.column("rank");
        const auto c_player = table.column("player");
        const auto c_points = table.column("points");
        std::vector<std::string> absent;
        if (!c_date) absent.emplace_back("ranking_date");
        if (!c_rank) absent.emplace_back("rank");
        if (!c_player) absent.emplace_back("player");
        if (!c_points) absent.emplace_back("points");
        if (!absent.empty()) {
            throw SchemaError(fmt::format("{}: missing required columns: {}", path.string(), fmt::join(absent, ", ")));
        }
        const std::size_t width = std::max({*c_date, *c_rank, *c_player, *c_points}) + 1;
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            const auto& cells = table.rows[i];
            const auto where = fmt::format("{}:{}", path.string(), i + 2);
            if (cells.size() < width) throw SchemaError(where + ": short row");
            const auto date = parse_date(cells[*c_date]);
            if (!date) throw SchemaError(fmt::format("{}: bad ranking_date '{}'", where, cells[*c_date]));
            if (!dates.empty() && !dates.contains(*date)) continue;
            const auto rank = parse_int_loose(cells[*c_rank]);
            const auto points = parse_number<double>(cells[*c_points]);
            if (!rank || *rank < 1) throw SchemaError(fmt::format("{}: bad rank '{}'", where, cells[*c_rank]));
            if (!points || *points < 0.0) throw SchemaError(fmt::format("{}: bad points '{}'", where, cells[*c_points]));
            if (!seen_ranks[*date].insert(*rank).second) {
                throw SchemaError(fmt::format("{}: duplicate rank {} on {}", where, *rank, format_date(*date)));
            }
            load.entries.push_back({*date, *rank, cells[*c_player], *points});
        }
    }
    for (const Date d : dates) {
        if (!seen_ranks.contains(d)) load.missing_dates.push_back(d);
    }
    return load;
}

}  // namespace atprank
