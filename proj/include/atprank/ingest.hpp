#pragma once

#include <atprank/date.hpp>
#include <atprank/kv.hpp>
#include <atprank/model.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace atprank {

/// Logical field -> column name. Defaults follow the public ATP match
/// archive layout (tourney_date, tourney_level, winner_rank_points, ...).
struct MatchSchema {
    std::map<std::string, std::string> columns;

    static MatchSchema archive_default();
    /// Overrides defaults with the given logical=column pairs. Unknown
    /// logical names are a SchemaError.
    static MatchSchema from_key_values(const KeyValues& kv);

    const std::string& column(const std::string& logical) const;
};

/// Logical fields a match file must provide.
const std::vector<std::string>& required_match_fields();

/// One archive row, kept as text; accessors parse on demand.
class RawMatchRow {
public:
    RawMatchRow(std::map<std::string, std::string> fields, std::string source, std::size_t line);

    const std::string& field(const std::string& logical) const;

    std::string tourney_id() const { return field("tourney_id"); }
    std::string tourney_name() const { return field("tourney_name"); }
    std::string level() const { return field("level"); }
    std::string round() const { return field("round"); }
    std::string score() const { return field("score"); }
    std::string winner_id() const { return field("winner_id"); }
    std::string loser_id() const { return field("loser_id"); }
    std::optional<Date> date() const;
    std::optional<int> draw_size() const;
    std::optional<int> winner_rank() const;
    std::optional<int> loser_rank() const;
    std::optional<double> winner_points() const;
    std::optional<double> loser_points() const;

    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::map<std::string, std::string> fields_;
    std::string source_;
    std::size_t line_;
};

std::vector<RawMatchRow> load_raw_matches(std::span<const std::filesystem::path> paths,
                                          const MatchSchema& schema = MatchSchema::archive_default());

struct IngestOptions {
    DateRange range;
    /// Archive level codes kept: G, M, A (tour level), F (finals), D (Davis
    /// Cup), O (Olympics). Challengers (C) and futures (S) are excluded.
    std::set<std::string> levels = {"G", "M", "A", "F", "D", "O"};
    bool include_qualifying = false;
    bool drop_walkovers = false;
    MatchSchema schema = MatchSchema::archive_default();
};

/// kept + dropped_zero_points + dropped_missing + dropped_out_of_range ==
/// total_rows. Rows removed by the date, level, round or walkover
/// selection count as out of range.
struct IngestReport {
    std::size_t total_rows = 0;
    std::size_t kept = 0;
    std::size_t dropped_zero_points = 0;
    std::size_t dropped_missing = 0;
    std::size_t dropped_out_of_range = 0;

    bool operator==(const IngestReport&) const = default;
};

struct IngestResult {
    std::vector<MatchObservation> matches;
    IngestReport report;
};

enum class RowVerdict { Kept, ZeroPoints, Missing, OutOfRange };

RowVerdict classify_row(const RawMatchRow& row, const IngestOptions& options);

IngestResult load_matches(std::span<const std::filesystem::path> paths, const IngestOptions& options = {});
IngestResult filter_matches(std::span<const RawMatchRow> rows, const IngestOptions& options);

bool is_qualifying_round(const std::string& round);
bool is_walkover(const std::string& score);

/// date,level,round,winner_points,loser_points
void write_observations(std::ostream& out, std::span<const MatchObservation> matches);
void write_ingest_report(std::ostream& out, const IngestReport& report);

struct RankingEntry {
    Date date;
    int rank;
    std::string player_id;
    double points;
};

struct RankingLoad {
    std::vector<RankingEntry> entries;
    std::vector<Date> missing_dates;  // requested but absent from every file
};

/// Columns ranking_date, rank, player, points. An empty `dates` set keeps
/// every snapshot. Two entries with the same rank on one date are a
/// SchemaError.
RankingLoad load_rankings(std::span<const std::filesystem::path> paths, const std::set<Date>& dates = {});

}  // namespace atprank
