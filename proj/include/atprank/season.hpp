#pragma once

#include <atprank/bracket.hpp>
#include <atprank/kv.hpp>
#include <atprank/points.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace atprank {

struct CalendarEvent {
    Category category;
    int draw_size;
    int week;  // 1..52
};

/// Reference season calendar: 4 Grand Slams (128), 9 Masters (2 x 128, 7 x 64),
/// 13 x 500 (2 x 64, 11 x 32), 40 x 250 (1 x 64, 39 x 32), with draws
/// rounded up to the next power of two.
std::vector<CalendarEvent> default_calendar();

/// Rows "category,draw_size,week" with a header line.
std::vector<CalendarEvent> read_calendar(const std::string& path);

struct SeasonConfig {
    std::vector<CalendarEvent> calendar = default_calendar();
    std::string calendar_source = "default";
    bool top30_mandatory = true;
    int n_500_choices = 3;
    int n_250_choices = 3;
    double alpha = 0.8722;
    std::uint64_t rng_seed = 42;
    int n_players = 300;
    int n_seasons = 20;
    int warmup_seasons = 1;
    double point_floor = 1.0;
    int threads = 1;

    /// Throws DomainError on an infeasible or inconsistent configuration.
    void validate() const;
};

/// Keys: alpha, rng_seed, n_players, n_seasons, warmup_seasons,
/// top30_mandatory, n_500_choices, n_250_choices, point_floor, threads,
/// calendar (path, or "default"). Unknown keys are a UsageError.
SeasonConfig parse_season_config(const KeyValues& kv, SeasonConfig base = {});
KeyValues season_config_to_kv(const SeasonConfig& config);

struct SimPlayer {
    PlayerId id;
    double current_points = 0.0;
    PlayerSeason season_results;
};

/// n players with no points and no results.
std::vector<SimPlayer> fresh_pool(int n);

struct WeeklyRow {
    int week;
    PlayerId player;
    int points;
    int rank;
};

struct SeasonRun {
    int season;
    std::vector<WeeklyRow> rows;                        // measured year only
    std::vector<std::pair<PlayerId, int>> final_ranking; // rank order
    std::vector<SimPlayer> final_players;

    /// Points of the player ranked `rank` (1-based) at season end.
    int points_at_rank(int rank) const;
};

/// One independent replicate: warmup_seasons unrecorded years followed by a
/// recorded year, all drawing from RNG stream `season_index`.
SeasonRun run_season(const SeasonConfig& config, std::vector<SimPlayer> players, int season_index);

/// Replicates 0..n_seasons-1, spread over config.threads workers. The output
/// does not depend on the thread count.
std::vector<SeasonRun> run_seasons(const SeasonConfig& config, const std::vector<SimPlayer>& players);

struct BandSummary {
    int rank;
    int expected;
    double median;
    double mean;
    int min;
    int max;
};

/// End-of-season points at ranks 16, 32, 64 across replicates.
std::vector<BandSummary> summarize_bands(const std::vector<SeasonRun>& runs);

/// season,week,player,points,rank
void write_season_report(std::ostream& out, const std::vector<SeasonRun>& runs);
void write_band_summary(std::ostream& out, const std::vector<BandSummary>& bands);

}  // namespace atprank
