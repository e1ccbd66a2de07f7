#pragma once

#include <atprank/ingest.hpp>
#include <atprank/model.hpp>
#include <atprank/points.hpp>

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace atprank {

struct Bin {
    double lo;
    double hi;
    double center;
    std::size_t count = 0;
    double wins = 0.0;
    double predicted_sum = 0.0;
    double model_value = 0.0;  // model evaluated at the bin center

    /// NaN for empty bins.
    double empirical() const;
    double mean_predicted() const;
};

struct BinnedCurve {
    std::vector<Bin> bins;
    std::size_t total() const;
};

/// Log-spaced edges, lo * (hi / lo)^(k / n_bins), k = 0..n_bins.
std::vector<double> log_edges(double lo, double hi, int n_bins);

/// Win frequency against the points ratio, both orientations per match.
/// Ratios outside [lo, hi] are counted in the end bins, so counts always
/// sum to twice the number of matches.
BinnedCurve bin_by_ratio(std::span<const MatchObservation> matches, double alpha, int n_bins = 40,
                         double lo = 0.01, double hi = 100.0);

/// Win frequency against the predicted probability on linear bins over
/// [0, 1]; model_value is the diagonal (the bin center).
BinnedCurve calibration_curve(std::span<const MatchObservation> matches, double alpha, int n_bins = 20);

struct Summary {
    double max = 0.0;
    double mean = 0.0;
    double min = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single value
};

Summary summarize(std::span<const double> values);

struct RankStats {
    int band;
    std::size_t n_dates;
    Summary points;
    Summary ratio_to_32;
};

struct RankStatsResult {
    std::vector<RankStats> bands;
    std::vector<Date> skipped_dates;  // snapshots lacking a requested rank
};

/// Statistics over every snapshot date that lists all requested ranks and
/// rank 32. Throws DomainError when no date qualifies.
RankStatsResult rank_stats(std::span<const RankingEntry> rankings,
                           std::span<const int> bands = std::array{16, 32, 64});

/// Maps an archive tournament to a category. G and M codes resolve
/// directly; A-level events are 500s when their name is a known 500 for
/// that year, otherwise 250s. Other codes resolve to nothing.
class CategoryResolver {
public:
    struct Rule {
        std::string name;
        int from_year;
        int to_year;
    };

    CategoryResolver();  // built-in 500 list from 2009 on
    explicit CategoryResolver(std::vector<Rule> tour500);

    /// Rows "name,from_year,to_year" (header required).
    static CategoryResolver from_file(const std::filesystem::path& path);

    std::optional<Category> resolve(const std::string& level, const std::string& name, int year) const;

private:
    std::vector<Rule> tour500_;
};

struct ParticipationRow {
    int band;
    Category category;
    std::array<int, 7> histogram{};  // events played: 0..5, then "6 or more"
    double mean = 0.0;
    int players = 0;
};

/// For each player ranked within a band on the snapshot date, counts the
/// distinct 500 and 250 tournaments they appear in during the 52 weeks
/// ending at that date. Qualifying rows are ignored.
std::vector<ParticipationRow> participation_table(std::span<const RawMatchRow> rows,
                                                  std::span<const RankingEntry> snapshot,
                                                  Date as_of,
                                                  std::span<const int> bands = std::array{8, 16, 30, 64},
                                                  const CategoryResolver& resolver = CategoryResolver());

void write_curve_csv(std::ostream& out, const BinnedCurve& curve);
void write_curve_svg(std::ostream& out, const BinnedCurve& curve, const std::string& title,
                     const std::string& x_label, bool log_x);
void write_rank_stats_text(std::ostream& out, const RankStatsResult& stats);
void write_rank_stats_csv(std::ostream& out, const RankStatsResult& stats);
void write_participation_text(std::ostream& out, std::span<const ParticipationRow> rows);
void write_participation_csv(std::ostream& out, std::span<const ParticipationRow> rows);

}  // namespace atprank
