#pragma once

#include <atprank/date.hpp>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

namespace atprank {

/// Exponent of the logistic ratio model, plus what the fit saw.
struct ModelParams {
    double alpha = 1.0;
    std::optional<double> fitted_e2;
    std::optional<std::size_t> n_matches;

    /// Throws DomainError unless alpha > 0 and fitted_e2 (if any) is in [0, 1].
    void validate() const;
};

/// One played match, oriented winner-first. Both point totals are strictly
/// positive; matches involving a zero-point player are dropped at ingestion.
class MatchObservation {
public:
    MatchObservation(double winner_points, double loser_points, Date date,
                     std::string level = "other", std::string round = "unknown");

    double winner_points() const { return winner_points_; }
    double loser_points() const { return loser_points_; }
    Date date() const { return date_; }
    const std::string& level() const { return level_; }
    const std::string& round() const { return round_; }

    /// winner_points / loser_points
    double ratio() const { return winner_points_ / loser_points_; }

private:
    double winner_points_;
    double loser_points_;
    Date date_;
    std::string level_;
    std::string round_;
};

struct Prediction {
    double ratio;        // r_i / r_j
    double probability;  // P(i beats j)
};

/// ratio^alpha / (1 + ratio^alpha), evaluated in the form that cannot
/// overflow: for ratio > 1 it uses 1 / (1 + ratio^-alpha).
double logistic_ratio(double alpha, double ratio);

/// Win probability of player i over player j. Throws DomainError naming the
/// first non-positive argument.
Prediction predict(double alpha, double r_i, double r_j);

/// Mean squared error between outcomes and predictions with every match
/// oriented winner-first (w = 1). Summed sequentially in input order.
double brier_score(double alpha, std::span<const MatchObservation> matches);

/// Same objective accumulated over both orientations of every match
/// (w = 1 at ratio, w = 0 at 1/ratio). Equal to brier_score up to rounding.
double brier_score_two_sided(double alpha, std::span<const MatchObservation> matches);

/// Brier score of the hard "more points wins" predictor; ties score 0.5.
double baseline_brier(std::span<const MatchObservation> matches);

struct FitOptions {
    double search_lo = 0.01;
    double search_hi = 5.0;
    double tol = 1e-6;
};

/// Golden-section minimisation of brier_score over [search_lo, search_hi].
/// Stops once the bracket is no wider than tol and returns its midpoint.
ModelParams fit_alpha(std::span<const MatchObservation> matches, const FitOptions& options = {});

/// Exhaustive scan of brier_score at n_points evenly spaced alphas
/// (endpoints included). Used as a multimodality cross-check on fit_alpha.
ModelParams grid_scan_alpha(std::span<const MatchObservation> matches, double search_lo,
                            double search_hi, std::size_t n_points);

/// Serialised form of a fit: key=value lines.
struct ParamsDocument {
    ModelParams params;
    std::string dataset_fingerprint;
    std::optional<Date> first_date;
    std::optional<Date> last_date;
};

void write_params(std::ostream& out, const ParamsDocument& doc);
ParamsDocument read_params(std::istream& in);

/// SHA-256 over a canonical text rendering of the observations, so two
/// datasets with identical content (after filtering) share a fingerprint.
std::string dataset_fingerprint(std::span<const MatchObservation> matches);

}  // namespace atprank
