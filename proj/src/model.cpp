#include <atprank/model.hpp>
#include <atprank/error.hpp>
#include <atprank/hash.hpp>
#include <atprank/kv.hpp>

#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>

namespace atprank {

void ModelParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw DomainError(fmt::format("alpha must be positive and finite, got {}", alpha));
    }
    if (fitted_e2 && !(*fitted_e2 >= 0.0 && *fitted_e2 <= 1.0)) {
        throw DomainError(fmt::format("fitted_e2 must lie in [0, 1], got {}", *fitted_e2));
    }
}

MatchObservation::MatchObservation(double winner_points, double loser_points, Date date,
                                   std::string level, std::string round)
    : winner_points_(winner_points),
      loser_points_(loser_points),
      date_(date),
      level_(std::move(level)),
      round_(std::move(round)) {
    if (!(winner_points_ > 0.0) || !std::isfinite(winner_points_)) {
        throw DomainError(fmt::format("winner_points must be positive, got {}", winner_points_));
    }
    if (!(loser_points_ > 0.0) || !std::isfinite(loser_points_)) {
        throw DomainError(fmt::format("loser_points must be positive, got {}", loser_points_));
    }
}

double logistic_ratio(double alpha, double ratio) {
    if (ratio > 1.0) return 1.0 / (1.0 + std::pow(ratio, -alpha));
    const double x = std::pow(ratio, alpha);
    return x / (1.0 + x);
}

Prediction predict(double alpha, double r_i, double r_j) {
    if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
    if (!(r_i > 0.0)) throw DomainError(fmt::format("r_i must be positive, got {}", r_i));
    if (!(r_j > 0.0)) throw DomainError(fmt::format("r_j must be positive, got {}", r_j));
    const double ratio = r_i / r_j;
    return {ratio, logistic_ratio(alpha, ratio)};
}

namespace {

void require_matches(std::span<const MatchObservation> matches) {
    if (matches.empty()) throw DomainError("no matches");
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
}

}  // namespace

double brier_score(double alpha, std::span<const MatchObservation> matches) {
    require_matches(matches);
    require_alpha(alpha);
    double sum = 0.0;
    for (const auto& m : matches) {
        const double miss = 1.0 - logistic_ratio(alpha, m.ratio());
        sum += miss * miss;
    }
    return sum / static_cast<double>(matches.size());
}

double brier_score_two_sided(double alpha, std::span<const MatchObservation> matches) {
    require_matches(matches);
    require_alpha(alpha);
    double sum = 0.0;
    for (const auto& m : matches) {
        const double p_win = logistic_ratio(alpha, m.ratio());
        const double p_lose = logistic_ratio(alpha, m.loser_points() / m.winner_points());
        sum += (1.0 - p_win) * (1.0 - p_win);
        sum += p_lose * p_lose;
    }
    return sum / (2.0 * static_cast<double>(matches.size()));
}

double baseline_brier(std::span<const MatchObservation> matches) {
    require_matches(matches);
    double sum = 0.0;
    for (const auto& m : matches) {
        if (m.winner_points() < m.loser_points()) {
            sum += 1.0;
        } else if (m.winner_points() == m.loser_points()) {
            sum += 0.25;
        }
    }
    return sum / static_cast<double>(matches.size());
}

namespace {

void require_bracket(double lo, double hi) {
    if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
        throw DomainError(fmt::format("invalid search bracket [{}, {}]", lo, hi));
    }
}

}  // namespace

ModelParams fit_alpha(std::span<const MatchObservation> matches, const FitOptions& options) {
    require_matches(matches);
    require_bracket(options.search_lo, options.search_hi);
    if (!(options.tol > 0.0)) throw DomainError(fmt::format("tol must be positive, got {}", options.tol));

    auto objective = [&](double a) { return brier_score(a, matches); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = options.search_lo;
    double b = options.search_hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    // Each step shrinks the bracket by 1/phi; 500 steps covers any double range.
    for (int iter = 0; iter < 500 && (b - a) > options.tol; ++iter) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = objective(d);
        }
    }

    ModelParams params;
    params.alpha = 0.5 * (a + b);
    params.fitted_e2 = objective(params.alpha);
    params.n_matches = matches.size();
    return params;
}

ModelParams grid_scan_alpha(std::span<const MatchObservation> matches, double search_lo, double search_hi,
                            std::size_t n_points) {
    require_matches(matches);
    require_bracket(search_lo, search_hi);
    if (n_points < 2) throw DomainError("grid scan needs at least 2 points");

    ModelParams best;
    double best_e2 = std::numeric_limits<double>::infinity();
    const double step = (search_hi - search_lo) / static_cast<double>(n_points - 1);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double a = search_lo + step * static_cast<double>(k);
        const double e2 = brier_score(a, matches);
        if (e2 < best_e2) {
            best_e2 = e2;
            best.alpha = a;
        }
    }
    best.fitted_e2 = best_e2;
    best.n_matches = matches.size();
    return best;
}

void write_params(std::ostream& out, const ParamsDocument& doc) {
    doc.params.validate();
    out << fmt::format("alpha = {:.17g}\n", doc.params.alpha);
    if (doc.params.fitted_e2) out << fmt::format("fitted_e2 = {:.17g}\n", *doc.params.fitted_e2);
    if (doc.params.n_matches) out << fmt::format("n_matches = {}\n", *doc.params.n_matches);
    if (!doc.dataset_fingerprint.empty()) out << "dataset_fingerprint = " << doc.dataset_fingerprint << '\n';
    if (doc.first_date) out << "first_date = " << format_date(*doc.first_date) << '\n';
    if (doc.last_date) out << "last_date = " << format_date(*doc.last_date) << '\n';
}

ParamsDocument read_params(std::istream& in) {
    const KeyValues kv = parse_key_values(in, "params");
    ParamsDocument doc;
    auto it = kv.find("alpha");
    if (it == kv.end()) throw SchemaError("params: missing 'alpha'");
    doc.params.alpha = kv_to_double("alpha", it->second);
    if (auto e = kv.find("fitted_e2"); e != kv.end()) doc.params.fitted_e2 = kv_to_double("fitted_e2", e->second);
    if (auto n = kv.find("n_matches"); n != kv.end()) {
        const long long v = kv_to_int("n_matches", n->second);
        if (v < 0) throw SchemaError("params: n_matches must be nonnegative");
        doc.params.n_matches = static_cast<std::size_t>(v);
    }
    if (auto f = kv.find("dataset_fingerprint"); f != kv.end()) doc.dataset_fingerprint = f->second;
    if (auto f = kv.find("first_date"); f != kv.end()) doc.first_date = parse_date_or_throw(f->second);
    if (auto l = kv.find("last_date"); l != kv.end()) doc.last_date = parse_date_or_throw(l->second);
    doc.params.validate();
    return doc;
}

std::string dataset_fingerprint(std::span<const MatchObservation> matches) {
    std::string canonical;
    canonical.reserve(matches.size() * 48);
    for (const auto& m : matches) {
        canonical += fmt::format("{},{},{},{:.17g},{:.17g}\n", format_date(m.date()), m.level(), m.round(),
                                 m.winner_points(), m.loser_points());
    }
    return sha256_hex(canonical);
}

}  // namespace atprank
