#include <atprank/analysis.hpp>
#include <atprank/csv.hpp>
#include <atprank/error.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include <fmt/format.h>

namespace atprank {

double Bin::empirical() const {
    return count == 0 ? std::numeric_limits<double>::quiet_NaN() : wins / static_cast<double>(count);
}

double Bin::mean_predicted() const {
    return count == 0 ? std::numeric_limits<double>::quiet_NaN() : predicted_sum / static_cast<double>(count);
}

std::size_t BinnedCurve::total() const {
    std::size_t n = 0;
    for (const auto& b : bins) n += b.count;
    return n;
}

std::vector<double> log_edges(double lo, double hi, int n_bins) {
    if (!(lo > 0.0) || !(hi > lo)) throw DomainError(fmt::format("invalid bin range [{}, {}]", lo, hi));
    if (n_bins < 2) throw DomainError("need at least 2 bins");
    std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
    const double log_span = std::log(hi / lo);
    for (int k = 0; k <= n_bins; ++k) edges[static_cast<std::size_t>(k)] = lo * std::exp(log_span * k / n_bins);
    edges.front() = lo;
    edges.back() = hi;
    return edges;
}

namespace {

std::size_t log_bin_index(const std::vector<double>& edges, double x) {
    const std::size_t n = edges.size() - 1;
    if (x <= edges.front()) return 0;
    if (x >= edges.back()) return n - 1;
    // Position in log space; values within rounding of an edge go to the bin above it.
    const double t = static_cast<double>(n) * std::log(x / edges.front()) / std::log(edges.back() / edges.front());
    const auto k = static_cast<std::size_t>(std::floor(t + 1e-9));
    return std::min(k, n - 1);
}

void require_nonempty(std::span<const MatchObservation> matches) {
    if (matches.empty()) throw DomainError("no matches");
}

}  // namespace

BinnedCurve bin_by_ratio(std::span<const MatchObservation> matches, double alpha, int n_bins, double lo, double hi) {
    require_nonempty(matches);
    if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
    if (lo > 0.1 || hi < 10.0) throw DomainError(fmt::format("ratio bins [{}, {}] must cover [0.1, 10]", lo, hi));
    const auto edges = log_edges(lo, hi, n_bins);

    BinnedCurve curve;
    curve.bins.resize(static_cast<std::size_t>(n_bins));
    for (std::size_t k = 0; k < curve.bins.size(); ++k) {
        Bin& b = curve.bins[k];
        b.lo = edges[k];
        b.hi = edges[k + 1];
        b.center = std::sqrt(b.lo * b.hi);
        b.model_value = logistic_ratio(alpha, b.center);
    }
    for (const auto& m : matches) {
        const double up = m.winner_points() / m.loser_points();
        const double down = m.loser_points() / m.winner_points();
        Bin& w = curve.bins[log_bin_index(edges, up)];
        ++w.count;
        w.wins += 1.0;
        w.predicted_sum += logistic_ratio(alpha, up);
        Bin& l = curve.bins[log_bin_index(edges, down)];
        ++l.count;
        l.predicted_sum += logistic_ratio(alpha, down);
    }
    return curve;
}

BinnedCurve calibration_curve(std::span<const MatchObservation> matches, double alpha, int n_bins) {
    require_nonempty(matches);
    if (!(alpha > 0.0)) throw DomainError(fmt::format("alpha must be positive, got {}", alpha));
    if (n_bins < 2) throw DomainError("need at least 2 bins");

    BinnedCurve curve;
    curve.bins.resize(static_cast<std::size_t>(n_bins));
    for (int k = 0; k < n_bins; ++k) {
        Bin& b = curve.bins[static_cast<std::size_t>(k)];
        b.lo = static_cast<double>(k) / n_bins;
        b.hi = static_cast<double>(k + 1) / n_bins;
        b.center = (k + 0.5) / n_bins;
        b.model_value = b.center;
    }
    auto index = [n_bins](double p) {
        const auto k = static_cast<int>(std::floor(p * n_bins));
        return static_cast<std::size_t>(std::clamp(k, 0, n_bins - 1));
    };
    for (const auto& m : matches) {
        const double p_win = logistic_ratio(alpha, m.winner_points() / m.loser_points());
        const double p_lose = logistic_ratio(alpha, m.loser_points() / m.winner_points());
        Bin& w = curve.bins[index(p_win)];
        ++w.count;
        w.wins += 1.0;
        w.predicted_sum += p_win;
        Bin& l = curve.bins[index(p_lose)];
        ++l.count;
        l.predicted_sum += p_lose;
    }
    return curve;
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw DomainError("cannot summarize an empty sample");
    Summary s;
    s.max = *std::max_element(values.begin(), values.end());
    s.min = *std::min_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

RankStatsResult rank_stats(std::span<const RankingEntry> rankings, std::span<const int> bands) {
    std::map<Date, std::map<int, double>> by_date;
    for (const auto& e : rankings) by_date[e.date][e.rank] = e.points;

    std::set<int> needed(bands.begin(), bands.end());
    needed.insert(32);

    RankStatsResult result;
    std::map<int, std::vector<double>> points, ratios;
    std::size_t used = 0;
    for (const auto& [date, ranks] : by_date) {
        const bool complete = std::all_of(needed.begin(), needed.end(), [&](int r) { return ranks.contains(r); });
        if (!complete || !(ranks.at(32) > 0.0)) {
            result.skipped_dates.push_back(date);
            continue;
        }
        ++used;
        const double ref = ranks.at(32);
        for (int band : bands) {
            points[band].push_back(ranks.at(band));
            ratios[band].push_back(ranks.at(band) / ref);
        }
    }
    if (used == 0) throw DomainError("no ranking snapshot lists every requested rank");
    for (int band : bands) result.bands.push_back({band, used, summarize(points[band]), summarize(ratios[band])});
    return result;
}

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

CategoryResolver::CategoryResolver()
    : CategoryResolver(std::vector<Rule>{{"Rotterdam", 2009, 9999},
                                         {"Memphis", 2009, 2013},
                                         {"Dubai", 2009, 9999},
                                         {"Acapulco", 2009, 9999},
                                         {"Barcelona", 2009, 9999},
                                         {"Hamburg", 2009, 9999},
                                         {"Washington", 2009, 9999},
                                         {"Beijing", 2009, 9999},
                                         {"Tokyo", 2009, 9999},
                                         {"Valencia", 2009, 2014},
                                         {"Basel", 2009, 9999},
                                         {"Rio de Janeiro", 2014, 9999},
                                         {"Queen's Club", 2015, 9999},
                                         {"Halle", 2015, 9999},
                                         {"Vienna", 2015, 9999}}) {}

CategoryResolver::CategoryResolver(std::vector<Rule> tour500) : tour500_(std::move(tour500)) {
    for (auto& r : tour500_) r.name = lower(r.name);
}

CategoryResolver CategoryResolver::from_file(const std::filesystem::path& path) {
    const CsvTable table = read_csv(path);
    const auto c_name = table.column("name");
    const auto c_from = table.column("from_year");
    const auto c_to = table.column("to_year");
    if (!c_name || !c_from || !c_to) {
        throw SchemaError(fmt::format("{}: expected columns name,from_year,to_year", path.string()));
    }
    std::vector<Rule> rules;
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw SchemaError(fmt::format("{}: ragged row", path.string()));
        rules.push_back({row[*c_name], static_cast<int>(kv_to_int("from_year", row[*c_from])),
                         static_cast<int>(kv_to_int("to_year", row[*c_to]))});
    }
    return CategoryResolver(std::move(rules));
}

std::optional<Category> CategoryResolver::resolve(const std::string& level, const std::string& name, int year) const {
    if (level == "G") return Category::GrandSlam;
    if (level == "M") return Category::Masters1000;
    if (level != "A") return std::nullopt;
    const std::string key = lower(name);
    for (const auto& r : tour500_) {
        if (r.name == key && year >= r.from_year && year <= r.to_year) return Category::Tour500;
    }
    return Category::Tour250;
}

std::vector<ParticipationRow> participation_table(std::span<const RawMatchRow> rows,
                                                  std::span<const RankingEntry> snapshot, Date as_of,
                                                  std::span<const int> bands, const CategoryResolver& resolver) {
    const Date oldest = as_of - std::chrono::days{kWindowDays - 1};
    std::map<std::string, std::set<std::string>> played500, played250;
    for (const auto& row : rows) {
        const auto date = row.date();
        if (!date || *date < oldest || *date > as_of) continue;
        if (is_qualifying_round(row.round())) continue;
        const int year = static_cast<int>(std::chrono::year_month_day{*date}.year());
        const auto cat = resolver.resolve(row.level(), row.tourney_name(), year);
        if (cat != Category::Tour500 && cat != Category::Tour250) continue;
        const std::string event =
            row.tourney_id().empty() ? row.tourney_name() + "@" + format_date(*date) : row.tourney_id();
        auto& target = *cat == Category::Tour500 ? played500 : played250;
        if (!row.winner_id().empty()) target[row.winner_id()].insert(event);
        if (!row.loser_id().empty()) target[row.loser_id()].insert(event);
    }

    std::vector<ParticipationRow> out;
    for (int band : bands) {
        for (auto cat : {Category::Tour500, Category::Tour250}) {
            ParticipationRow pr{band, cat};
            const auto& played = cat == Category::Tour500 ? played500 : played250;
            long total = 0;
            for (const auto& e : snapshot) {
                if (e.rank > band) continue;
                auto it = played.find(e.player_id);
                const int n = it == played.end() ? 0 : static_cast<int>(it->second.size());
                ++pr.histogram[static_cast<std::size_t>(std::min(n, 6))];
                total += n;
                ++pr.players;
            }
            pr.mean = pr.players == 0 ? 0.0 : static_cast<double>(total) / pr.players;
            out.push_back(pr);
        }
    }
    return out;
}

namespace {

std::string number_or_nan(double v) { return std::isnan(v) ? "nan" : fmt::format("{:.17g}", v); }

}  // namespace

void write_curve_csv(std::ostream& out, const BinnedCurve& curve) {
    out << "bin_center,count,empirical_freq,model_value,bin_lo,bin_hi,mean_predicted\n";
    for (const auto& b : curve.bins) {
        out << fmt::format("{:.17g},{},{},{:.17g},{:.17g},{:.17g},{}\n", b.center, b.count, number_or_nan(b.empirical()),
                           b.model_value, b.lo, b.hi, number_or_nan(b.mean_predicted()));
    }
}

void write_curve_svg(std::ostream& out, const BinnedCurve& curve, const std::string& title, const std::string& x_label,
                     bool log_x) {
    if (curve.bins.empty()) throw DomainError("empty curve");
    constexpr double width = 640, height = 420, left = 60, right = 20, top = 40, bottom = 50;
    const double x0 = curve.bins.front().lo;
    const double x1 = curve.bins.back().hi;
    auto sx = [&](double x) {
        const double t = log_x ? std::log(x / x0) / std::log(x1 / x0) : (x - x0) / (x1 - x0);
        return left + t * (width - left - right);
    };
    auto sy = [&](double y) { return top + (1.0 - y) * (height - top - bottom); };

    out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                       width, height, width, height);
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << fmt::format("<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
                       width / 2, title);
    out << fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left, top,
                       width - left - right, height - top - bottom);
    for (int k = 0; k <= 4; ++k) {
        const double y = k / 4.0;
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" "
                           "text-anchor=\"end\">{:.2f}</text>\n",
                           left - 6, sy(y) + 4, y);
    }
    std::vector<double> ticks;
    if (log_x) {
        for (double t = std::pow(10.0, std::ceil(std::log10(x0))); t <= x1 * (1 + 1e-12); t *= 10) ticks.push_back(t);
    } else {
        for (int k = 0; k <= 4; ++k) ticks.push_back(x0 + (x1 - x0) * k / 4.0);
    }
    for (double t : ticks) {
        out << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"11\" "
                           "text-anchor=\"middle\">{:g}</text>\n",
                           sx(t), height - bottom + 16, t);
    }
    out << fmt::format("<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                       left + (width - left - right) / 2, height - 12, x_label);

    out << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curve.bins.size(); ++i) {
        const auto& b = curve.bins[i];
        out << fmt::format("{}{:.2f},{:.2f}", i ? " " : "", sx(b.center), sy(b.model_value));
    }
    out << "\"/>\n";
    for (const auto& b : curve.bins) {
        if (b.count == 0) continue;
        out << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"steelblue\"/>\n", sx(b.center),
                           sy(b.empirical()));
    }
    out << "</svg>\n";
}

void write_rank_stats_text(std::ostream& out, const RankStatsResult& stats) {
    out << fmt::format("{:<10}", "points");
    for (const auto& b : stats.bands) out << fmt::format("{:>14}", b.band);
    out << '\n';
    auto row = [&](const char* label, auto get) {
        out << fmt::format("{:<10}", label);
        for (const auto& b : stats.bands) out << fmt::format("{:>14.6f}", get(b));
        out << '\n';
    };
    row("Expected", [](const RankStats& b) {
        return b.band == 16 || b.band == 32 || b.band == 64 ? static_cast<double>(expected_points(b.band))
                                                             : std::numeric_limits<double>::quiet_NaN();
    });
    row("Maximum", [](const RankStats& b) { return b.points.max; });
    row("Mean", [](const RankStats& b) { return b.points.mean; });
    row("Minimum", [](const RankStats& b) { return b.points.min; });
    row("Std", [](const RankStats& b) { return b.points.std; });
    out << '\n' << fmt::format("{:<10}", "ratio/32");
    for (const auto& b : stats.bands) out << fmt::format("{:>14}", b.band);
    out << '\n';
    row("Expected", [](const RankStats& b) {
        return b.band == 16 || b.band == 32 || b.band == 64 ? expected_ratio_to_32(b.band)
                                                             : std::numeric_limits<double>::quiet_NaN();
    });
    row("Maximum", [](const RankStats& b) { return b.ratio_to_32.max; });
    row("Mean", [](const RankStats& b) { return b.ratio_to_32.mean; });
    row("Minimum", [](const RankStats& b) { return b.ratio_to_32.min; });
    row("Std", [](const RankStats& b) { return b.ratio_to_32.std; });
    out << '\n' << "snapshots used: " << (stats.bands.empty() ? 0 : stats.bands.front().n_dates)
        << ", skipped: " << stats.skipped_dates.size() << '\n';
}

void write_rank_stats_csv(std::ostream& out, const RankStatsResult& stats) {
    out << "band,n_dates,points_max,points_mean,points_min,points_std,ratio_max,ratio_mean,ratio_min,ratio_std\n";
    for (const auto& b : stats.bands) {
        out << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", b.band, b.n_dates,
                           b.points.max, b.points.mean, b.points.min, b.points.std, b.ratio_to_32.max,
                           b.ratio_to_32.mean, b.ratio_to_32.min, b.ratio_to_32.std);
    }
}

void write_participation_text(std::ostream& out, std::span<const ParticipationRow> rows) {
    out << fmt::format("{:<8}{:<10}{:>5}{:>5}{:>5}{:>5}{:>5}{:>5}{:>5}{:>12}\n", "band", "category", "0", "1", "2", "3",
                       "4", "5", "6+", "mean");
    for (const auto& r : rows) {
        out << fmt::format("{:<8}{:<10}", fmt::format("top{}", r.band), to_string(r.category));
        for (int h : r.histogram) out << fmt::format("{:>5}", h);
        out << fmt::format("{:>12.6f}\n", r.mean);
    }
}

void write_participation_csv(std::ostream& out, std::span<const ParticipationRow> rows) {
    out << "band,category,n0,n1,n2,n3,n4,n5,n6_or_more,mean,players\n";
    for (const auto& r : rows) {
        out << r.band << ',' << to_string(r.category);
        for (int h : r.histogram) out << ',' << h;
        out << fmt::format(",{:.17g},{}\n", r.mean, r.players);
    }
}

}  // namespace atprank
