#include <atprank/season.hpp>
#include <atprank/csv.hpp>
#include <atprank/error.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

#include <fmt/format.h>

namespace atprank {

std::vector<CalendarEvent> default_calendar() {
    using C = Category;
    std::vector<CalendarEvent> cal;
    for (int week : {3, 22, 28, 35}) cal.push_back({C::GrandSlam, 128, week});

    const int masters_weeks[] = {10, 12, 17, 19, 32, 33, 41, 43, 45};
    for (int i = 0; i < 9; ++i) cal.push_back({C::Masters1000, i < 2 ? 128 : 64, masters_weeks[i]});

    const int t500_weeks[] = {7, 8, 9, 16, 25, 30, 31, 40, 42, 44, 6, 27, 39};
    for (int i = 0; i < 13; ++i) cal.push_back({C::Tour500, i < 2 ? 64 : 32, t500_weeks[i]});

    // 250s fill the remaining weeks, two per week where the calendar is dense.
    const int t250_weeks[] = {1,  1,  2,  2,  4,  5,  5,  6,  7,  8,  9,  11, 13, 14,
                              14, 15, 16, 18, 20, 21, 23, 24, 24, 25, 26, 27, 29, 29,
                              30, 31, 34, 36, 37, 38, 38, 39, 40, 42, 44, 46};
    for (int i = 0; i < 40; ++i) cal.push_back({C::Tour250, i < 1 ? 64 : 32, t250_weeks[i]});
    return cal;
}

std::vector<CalendarEvent> read_calendar(const std::string& path) {
    const CsvTable table = read_csv(path);
    const auto c_cat = table.column("category");
    const auto c_draw = table.column("draw_size");
    const auto c_week = table.column("week");
    if (!c_cat || !c_draw || !c_week) {
        throw SchemaError(fmt::format("{}: calendar needs columns category,draw_size,week", path));
    }
    std::vector<CalendarEvent> cal;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (row.size() != table.header.size()) throw SchemaError(fmt::format("{}: row {} has wrong width", path, i + 2));
        auto cat = parse_category(row[*c_cat]);
        if (!cat) throw SchemaError(fmt::format("{}: unknown category '{}'", path, row[*c_cat]));
        cal.push_back({*cat, static_cast<int>(kv_to_int("draw_size", row[*c_draw])),
                       static_cast<int>(kv_to_int("week", row[*c_week]))});
    }
    return cal;
}

void SeasonConfig::validate() const {
    if (std::isnan(alpha) || alpha < 0.0) throw DomainError(fmt::format("alpha must be nonnegative, got {}", alpha));
    if (calendar.empty()) throw DomainError("calendar is empty");
    std::map<int, int> week_load;
    int largest = 0;
    for (const auto& e : calendar) {
        if (e.week < 1 || e.week > 52) throw DomainError(fmt::format("calendar week {} outside 1..52", e.week));
        if (!is_supported_draw(e.draw_size)) throw DomainError(fmt::format("unsupported draw size {}", e.draw_size));
        week_load[e.week] += e.draw_size;
        largest = std::max(largest, e.draw_size);
    }
    if (n_players < largest) {
        throw DomainError(fmt::format("player pool of {} is smaller than the largest draw ({})", n_players, largest));
    }
    for (const auto& [week, load] : week_load) {
        if (load > n_players) {
            throw DomainError(fmt::format("week {} needs {} players but the pool has {}", week, load, n_players));
        }
    }
    if (n_500_choices < 0 || n_250_choices < 0) throw DomainError("event choice counts must be nonnegative");
    if (top30_mandatory) {
        if (n_500_choices + n_250_choices < 6) {
            throw DomainError("top-30 players need at least 6 optional 500/250 events per season");
        }
        if (n_players < 30) throw DomainError("top-30 rules need at least 30 players");
    }
    if (n_seasons < 1) throw DomainError("n_seasons must be at least 1");
    if (warmup_seasons < 0) throw DomainError("warmup_seasons must be nonnegative");
    if (!(point_floor > 0.0)) throw DomainError("point_floor must be positive");
    if (threads < 1) throw DomainError("threads must be at least 1");
}

SeasonConfig parse_season_config(const KeyValues& kv, SeasonConfig base) {
    for (const auto& [key, value] : kv) {
        if (key == "alpha") {
            base.alpha = kv_to_double(key, value);
        } else if (key == "rng_seed") {
            const long long v = kv_to_int(key, value);
            if (v < 0) throw UsageError("rng_seed must be nonnegative");
            base.rng_seed = static_cast<std::uint64_t>(v);
        } else if (key == "n_players") {
            base.n_players = static_cast<int>(kv_to_int(key, value));
        } else if (key == "n_seasons") {
            base.n_seasons = static_cast<int>(kv_to_int(key, value));
        } else if (key == "warmup_seasons") {
            base.warmup_seasons = static_cast<int>(kv_to_int(key, value));
        } else if (key == "top30_mandatory") {
            base.top30_mandatory = kv_to_bool(key, value);
        } else if (key == "n_500_choices") {
            base.n_500_choices = static_cast<int>(kv_to_int(key, value));
        } else if (key == "n_250_choices") {
            base.n_250_choices = static_cast<int>(kv_to_int(key, value));
        } else if (key == "point_floor") {
            base.point_floor = kv_to_double(key, value);
        } else if (key == "threads") {
            base.threads = static_cast<int>(kv_to_int(key, value));
        } else if (key == "calendar") {
            base.calendar = value == "default" ? default_calendar() : read_calendar(value);
            base.calendar_source = value;
        } else {
            throw UsageError(fmt::format("unknown season config key '{}'", key));
        }
    }
    return base;
}

KeyValues season_config_to_kv(const SeasonConfig& c) {
    return {
        {"alpha", fmt::format("{:.17g}", c.alpha)},
        {"rng_seed", std::to_string(c.rng_seed)},
        {"n_players", std::to_string(c.n_players)},
        {"n_seasons", std::to_string(c.n_seasons)},
        {"warmup_seasons", std::to_string(c.warmup_seasons)},
        {"top30_mandatory", c.top30_mandatory ? "true" : "false"},
        {"n_500_choices", std::to_string(c.n_500_choices)},
        {"n_250_choices", std::to_string(c.n_250_choices)},
        {"point_floor", fmt::format("{:.17g}", c.point_floor)},
        {"threads", std::to_string(c.threads)},
        {"calendar", c.calendar_source},
    };
}

std::vector<SimPlayer> fresh_pool(int n) {
    std::vector<SimPlayer> pool(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)].id = i;
    return pool;
}

int SeasonRun::points_at_rank(int rank) const {
    if (rank < 1 || static_cast<std::size_t>(rank) > final_ranking.size()) {
        throw DomainError(fmt::format("rank {} outside a pool of {}", rank, final_ranking.size()));
    }
    return final_ranking[static_cast<std::size_t>(rank - 1)].second;
}

namespace {

// Monday 2001-01-01; week w of simulated year y starts 7 * (52 y + w - 1) days later.
const Date kEpoch = Date{std::chrono::year{2001} / 1 / 1};

Date week_date(int year, int week) { return kEpoch + std::chrono::days{7 * (52 * year + week - 1)}; }

bool is_mandatory(Category c) { return c == Category::GrandSlam || c == Category::Masters1000; }

class SeasonSimulator {
public:
    SeasonSimulator(const SeasonConfig& config, std::vector<SimPlayer> players, int season_index)
        : config_(config),
          players_(std::move(players)),
          rng_(config.rng_seed, static_cast<std::uint64_t>(season_index)),
          season_index_(season_index) {
        for (std::size_t i = 0; i < players_.size(); ++i) {
            if (players_[i].id != static_cast<PlayerId>(i)) {
                throw DomainError("player ids must be 0..n-1 in pool order");
            }
        }
        if (static_cast<int>(players_.size()) != config_.n_players) {
            throw DomainError(fmt::format("config expects {} players, pool has {}", config_.n_players, players_.size()));
        }
        tiebreak_.resize(players_.size());
        std::iota(tiebreak_.begin(), tiebreak_.end(), 0);
        rng_.shuffle(std::span<int>(tiebreak_));
        points_.resize(players_.size());
        for (std::size_t i = 0; i < players_.size(); ++i) points_[i] = players_[i].current_points;

        weeks_.resize(53);
        for (std::size_t e = 0; e < config_.calendar.size(); ++e) {
            weeks_[static_cast<std::size_t>(config_.calendar[e].week)].push_back(e);
        }
        for (auto& w : weeks_) {
            std::stable_sort(w.begin(), w.end(), [&](std::size_t a, std::size_t b) {
                return config_.calendar[a].category < config_.calendar[b].category;
            });
        }
    }

    SeasonRun run() {
        SeasonRun out;
        out.season = season_index_;
        for (int year = 0; year <= config_.warmup_seasons; ++year) {
            simulate_year(year, year == config_.warmup_seasons ? &out : nullptr);
        }
        const auto order = ranking();
        for (PlayerId p : order) {
            out.final_ranking.emplace_back(p, static_cast<int>(points_[static_cast<std::size_t>(p)]));
        }
        for (std::size_t i = 0; i < players_.size(); ++i) players_[i].current_points = points_[i];
        out.final_players = std::move(players_);
        return out;
    }

private:
    std::vector<PlayerId> ranking() const {
        std::vector<PlayerId> order(players_.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](PlayerId a, PlayerId b) {
            const auto ia = static_cast<std::size_t>(a), ib = static_cast<std::size_t>(b);
            if (points_[ia] != points_[ib]) return points_[ia] > points_[ib];
            return tiebreak_[ia] < tiebreak_[ib];
        });
        return order;
    }

    // Each top-30 player, best first, takes the 500s (then 250s) that have the
    // fewest top-30 commitments so far, avoiding mandatory weeks and weeks
    // already taken. Ties go to a random per-year event priority.
    std::vector<std::set<PlayerId>> choose_optional_events(const std::vector<PlayerId>& top30) {
        const auto& cal = config_.calendar;
        std::vector<std::set<PlayerId>> committed(cal.size());
        std::vector<std::uint64_t> priority(cal.size());
        for (auto& p : priority) p = rng_.next();

        std::set<int> mandatory_weeks;
        for (const auto& e : cal) {
            if (is_mandatory(e.category)) mandatory_weeks.insert(e.week);
        }

        for (PlayerId p : top30) {
            std::set<int> used_weeks = mandatory_weeks;
            for (auto [category, wanted] : {std::pair{Category::Tour500, config_.n_500_choices},
                                            std::pair{Category::Tour250, config_.n_250_choices}}) {
                for (int k = 0; k < wanted; ++k) {
                    std::optional<std::size_t> best;
                    for (std::size_t e = 0; e < cal.size(); ++e) {
                        if (cal[e].category != category || used_weeks.contains(cal[e].week)) continue;
                        if (committed[e].size() >= static_cast<std::size_t>(cal[e].draw_size)) continue;
                        if (!best || committed[e].size() < committed[*best].size() ||
                            (committed[e].size() == committed[*best].size() && priority[e] < priority[*best])) {
                            best = e;
                        }
                    }
                    if (!best) {
                        throw DomainError(fmt::format("calendar leaves no free {} event for a top-30 player",
                                                      to_string(category)));
                    }
                    committed[*best].insert(p);
                    used_weeks.insert(cal[*best].week);
                }
            }
        }
        return committed;
    }

    void simulate_year(int year, SeasonRun* record) {
        const auto start_order = ranking();
        std::set<PlayerId> top30;
        std::vector<std::set<PlayerId>> committed(config_.calendar.size());
        if (config_.top30_mandatory) {
            const std::vector<PlayerId> top(start_order.begin(), start_order.begin() + 30);
            top30.insert(top.begin(), top.end());
            committed = choose_optional_events(top);
        }

        for (int week = 1; week <= 52; ++week) {
            const Date date = week_date(year, week);
            play_week(week, date, top30, committed);

            for (std::size_t i = 0; i < players_.size(); ++i) {
                auto& results = players_[i].season_results;
                const Date oldest = date - std::chrono::days{kWindowDays - 1};
                std::erase_if(results, [&](const SeasonResult& r) { return r.date < oldest; });
                points_[i] = best_18_total(results, date);
            }

            if (record) {
                const auto order = ranking();
                for (std::size_t r = 0; r < order.size(); ++r) {
                    const PlayerId p = order[r];
                    record->rows.push_back(
                        {week, p, static_cast<int>(points_[static_cast<std::size_t>(p)]), static_cast<int>(r + 1)});
                }
            }
        }
    }

    void play_week(int week, Date date, const std::set<PlayerId>& top30,
                   const std::vector<std::set<PlayerId>>& committed) {
        const auto& events = weeks_[static_cast<std::size_t>(week)];
        if (events.empty()) return;
        const auto order = ranking();
        std::vector<int> rank_of(players_.size());
        for (std::size_t r = 0; r < order.size(); ++r) rank_of[static_cast<std::size_t>(order[r])] = static_cast<int>(r);

        std::vector<bool> busy(players_.size(), false);
        std::map<std::size_t, std::vector<PlayerId>> fields;

        // Categories in descending prestige; within one category, players are
        // dealt round-robin in rank order over that week's events.
        for (auto category : kCategories) {
            std::vector<std::size_t> group;
            for (std::size_t e : events) {
                if (config_.calendar[e].category == category) group.push_back(e);
            }
            if (group.empty()) continue;

            for (std::size_t e : group) {
                for (PlayerId p : order) {
                    if (committed[e].contains(p) && !busy[static_cast<std::size_t>(p)]) {
                        fields[e].push_back(p);
                        busy[static_cast<std::size_t>(p)] = true;
                    }
                }
            }

            std::vector<PlayerId> candidates;
            if (is_mandatory(category)) {
                for (PlayerId p : order) {
                    if (top30.contains(p)) candidates.push_back(p);
                }
            }
            for (PlayerId p : order) {
                if (!top30.contains(p)) candidates.push_back(p);
            }

            std::size_t turn = 0;
            for (PlayerId p : candidates) {
                if (busy[static_cast<std::size_t>(p)]) continue;
                std::optional<std::size_t> target;
                for (std::size_t k = 0; k < group.size(); ++k) {
                    const std::size_t e = group[(turn + k) % group.size()];
                    if (fields[e].size() < static_cast<std::size_t>(config_.calendar[e].draw_size)) {
                        target = e;
                        turn = (turn + k + 1) % group.size();
                        break;
                    }
                }
                if (!target) break;
                fields[*target].push_back(p);
                busy[static_cast<std::size_t>(p)] = true;
            }
        }

        for (std::size_t e : events) {
            auto& field = fields[e];
            const auto& ev = config_.calendar[e];
            if (field.size() != static_cast<std::size_t>(ev.draw_size)) {
                throw DomainError(fmt::format("week {}: only {} players available for a {}-draw {}", week,
                                              field.size(), ev.draw_size, to_string(ev.category)));
            }
            std::sort(field.begin(), field.end(), [&](PlayerId a, PlayerId b) {
                return rank_of[static_cast<std::size_t>(a)] < rank_of[static_cast<std::size_t>(b)];
            });
            const auto n_seeds = static_cast<std::size_t>(default_seed_count(ev.draw_size));
            const std::span<const PlayerId> all(field);
            Bracket bracket = place_seeds(ev.draw_size, all.first(n_seeds), rng_);
            bracket = fill_unseeded(std::move(bracket), all.subspan(n_seeds), rng_);
            const auto result = run_tournament(bracket, points_, config_.alpha, ev.category, table_, rng_,
                                               config_.point_floor);
            for (const auto& entrant : result.entrants) {
                players_[static_cast<std::size_t>(entrant.player)].season_results.push_back(
                    {ev.category, entrant.round_reached, entrant.points, date});
            }
        }
    }

    const SeasonConfig& config_;
    std::vector<SimPlayer> players_;
    Rng rng_;
    int season_index_;
    std::vector<int> tiebreak_;
    std::vector<double> points_;
    std::vector<std::vector<std::size_t>> weeks_;
    PointTable table_;
};

}  // namespace

SeasonRun run_season(const SeasonConfig& config, std::vector<SimPlayer> players, int season_index) {
    config.validate();
    return SeasonSimulator(config, std::move(players), season_index).run();
}

std::vector<SeasonRun> run_seasons(const SeasonConfig& config, const std::vector<SimPlayer>& players) {
    config.validate();
    std::vector<SeasonRun> runs(static_cast<std::size_t>(config.n_seasons));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (int s = next++; s < config.n_seasons; s = next++) {
            try {
                runs[static_cast<std::size_t>(s)] = SeasonSimulator(config, players, s).run();
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int n_threads = std::min(config.threads, config.n_seasons);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return runs;
}

std::vector<BandSummary> summarize_bands(const std::vector<SeasonRun>& runs) {
    if (runs.empty()) throw DomainError("no seasons to summarize");
    std::vector<BandSummary> out;
    for (int rank : {16, 32, 64}) {
        std::vector<int> values;
        for (const auto& r : runs) values.push_back(r.points_at_rank(rank));
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        const double median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
        const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
        out.push_back({rank, expected_points(rank), median, mean, values.front(), values.back()});
    }
    return out;
}

void write_season_report(std::ostream& out, const std::vector<SeasonRun>& runs) {
    out << "season,week,player,points,rank\n";
    for (const auto& run : runs) {
        for (const auto& row : run.rows) {
            out << run.season << ',' << row.week << ',' << row.player << ',' << row.points << ',' << row.rank << '\n';
        }
    }
}

void write_band_summary(std::ostream& out, const std::vector<BandSummary>& bands) {
    out << fmt::format("{:>6} {:>10} {:>12} {:>12} {:>8} {:>8}\n", "rank", "expected", "median", "mean", "min", "max");
    for (const auto& b : bands) {
        out << fmt::format("{:>6} {:>10} {:>12.6f} {:>12.6f} {:>8} {:>8}\n", b.rank, b.expected, b.median, b.mean, b.min,
                           b.max);
    }
}

}  // namespace atprank
