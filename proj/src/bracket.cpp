#include <atprank/bracket.hpp>
#include <atprank/error.hpp>
#include <atprank/model.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace atprank {

bool is_supported_draw(int draw_size) { return draw_size == 32 || draw_size == 64 || draw_size == 128; }

int default_seed_count(int draw_size) {
    if (!is_supported_draw(draw_size)) throw DomainError(fmt::format("unsupported draw size {}", draw_size));
    return draw_size / 4;
}

Bracket::Bracket(int draw_size) {
    if (!is_supported_draw(draw_size)) {
        throw DomainError(fmt::format("unsupported draw size {} (expected 32, 64 or 128)", draw_size));
    }
    slots_.resize(static_cast<std::size_t>(draw_size));
}

std::optional<PlayerId> Bracket::at(int slot) const {
    if (slot < 1 || slot > draw_size()) throw DomainError(fmt::format("slot {} out of range", slot));
    return slots_[static_cast<std::size_t>(slot - 1)];
}

void Bracket::assign(int slot, PlayerId player) {
    if (slot < 1 || slot > draw_size()) throw DomainError(fmt::format("slot {} out of range", slot));
    auto& s = slots_[static_cast<std::size_t>(slot - 1)];
    if (s) throw DomainError(fmt::format("slot {} already taken", slot));
    if (slot_of(player)) throw DomainError(fmt::format("player {} already placed", player));
    s = player;
}

std::optional<int> Bracket::slot_of(PlayerId player) const {
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (slots_[i] == player) return static_cast<int>(i + 1);
    }
    return std::nullopt;
}

std::vector<int> Bracket::open_slots() const {
    std::vector<int> open;
    for (std::size_t i = 0; i < slots_.size(); ++i) {
        if (!slots_[i]) open.push_back(static_cast<int>(i + 1));
    }
    return open;
}

bool Bracket::complete() const {
    return std::all_of(slots_.begin(), slots_.end(), [](const auto& s) { return s.has_value(); });
}

std::vector<PlayerId> Bracket::lineup() const {
    if (!complete()) throw DomainError("bracket is incomplete");
    std::vector<PlayerId> out;
    out.reserve(slots_.size());
    for (const auto& s : slots_) out.push_back(*s);
    return out;
}

std::vector<std::vector<int>> seed_slot_groups(int draw_size, int n_seeds) {
    if (!is_supported_draw(draw_size)) throw DomainError(fmt::format("unsupported draw size {}", draw_size));
    if ((n_seeds != 8 && n_seeds != 16 && n_seeds != 32) || n_seeds > draw_size / 4) {
        throw DomainError(fmt::format("unsupported seed count {} for a {}-draw", n_seeds, draw_size));
    }
    const int n = draw_size;
    std::vector<std::vector<int>> groups = {{1}, {n}, {n / 4 + 1, 3 * n / 4}};
    std::set<int> taken = {1, n, n / 4 + 1, 3 * n / 4};

    // Seeds 5-8, 9-16, ...: every parent section holds one higher seed; the
    // new seed takes the far end of the parent's empty half.
    for (int seeded = 4; seeded < n_seeds; seeded *= 2) {
        const int parent = n / seeded;
        const int half = parent / 2;
        std::vector<int> group;
        for (int lo = 1; lo <= n; lo += parent) {
            const int hi = lo + parent - 1;
            auto it = taken.lower_bound(lo);
            if (it == taken.end() || *it > hi) throw DomainError("seed layout invariant broken");
            const int occupied = *it;
            group.push_back(occupied < lo + half ? hi : lo);
        }
        for (int s : group) taken.insert(s);
        groups.push_back(std::move(group));
    }
    return groups;
}

namespace {

void require_distinct(std::span<const PlayerId> players, const char* what) {
    std::set<PlayerId> seen(players.begin(), players.end());
    if (seen.size() != players.size()) throw DomainError(fmt::format("{} contain duplicates", what));
}

}  // namespace

Bracket assign_seeds(int draw_size, std::span<const PlayerId> seeds_in_order,
                     std::span<const std::vector<int>> ballot) {
    require_distinct(seeds_in_order, "seeds");
    const auto groups = seed_slot_groups(draw_size, static_cast<int>(seeds_in_order.size()));
    if (ballot.size() != groups.size()) throw DomainError("ballot does not match the seed groups");

    Bracket bracket(draw_size);
    std::size_t next_seed = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        auto expected = groups[g];
        auto given = ballot[g];
        std::sort(expected.begin(), expected.end());
        std::sort(given.begin(), given.end());
        if (expected != given) throw DomainError(fmt::format("ballot group {} is not a permutation of its slots", g));
        for (int slot : ballot[g]) {
            const PlayerId p = seeds_in_order[next_seed];
            bracket.assign(slot, p);
            bracket.add_seed(static_cast<int>(next_seed + 1), p);
            ++next_seed;
        }
    }
    return bracket;
}

Bracket place_seeds(int draw_size, std::span<const PlayerId> seeds_in_order, Rng& rng) {
    auto ballot = seed_slot_groups(draw_size, static_cast<int>(seeds_in_order.size()));
    for (auto& group : ballot) rng.shuffle(std::span<int>(group));
    return assign_seeds(draw_size, seeds_in_order, ballot);
}

Bracket fill_unseeded(Bracket bracket, std::span<const PlayerId> unseeded, Rng& rng) {
    const auto open = bracket.open_slots();
    if (open.size() != unseeded.size()) {
        throw DomainError(fmt::format("{} open slots but {} unseeded players", open.size(), unseeded.size()));
    }
    require_distinct(unseeded, "unseeded players");
    std::vector<PlayerId> order(unseeded.begin(), unseeded.end());
    rng.shuffle(std::span<PlayerId>(order));
    for (std::size_t i = 0; i < open.size(); ++i) bracket.assign(open[i], order[i]);
    return bracket;
}

Round meeting_round(int draw_size, int slot_a, int slot_b) {
    if (slot_a == slot_b || slot_a < 1 || slot_b < 1 || slot_a > draw_size || slot_b > draw_size) {
        throw DomainError(fmt::format("invalid slot pair ({}, {})", slot_a, slot_b));
    }
    const auto diff = static_cast<unsigned>((slot_a - 1) ^ (slot_b - 1));
    const int level = std::bit_width(diff);
    return round_reached(draw_size, level - 1);
}

double match_win_probability(double alpha, double r_i, double r_j) {
    if (std::isnan(alpha) || alpha < 0.0) throw DomainError(fmt::format("alpha must be nonnegative, got {}", alpha));
    if (!(r_i > 0.0) || !(r_j > 0.0)) throw DomainError("match points must be positive");
    if (alpha == 0.0) return 0.5;
    if (std::isinf(alpha)) return r_i > r_j ? 1.0 : (r_i < r_j ? 0.0 : 0.5);
    return logistic_ratio(alpha, r_i / r_j);
}

namespace {

// Rounds a table leaves blank (e.g. R64 in a 64-slot 500) award nothing.
int awarded(const PointTable& table, Category c, Round r, int draw_size) {
    const auto& cell = table.cell(c, r);
    if (!cell.value && !cell.alternate) return 0;
    return table.points_for(c, r, draw_size);
}

}  // namespace

TournamentResult run_tournament(const Bracket& bracket, std::span<const double> points_by_player, double alpha,
                                Category category, const PointTable& table, Rng& rng, double point_floor) {
    const auto lineup = bracket.lineup();
    const int n = bracket.draw_size();
    std::vector<double> strength(lineup.size());
    for (std::size_t i = 0; i < lineup.size(); ++i) {
        const PlayerId p = lineup[i];
        if (p < 0 || static_cast<std::size_t>(p) >= points_by_player.size()) {
            throw DomainError(fmt::format("player {} has no points entry", p));
        }
        strength[i] = std::max(points_by_player[static_cast<std::size_t>(p)], point_floor);
    }

    std::vector<int> wins(lineup.size(), 0);
    std::vector<std::size_t> alive(lineup.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
    while (alive.size() > 1) {
        std::vector<std::size_t> next;
        next.reserve(alive.size() / 2);
        for (std::size_t k = 0; k + 1 < alive.size(); k += 2) {
            const std::size_t a = alive[k];
            const std::size_t b = alive[k + 1];
            const double p = match_win_probability(alpha, strength[a], strength[b]);
            const std::size_t w = rng.uniform() < p ? a : b;
            ++wins[w];
            next.push_back(w);
        }
        alive = std::move(next);
    }

    TournamentResult result;
    result.champion = lineup[alive.front()];
    result.entrants.reserve(lineup.size());
    for (std::size_t i = 0; i < lineup.size(); ++i) {
        const Round r = round_reached(n, wins[i]);
        result.entrants.push_back({lineup[i], static_cast<int>(i + 1), wins[i], r, awarded(table, category, r, n)});
    }
    return result;
}

int total_awarded_points(Category category, int draw_size, const PointTable& table) {
    if (!is_supported_draw(draw_size)) throw DomainError(fmt::format("unsupported draw size {}", draw_size));
    const int rounds = std::countr_zero(static_cast<unsigned>(draw_size));
    int total = 0;
    for (int w = 0; w <= rounds; ++w) {
        const int population = w == rounds ? 1 : draw_size >> (w + 1);
        total += population * awarded(table, category, round_reached(draw_size, w), draw_size);
    }
    return total;
}

}  // namespace atprank
