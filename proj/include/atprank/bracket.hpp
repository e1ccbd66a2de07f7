#pragma once

#include <atprank/points.hpp>
#include <atprank/rng.hpp>

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace atprank {

using PlayerId = int;

/// A single-elimination draw of 32, 64 or 128 slots. Slots are 1-based in
/// the public interface; slot 1 is the top line of the draw.
class Bracket {
public:
    explicit Bracket(int draw_size);

    int draw_size() const { return static_cast<int>(slots_.size()); }

    std::optional<PlayerId> at(int slot) const;
    void assign(int slot, PlayerId player);

    /// Seed number -> player, in seed order.
    const std::vector<std::pair<int, PlayerId>>& seeds() const { return seeds_; }
    void add_seed(int seed, PlayerId player) { seeds_.emplace_back(seed, player); }

    /// 1-based slot of a player, if placed.
    std::optional<int> slot_of(PlayerId player) const;

    std::vector<int> open_slots() const;
    bool complete() const;

    /// Slot contents in slot order; complete brackets only.
    std::vector<PlayerId> lineup() const;

private:
    std::vector<std::optional<PlayerId>> slots_;
    std::vector<std::pair<int, PlayerId>> seeds_;
};

bool is_supported_draw(int draw_size);

/// Seeds a draw of this size takes by default: draw_size / 4.
int default_seed_count(int draw_size);

/// Candidate slots per seed group: {1}, {draw}, {3-4 slots}, {5-8 slots}, ...
/// until n_seeds seeds are covered. For a 32-draw with 8 seeds this is
/// {1}, {32}, {9, 24}, {8, 16, 17, 25}.
std::vector<std::vector<int>> seed_slot_groups(int draw_size, int n_seeds);

/// Places seeds according to a fixed ballot: ballot[g] is a permutation of
/// seed_slot_groups(...)[g], and the g-th group's seeds (in seed order)
/// take those slots in that order.
Bracket assign_seeds(int draw_size, std::span<const PlayerId> seeds_in_order,
                     std::span<const std::vector<int>> ballot);

/// Draws a uniformly random ballot per group and places the seeds.
Bracket place_seeds(int draw_size, std::span<const PlayerId> seeds_in_order, Rng& rng);

/// Uniform random assignment of the unseeded players to the open slots.
Bracket fill_unseeded(Bracket bracket, std::span<const PlayerId> unseeded, Rng& rng);

/// Round in which the players on two slots would meet if both kept winning.
Round meeting_round(int draw_size, int slot_a, int slot_b);

/// P(i beats j) as the simulator uses it: the logistic ratio model for
/// finite alpha > 0, a fair coin at alpha == 0, and "more points wins" when
/// alpha is infinite.
double match_win_probability(double alpha, double r_i, double r_j);

struct EntrantResult {
    PlayerId player;
    int slot;
    int wins;
    Round round_reached;
    int points;
};

struct TournamentResult {
    std::vector<EntrantResult> entrants;  // slot order
    PlayerId champion;
};

/// Plays the draw out: slot 1 vs 2, 3 vs 4, ..., winners re-paired in order.
/// points_by_player is indexed by PlayerId; values below point_floor are
/// raised to it before entering the model.
TournamentResult run_tournament(const Bracket& bracket, std::span<const double> points_by_player,
                                double alpha, Category category, const PointTable& table,
                                Rng& rng, double point_floor = 1.0);

/// Total points a full draw awards: sum over rounds of population x points.
int total_awarded_points(Category category, int draw_size, const PointTable& table);

}  // namespace atprank
