#include <atprank/bracket.hpp>
#include <atprank/error.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace atprank {
namespace {

std::vector<PlayerId> ids(int n, int first = 0) {
    std::vector<PlayerId> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), first);
    return v;
}

// Earliest round two seeds may meet, by the larger seed number: seeds 1-2
// not before F, 1-4 not before SF, 1-8 not before QF, and so on.
Round earliest_allowed(int wider_seed) {
    if (wider_seed <= 2) return Round::F;
    if (wider_seed <= 4) return Round::SF;
    if (wider_seed <= 8) return Round::QF;
    if (wider_seed <= 16) return Round::R16;
    return Round::R32;
}

// Rounds ordered from first to last played.
int stage(Round r) {
    switch (r) {
        case Round::R128: return 0;
        case Round::R64: return 1;
        case Round::R32: return 2;
        case Round::R16: return 3;
        case Round::QF: return 4;
        case Round::SF: return 5;
        case Round::F: return 6;
        default: return 7;
    }
}

int protection_violations(const Bracket& b) {
    int bad = 0;
    const auto& seeds = b.seeds();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        for (std::size_t j = i + 1; j < seeds.size(); ++j) {
            const int si = *b.slot_of(seeds[i].second);
            const int sj = *b.slot_of(seeds[j].second);
            const Round meet = meeting_round(b.draw_size(), si, sj);
            if (stage(meet) < stage(earliest_allowed(std::max(seeds[i].first, seeds[j].first)))) ++bad;
        }
    }
    return bad;
}

std::vector<std::vector<std::vector<int>>> all_ballots(const std::vector<std::vector<int>>& groups) {
    std::vector<std::vector<std::vector<int>>> out = {{}};
    for (auto group : groups) {
        std::sort(group.begin(), group.end());
        std::vector<std::vector<std::vector<int>>> next;
        do {
            for (const auto& prefix : out) {
                auto b = prefix;
                b.push_back(group);
                next.push_back(std::move(b));
            }
        } while (std::next_permutation(group.begin(), group.end()));
        out = std::move(next);
    }
    return out;
}

TEST(SeedGroups, ThirtyTwoDraw) {
    const auto g = seed_slot_groups(32, 8);
    ASSERT_EQ(g.size(), 4u);
    EXPECT_EQ(g[0], std::vector<int>{1});
    EXPECT_EQ(g[1], std::vector<int>{32});
    EXPECT_EQ(std::set<int>(g[2].begin(), g[2].end()), (std::set<int>{9, 24}));
    EXPECT_EQ(std::set<int>(g[3].begin(), g[3].end()), (std::set<int>{8, 16, 17, 25}));
}

TEST(SeedGroups, LargerDraws) {
    const auto g64 = seed_slot_groups(64, 16);
    ASSERT_EQ(g64.size(), 5u);
    EXPECT_EQ(std::set<int>(g64[2].begin(), g64[2].end()), (std::set<int>{17, 48}));
    EXPECT_EQ(std::set<int>(g64[3].begin(), g64[3].end()), (std::set<int>{16, 32, 33, 49}));
    EXPECT_EQ(std::set<int>(g64[4].begin(), g64[4].end()), (std::set<int>{8, 9, 24, 25, 40, 41, 56, 57}));
    const auto g128 = seed_slot_groups(128, 32);
    ASSERT_EQ(g128.size(), 6u);
    EXPECT_EQ(std::set<int>(g128[2].begin(), g128[2].end()), (std::set<int>{33, 96}));
    EXPECT_EQ(std::set<int>(g128[3].begin(), g128[3].end()), (std::set<int>{32, 64, 65, 97}));
    EXPECT_EQ(g128[5].size(), 16u);
}

TEST(SeedGroups, RejectsUnsupportedSizes) {
    EXPECT_THROW(seed_slot_groups(48, 8), DomainError);
    EXPECT_THROW(seed_slot_groups(32, 16), DomainError);
    EXPECT_THROW(seed_slot_groups(64, 4), DomainError);
    EXPECT_THROW(Bracket(16), DomainError);
}

TEST(PlaceSeeds, ThirtyTwoDrawAnchors) {
    Rng rng(99);
    const auto seeds = ids(8, 100);
    for (int trial = 0; trial < 200; ++trial) {
        const Bracket b = place_seeds(32, seeds, rng);
        EXPECT_EQ(b.at(1), 100);
        EXPECT_EQ(b.at(32), 101);
        EXPECT_EQ((std::set<int>{*b.slot_of(102), *b.slot_of(103)}), (std::set<int>{9, 24}));
        std::set<int> mid;
        for (int s = 104; s < 108; ++s) mid.insert(*b.slot_of(s));
        EXPECT_EQ(mid, (std::set<int>{8, 16, 17, 25}));
        ASSERT_EQ(b.seeds().size(), 8u);
        EXPECT_EQ(b.seeds()[2], (std::pair<int, PlayerId>{3, 102}));
    }
}

TEST(PlaceSeeds, ExhaustiveBallotsGiveFortyEightPlacementsWithoutViolations) {
    const auto seeds = ids(8);
    const auto ballots = all_ballots(seed_slot_groups(32, 8));
    ASSERT_EQ(ballots.size(), 48u);  // 2! * 4!
    std::set<std::vector<int>> placements;
    for (const auto& ballot : ballots) {
        const Bracket b = assign_seeds(32, seeds, ballot);
        std::vector<int> where;
        for (PlayerId p : seeds) where.push_back(*b.slot_of(p));
        placements.insert(where);
        EXPECT_EQ(protection_violations(b), 0);
    }
    EXPECT_EQ(placements.size(), 48u);
}

TEST(PlaceSeeds, RandomBallotsReachEveryPlacement) {
    Rng rng(5);
    const auto seeds = ids(8);
    std::set<std::vector<int>> placements;
    for (int trial = 0; trial < 5000; ++trial) {
        const Bracket b = place_seeds(32, seeds, rng);
        std::vector<int> where;
        for (PlayerId p : seeds) where.push_back(*b.slot_of(p));
        placements.insert(where);
    }
    EXPECT_EQ(placements.size(), 48u);
}

TEST(PlaceSeeds, LargerDrawsKeepProtection) {
    Rng rng(17);
    for (auto [draw, n] : {std::pair{64, 16}, {128, 32}, {128, 8}}) {
        for (int trial = 0; trial < 300; ++trial) {
            const Bracket b = place_seeds(draw, ids(n), rng);
            EXPECT_EQ(protection_violations(b), 0) << draw << '/' << n;
        }
    }
}

TEST(PlaceSeeds, RejectsDuplicatesAndBadBallots) {
    Rng rng(1);
    std::vector<PlayerId> dup = {1, 2, 3, 4, 5, 6, 7, 7};
    EXPECT_THROW(place_seeds(32, dup, rng), DomainError);
    auto ballot = seed_slot_groups(32, 8);
    ballot[3][0] = 2;
    EXPECT_THROW(assign_seeds(32, ids(8), ballot), DomainError);
}

TEST(FillUnseeded, FillsOpenSlotsWithAPermutation) {
    Rng rng(3);
    Bracket b = place_seeds(32, ids(8), rng);
    const auto unseeded = ids(24, 8);
    const Bracket full = fill_unseeded(b, unseeded, rng);
    ASSERT_TRUE(full.complete());
    auto lineup = full.lineup();
    std::sort(lineup.begin(), lineup.end());
    EXPECT_EQ(lineup, ids(32));
    for (int s = 1; s <= 32; ++s) {
        if (b.at(s)) EXPECT_EQ(full.at(s), b.at(s));
    }
}

TEST(FillUnseeded, NothingToFill) {
    Rng rng(3);
    const Bracket full = fill_unseeded(place_seeds(32, ids(8), rng), ids(24, 8), rng);
    const Bracket again = fill_unseeded(full, {}, rng);
    EXPECT_EQ(again.lineup(), full.lineup());
}

TEST(FillUnseeded, DeterministicForFixedSeed) {
    auto draw = [] {
        Rng rng(2024);
        return fill_unseeded(place_seeds(64, ids(16), rng), ids(48, 16), rng).lineup();
    };
    EXPECT_EQ(draw(), draw());
}

TEST(FillUnseeded, CountMismatch) {
    Rng rng(3);
    const Bracket b = place_seeds(32, ids(8), rng);
    EXPECT_THROW(fill_unseeded(b, ids(23, 8), rng), DomainError);
    EXPECT_THROW(Bracket(32).lineup(), DomainError);
}

TEST(MeetingRound, Examples) {
    EXPECT_EQ(meeting_round(32, 1, 2), Round::R32);
    EXPECT_EQ(meeting_round(32, 1, 32), Round::F);
    EXPECT_EQ(meeting_round(32, 1, 9), Round::SF);
    EXPECT_EQ(meeting_round(32, 9, 16), Round::QF);
    EXPECT_EQ(meeting_round(128, 1, 128), Round::F);
    EXPECT_EQ(meeting_round(128, 3, 4), Round::R128);
}

std::vector<double> points_desc(int n) {
    std::vector<double> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts[static_cast<std::size_t>(i)] = 10000.0 - 37.0 * i;
    return pts;
}

TEST(RunTournament, InfiniteAlphaIsChalk) {
    Rng rng(8);
    const auto pts = points_desc(128);
    for (int draw : {32, 64, 128}) {
        const int n_seeds = draw / 4;
        const Bracket b = fill_unseeded(place_seeds(draw, ids(n_seeds), rng), ids(draw - n_seeds, n_seeds), rng);
        const auto result = run_tournament(b, pts, std::numeric_limits<double>::infinity(), Category::GrandSlam,
                                           PointTable::standard(), rng);
        EXPECT_EQ(result.champion, 0);
        for (const auto& e : result.entrants) {
            if (e.player == 1) EXPECT_EQ(e.round_reached, Round::F);
            if (e.player == 0) EXPECT_EQ(e.round_reached, Round::W);
        }
        // Chalk: every player reaches at least the round their seed is built for.
        for (const auto& e : result.entrants) {
            if (e.player >= 2 && e.player < 4) EXPECT_EQ(e.round_reached, Round::SF);
            if (e.player >= 4 && e.player < 8) EXPECT_EQ(e.round_reached, Round::QF);
        }
    }
}

TEST(RunTournament, GrandSlamChampionGetsTwoThousand) {
    Rng rng(4);
    const Bracket b = fill_unseeded(place_seeds(128, ids(32), rng), ids(96, 32), rng);
    const auto result = run_tournament(b, points_desc(128), 0.8722, Category::GrandSlam, PointTable::standard(), rng);
    for (const auto& e : result.entrants) {
        if (e.player == result.champion) EXPECT_EQ(e.points, 2000);
    }
}

TEST(RunTournament, ConservationAndRoundPopulations) {
    // population x points summed by hand over each table row.
    const std::vector<std::tuple<Category, int, int>> golden = {
        {Category::GrandSlam, 128, 11040}, {Category::Masters1000, 64, 4800}, {Category::Masters1000, 128, 5920},
        {Category::Tour500, 32, 1880},     {Category::Tour500, 64, 2200},     {Category::Tour250, 32, 920},
        {Category::Tour250, 64, 1000}};
    Rng rng(12);
    for (const auto& [cat, draw, total] : golden) {
        EXPECT_EQ(total_awarded_points(cat, draw, PointTable::standard()), total);
        for (int trial = 0; trial < 20; ++trial) {
            const int n_seeds = draw / 4;
            const Bracket b = fill_unseeded(place_seeds(draw, ids(n_seeds), rng), ids(draw - n_seeds, n_seeds), rng);
            const auto result = run_tournament(b, points_desc(128), 0.8722, cat, PointTable::standard(), rng);
            int sum = 0;
            std::map<int, int> by_wins;
            for (const auto& e : result.entrants) {
                sum += e.points;
                ++by_wins[e.wins];
            }
            EXPECT_EQ(sum, total);
            int rounds = 0;
            while ((1 << rounds) < draw) ++rounds;
            EXPECT_EQ(by_wins[rounds], 1);
            for (int w = 0; w < rounds; ++w) EXPECT_EQ(by_wins[w], draw >> (w + 1));
        }
    }
}

TEST(RunTournament, EqualPointsGiveUniformChampion) {
    Rng rng(31337);
    const std::vector<double> pts(32, 500.0);
    const Bracket b = fill_unseeded(place_seeds(32, ids(8), rng), ids(24, 8), rng);
    std::vector<long> wins(32, 0);
    const long runs = 1'000'000;
    for (long k = 0; k < runs; ++k) {
        ++wins[static_cast<std::size_t>(run_tournament(b, pts, 0.8722, Category::Tour250, PointTable::standard(), rng).champion)];
    }
    const double expected = runs / 32.0;
    double chi2 = 0.0;
    for (long w : wins) chi2 += (w - expected) * (w - expected) / expected;
    EXPECT_LT(chi2, 61.10);  // chi-square, 31 dof, p = 0.001
}

TEST(RunTournament, FloorAppliesToZeroPointEntrants) {
    Rng rng(2);
    const std::vector<double> pts(32, 0.0);
    const Bracket b = fill_unseeded(place_seeds(32, ids(8), rng), ids(24, 8), rng);
    EXPECT_NO_THROW(run_tournament(b, pts, 0.8722, Category::Tour250, PointTable::standard(), rng));
    EXPECT_THROW(run_tournament(Bracket(32), pts, 0.8722, Category::Tour250, PointTable::standard(), rng), DomainError);
}

TEST(MatchWinProbability, Limits) {
    EXPECT_EQ(match_win_probability(0.0, 10, 1000), 0.5);
    EXPECT_EQ(match_win_probability(std::numeric_limits<double>::infinity(), 10, 1000), 0.0);
    EXPECT_EQ(match_win_probability(std::numeric_limits<double>::infinity(), 1000, 10), 1.0);
    EXPECT_NEAR(match_win_probability(1.0, 2000, 1000), 2.0 / 3.0, 1e-15);
    EXPECT_THROW(match_win_probability(-1.0, 1, 1), DomainError);
}

}  // namespace
}  // namespace atprank
