#pragma once

#include <atprank/date.hpp>
#include <atprank/kv.hpp>

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace atprank {

enum class Category { GrandSlam, Masters1000, Tour500, Tour250 };
enum class Round { W, F, SF, QF, R16, R32, R64, R128, Q };

inline constexpr std::array<Category, 4> kCategories = {Category::GrandSlam, Category::Masters1000,
                                                        Category::Tour500, Category::Tour250};
inline constexpr std::array<Round, 9> kRounds = {Round::W,   Round::F,   Round::SF,
                                                 Round::QF,  Round::R16, Round::R32,
                                                 Round::R64, Round::R128, Round::Q};

/// Events per calendar year: 4, 9, 13, 40.
int count_per_year(Category c);

std::string_view to_string(Category c);
std::string_view to_string(Round r);
std::optional<Category> parse_category(std::string_view text);
std::optional<Round> parse_round(std::string_view text);

/// Round reached by a player eliminated after `wins` wins in a draw of
/// `draw_size` (a power of two). wins == log2(draw_size) is W.
Round round_reached(int draw_size, int wins);

/// Which draw sizes select the parenthesised alternate of a cell.
using DrawAlternates = std::map<std::pair<Category, Round>, std::set<int>>;

/// Built-in mapping: Masters R64/R128 alternates for 96-draws (and the 128
/// bracket that stands in for them), 500/250 R32 alternates for 48-draws
/// (and 64).
DrawAlternates default_draw_alternates();

/// Reads lines like "Masters1000.R64 = 96,128". Keys absent from the file
/// keep their default mapping; an empty value clears it.
DrawAlternates parse_draw_alternates(const KeyValues& kv);

/// Round-to-points table per category. Cells carry a plain value, a
/// draw-size-dependent alternate, both, or neither.
class PointTable {
public:
    struct Cell {
        std::optional<int> value;
        std::optional<int> alternate;
    };

    explicit PointTable(DrawAlternates alternates = default_draw_alternates());

    static const PointTable& standard();

    /// Plain value by default; the alternate when draw_size is one the
    /// mapping assigns to that cell. A cell with only an alternate scores 0
    /// outside its mapped draw sizes. Blank cells throw DomainError.
    int points_for(Category c, Round r, std::optional<int> draw_size = std::nullopt) const;

    const Cell& cell(Category c, Round r) const;
    const DrawAlternates& alternates() const { return alternates_; }

    /// Rows "category,round,points,alternate" for every non-blank cell.
    void write_delimited(std::ostream& out) const;

private:
    DrawAlternates alternates_;
};

int points_for(Category c, Round r, std::optional<int> draw_size = std::nullopt);

struct SeasonResult {
    Category category;
    Round round;
    int points;
    Date date;
};

using PlayerSeason = std::vector<SeasonResult>;

/// Days back from as_of still inside the 52-week window: a result dated
/// as_of - 363 counts, one dated as_of - 364 does not.
inline constexpr int kWindowDays = 364;

/// Sum of the 18 largest point entries dated within the 52 weeks ending at
/// (and including) as_of. Entries after as_of are ignored.
int best_18_total(std::span<const SeasonResult> results, Date as_of);

/// Expected total for an idealised player who exits every event at the
/// round matching his rank band: 4 Grand Slams, 8 Masters, 3 x 500, 3 x 250.
int expected_points(int rank_band);
double expected_ratio_to_32(int rank_band);

struct ScheduleEntry {
    Category category;
    int events;
    Round round;
    std::optional<int> draw_size;
};

/// The per-band schedule expected_points sums over.
std::vector<ScheduleEntry> expected_schedule(int rank_band);

}  // namespace atprank
