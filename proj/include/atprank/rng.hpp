#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace atprank {

/// Portable random stream: std::mt19937_64 seeded through std::seed_seq from
/// (seed, stream), both of which the standard specifies bit-exactly. The
/// distribution helpers below are hand-written because the std:: ones are
/// implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [0, n), n > 0, by rejection (no modulo bias).
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform() < p; }

    /// Fisher-Yates.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            using std::swap;
            swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace atprank
