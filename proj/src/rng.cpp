#include <atprank/rng.hpp>
#include <atprank/error.hpp>

namespace atprank {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw DomainError("Rng::below(0)");
    // Largest multiple of n representable; draws at or above it are rejected.
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % n + 1) % n;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x <= limit) return x % n;
    }
}

}  // namespace atprank
