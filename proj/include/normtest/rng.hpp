#pragma once

#include <cstdint>
#include <random>

namespace normtest {

using Rng = std::mt19937_64;

/// Independent stream families drawn from one master seed.
enum class StreamFamily : std::uint64_t {
    NullReplicate = 1,
    AlternativeReplicate = 2,
    SupportPoints = 3,
    LimitReplicate = 4,
    Generic = 5,
};

[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Generator for replication `index` of `family` under `seed`. Depends on nothing else,
/// so results do not change with the number of workers or the order of execution.
[[nodiscard]] inline Rng substream(std::uint64_t seed, StreamFamily family, std::uint64_t index) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (static_cast<std::uint64_t>(family) * 0xd1b54a32d192ed03ULL));
    s = splitmix64(s ^ index);
    return Rng(s);
}

}  // namespace normtest
