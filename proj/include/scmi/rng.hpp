#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace scmi {

// Deterministic random source. The generator algorithm is pinned so seeded
// runs reproduce the same stream: mt19937_64 with 53-bit uniforms, normals
// by Box-Muller, categorical draws by CDF inversion. Substreams for shards
// and chains are derived with splitmix64, never by jumping the engine.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // In [0, 1); 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal(double mean, double stddev);

    // Index into probs by inverse CDF; probs need not be normalized exactly,
    // the last bucket absorbs rounding slack.
    std::size_t categorical(const std::vector<double>& probs);

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// Derives the seed of substream `index` from a master seed (splitmix64 of
// the mixed pair). Distinct indices give independent-quality streams and
// the mapping is stable across platforms.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

}  // namespace scmi
