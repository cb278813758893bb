#pragma once

#include <cstdint>
#include <string_view>

namespace tollsim {

// Deterministic generator (splitmix64 core). All randomness in a run flows
// from one root seed through named substreams, so replays are bit-identical
// regardless of standard-library distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // decorrelate trivially related seeds
        next_u64();
        next_u64();
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [0,n) without modulo bias worth caring about at these scales
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_double() * static_cast<double>(n));
    }

    std::int64_t next_range(std::int64_t lo, std::int64_t hi) {  // inclusive bounds
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    Rng substream(std::string_view name) const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return Rng(state_ ^ h);
    }

    Rng substream(std::string_view name, std::uint64_t index) const {
        Rng r = substream(name);
        r.state_ ^= 0x5851F42D4C957F2Dull * (index + 1);
        return r;
    }

  private:
    std::uint64_t state_;
};

}  // namespace tollsim
