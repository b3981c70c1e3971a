#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace fsmkit {

/// splitmix64 — a tiny, portable, seedable generator (Steele, Lea & Flood,
/// "Fast splittable pseudorandom number generators"). All draws are pure
/// 64-bit integer arithmetic, so streams are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0, n). n must be positive.
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    bool chance(double p) {
        return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0) < p;
    }

    template <typename T>
    const T& pick(const std::vector<T>& xs) {
        return xs[below(xs.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            std::swap(xs[i - 1], xs[below(i)]);
        }
    }

    /// Knuth's product method; counts capped by callers where needed.
    int poisson(double mean);

    /// Independent substream for (seed, tag) pairs, e.g. one per oracle index.
    Rng fork(std::uint64_t tag) const {
        Rng child(state_ ^ (0x9e3779b97f4a7c15ULL * (tag + 0x632be59bd9b4e019ULL)));
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
};

/// FNV-1a, used to key deterministic substreams off text content.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace fsmkit
