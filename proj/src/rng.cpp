#include "fsmkit/rng.hpp"

#include <cmath>

namespace fsmkit {

int Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    double product = 1.0;
    int count = -1;
    do {
        product *= static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
        ++count;
    } while (product > limit);
    return count;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace fsmkit
