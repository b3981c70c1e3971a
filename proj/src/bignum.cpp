#include "fsmkit/bignum.hpp"

#include <algorithm>

namespace fsmkit {

BigUint::BigUint(std::uint64_t value) {
    limbs_.push_back(static_cast<std::uint32_t>(value & 0xffffffffULL));
    limbs_.push_back(static_cast<std::uint32_t>(value >> 32));
    trim();
}

void BigUint::trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::operator*=(std::uint64_t factor) {
    if (factor == 0) {
        limbs_ = {0};
        return *this;
    }
    // Split the factor so per-limb products fit in 64 bits.
    const std::uint64_t lo = factor & 0xffffffffULL;
    const std::uint64_t hi = factor >> 32;

    std::vector<std::uint32_t> result(limbs_.size() + 3, 0);
    auto add_at = [&result](std::size_t pos, std::uint64_t value) {
        while (value != 0) {
            if (pos >= result.size()) result.push_back(0);
            value += result[pos];
            result[pos] = static_cast<std::uint32_t>(value & 0xffffffffULL);
            value >>= 32;
            ++pos;
        }
    };
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        add_at(i, static_cast<std::uint64_t>(limbs_[i]) * lo);
        if (hi != 0) add_at(i + 1, static_cast<std::uint64_t>(limbs_[i]) * hi);
    }
    limbs_ = std::move(result);
    trim();
    return *this;
}

bool BigUint::fits_u64() const { return limbs_.size() <= 2; }

std::uint64_t BigUint::as_u64() const {
    std::uint64_t value = limbs_[0];
    if (limbs_.size() > 1) value |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    return value;
}

std::string BigUint::to_string() const {
    std::vector<std::uint32_t> work = limbs_;
    std::string digits;
    bool all_zero = std::all_of(work.begin(), work.end(), [](std::uint32_t l) { return l == 0; });
    if (all_zero) return "0";
    while (!std::all_of(work.begin(), work.end(), [](std::uint32_t l) { return l == 0; })) {
        std::uint64_t remainder = 0;
        for (std::size_t i = work.size(); i-- > 0;) {
            const std::uint64_t cur = (remainder << 32) | work[i];
            work[i] = static_cast<std::uint32_t>(cur / 10);
            remainder = cur % 10;
        }
        digits.push_back(static_cast<char>('0' + remainder));
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

}  // namespace fsmkit
