#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fsmkit {

/// Unsigned arbitrary-precision integer, just big enough for domain-size
/// products (multiply by small factors, compare, print).
class BigUint {
public:
    BigUint() : limbs_{0} {}
    explicit BigUint(std::uint64_t value);

    BigUint& operator*=(std::uint64_t factor);

    bool fits_u64() const;
    std::uint64_t as_u64() const;  // requires fits_u64()
    std::string to_string() const;

    friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }
    friend bool operator==(const BigUint& a, std::uint64_t b) { return a.fits_u64() && a.as_u64() == b; }

private:
    std::vector<std::uint32_t> limbs_;  // little-endian base 2^32
    void trim();
};

}  // namespace fsmkit
