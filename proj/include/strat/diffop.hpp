#pragma once

// Divided-power partial derivatives, Lucas binomials mod p, and p-adic
// digit utilities.

#include <cstdint>
#include <string>
#include <vector>

#include "strat/poly.hpp"

namespace strat {

// C(h, k) mod p. For h >= 0 computed digit-wise via Lucas; for h < 0 via the
// reflection C(-m, k) = (-1)^k C(m+k-1, k).
std::uint32_t binom_mod_p(std::int64_t h, std::int64_t k, std::uint32_t p);

// The operator d^(k)/dx_i acting by x^h -> C(h,k) x^(h-k) on the named
// variable, extended linearly. k = 0 is the identity.
Poly divided_partial(const Poly& f, const std::string& var, std::int64_t k);

// A p-adic integer truncated to a fixed number of digits (digit h multiplies p^h).
struct DigitVector {
    std::uint32_t p = 2;
    std::vector<std::uint32_t> digits;

    bool operator==(const DigitVector& o) const { return p == o.p && digits == o.digits; }
    bool operator<(const DigitVector& o) const { return digits < o.digits; }
};

// First H+1 digits of a/b in Z_p; requires gcd(b, p) = 1.
DigitVector p_adic_digits(std::int64_t a, std::int64_t b, std::uint32_t p, int H);

} // namespace strat
