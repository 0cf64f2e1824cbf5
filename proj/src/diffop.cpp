#include "strat/diffop.hpp"

#include <numeric>

namespace strat {

namespace {

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
    std::uint32_t r = 1, base = a % p;
    for (std::uint32_t e = p - 2; e; e >>= 1) {
        if (e & 1) r = static_cast<std::uint64_t>(r) * base % p;
        base = static_cast<std::uint64_t>(base) * base % p;
    }
    return r;
}

// C(h, k) mod p for 0 <= h, k < p, by factorials.
std::uint32_t small_binom(std::uint32_t h, std::uint32_t k, std::uint32_t p) {
    if (k > h) return 0;
    std::uint32_t num = 1, den = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        num = static_cast<std::uint64_t>(num) * ((h - i) % p) % p;
        den = static_cast<std::uint64_t>(den) * ((i + 1) % p) % p;
    }
    return static_cast<std::uint64_t>(num) * mod_inverse(den, p) % p;
}

} // namespace

std::uint32_t binom_mod_p(std::int64_t h, std::int64_t k, std::uint32_t p) {
    if (k < 0) return 0;
    if (k == 0) return 1;
    if (h < 0) {
        // C(-m, k) = (-1)^k C(m+k-1, k)
        std::uint32_t c = binom_mod_p(-h + k - 1, k, p);
        if (k % 2 == 0) return c;
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(p - c)) % p);
    }
    if (k > h) return 0;
    std::uint64_t hh = static_cast<std::uint64_t>(h), kk = static_cast<std::uint64_t>(k);
    std::uint32_t result = 1;
    while (kk > 0 || hh > 0) {
        std::uint32_t hd = static_cast<std::uint32_t>(hh % p);
        std::uint32_t kd = static_cast<std::uint32_t>(kk % p);
        result = static_cast<std::uint64_t>(result) * small_binom(hd, kd, p) % p;
        if (result == 0) return 0;
        hh /= p;
        kk /= p;
    }
    return result;
}

Poly divided_partial(const Poly& f, const std::string& var, std::int64_t k) {
    const auto& ring = f.ring();
    const std::size_t vi = ring->index(var);
    if (k < 0) throw Error(Errc::IndexOutOfRange, "order must be >= 0");
    if (k == 0) return f;
    const std::uint32_t p = ring->spec()->p();
    Poly out(ring);
    for (const auto& [e, c] : f.terms()) {
        std::uint32_t b = binom_mod_p(e[vi], k, p);
        if (b == 0) continue;
        Exponents ne = e;
        ne[vi] -= k;
        // h >= 0 and h < k has b = 0, so ne[vi] is never negative here
        // unless the variable is Laurent.
        out.add_term(ne, c * FieldElement::from_int(ring->spec(), b));
    }
    return out;
}

DigitVector p_adic_digits(std::int64_t a, std::int64_t b, std::uint32_t p, int H) {
    if (b == 0 || std::gcd(b, static_cast<std::int64_t>(p)) != 1)
        throw Error(Errc::DenominatorDivisibleByP, "denominator " + std::to_string(b));
    if (H < 0) throw Error(Errc::IndexOutOfRange, "H must be >= 0");
    DigitVector dv;
    dv.p = p;
    dv.digits.reserve(H + 1);
    std::int64_t pp = p;
    auto mod = [&](std::int64_t x) { return static_cast<std::uint32_t>(((x % pp) + pp) % pp); };
    std::int64_t num = a;
    std::uint32_t binv = mod_inverse(mod(b), p);
    for (int h = 0; h <= H; ++h) {
        std::uint32_t d = static_cast<std::uint64_t>(mod(num)) * binv % p;
        dv.digits.push_back(d);
        num = (num - static_cast<std::int64_t>(d) * b) / pp; // exact by construction
    }
    return dv;
}

} // namespace strat
