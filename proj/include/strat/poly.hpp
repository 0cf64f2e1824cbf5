#pragma once

// Sparse multivariate polynomials (per-variable Laurent optional) over a
// FieldSpec. Terms are kept in lexicographic order on exponent vectors in
// ring variable order, which is also the canonical serialization order.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "strat/gf.hpp"

namespace strat {

class PolyRing;
using PolyRingPtr = std::shared_ptr<const PolyRing>;

class PolyRing {
public:
    PolyRing(FieldSpecPtr spec, std::vector<std::string> vars, std::vector<bool> laurent);

    const FieldSpecPtr& spec() const noexcept { return spec_; }
    const std::vector<std::string>& vars() const noexcept { return vars_; }
    const std::vector<bool>& laurent() const noexcept { return laurent_; }
    std::size_t nvars() const noexcept { return vars_.size(); }
    std::size_t index(const std::string& var) const; // throws UnknownVariable
    bool has_var(const std::string& var) const noexcept;

    bool operator==(const PolyRing& o) const noexcept;

private:
    FieldSpecPtr spec_;
    std::vector<std::string> vars_;
    std::vector<bool> laurent_;
};

PolyRingPtr make_ring(FieldSpecPtr spec, std::vector<std::string> vars,
                      std::vector<bool> laurent = {});

using Exponents = std::vector<std::int64_t>;

class Poly {
public:
    explicit Poly(PolyRingPtr ring); // zero
    static Poly constant(const PolyRingPtr& ring, const FieldElement& c);
    static Poly constant(const PolyRingPtr& ring, std::int64_t n);
    static Poly variable(const PolyRingPtr& ring, const std::string& var, std::int64_t exp = 1);
    static Poly monomial(const PolyRingPtr& ring, const Exponents& exps, const FieldElement& c);

    const PolyRingPtr& ring() const noexcept { return ring_; }
    const std::map<Exponents, FieldElement>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    // The coefficient of the zero exponent vector (field zero if absent).
    FieldElement constant_term() const;
    FieldElement coeff(const Exponents& exps) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    Poly scaled(const FieldElement& c) const;
    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // Ring homomorphism var -> value; the result lives in the ring with var
    // removed (or in target_ring when provided, which must match that shape).
    Poly substitute(const std::string& var, const FieldElement& value,
                    const PolyRingPtr& target_ring = nullptr) const;

    std::optional<std::int64_t> degree(const std::string& var) const;    // nullopt: zero poly
    std::optional<std::int64_t> valuation(const std::string& var) const; // nullopt: zero poly

    // x -> 1/x on the given (Laurent) variable.
    Poly negate_exponents(const std::string& var) const;

    // Map every coefficient through an embedding into another field;
    // the target ring must have the same variables and flags.
    template <class Fn>
    Poly map_coeffs(const PolyRingPtr& target, Fn&& fn) const {
        Poly out(target);
        for (const auto& [e, c] : terms_) out.add_term(e, fn(c));
        return out;
    }

    void add_term(const Exponents& exps, const FieldElement& c); // validates and merges

private:
    PolyRingPtr ring_;
    std::map<Exponents, FieldElement> terms_;
};

} // namespace strat
