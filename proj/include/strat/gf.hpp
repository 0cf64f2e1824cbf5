#pragma once

// Exact arithmetic in F_{p^m} with a pinned modulus, plus dense linear
// algebra over such fields (rref, solve, kernel, inverse, rank).

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "strat/errors.hpp"

namespace strat {

class FieldSpec;
using FieldSpecPtr = std::shared_ptr<const FieldSpec>;

// F_{p^m} presented as F_p[T]/(modulus). The modulus is user supplied and
// never auto-generated, so serialized data is reproducible. For m = 1 the
// modulus is the formal polynomial T and elements are bare residues mod p.
class FieldSpec {
public:
    FieldSpec(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus);

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t m() const noexcept { return m_; }
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }
    std::uint64_t order() const noexcept; // p^m

    bool operator==(const FieldSpec& other) const noexcept;

private:
    std::uint32_t p_;
    std::uint32_t m_;
    std::vector<std::uint32_t> modulus_; // m+1 digits, monic, irreducible over F_p
};

FieldSpecPtr make_field(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus);

bool is_prime(std::uint64_t n);

class FieldElement {
public:
    FieldElement(FieldSpecPtr spec, std::vector<std::uint32_t> digits);

    static FieldElement zero(const FieldSpecPtr& spec);
    static FieldElement one(const FieldSpecPtr& spec);
    // Image of the integer n under Z -> F_p -> F_{p^m}.
    static FieldElement from_int(const FieldSpecPtr& spec, std::int64_t n);
    // The residue class of T; requires m > 1 (for m = 1 it is 0).
    static FieldElement generator(const FieldSpecPtr& spec);

    const FieldSpecPtr& spec() const noexcept { return spec_; }
    const std::vector<std::uint32_t>& digits() const noexcept { return digits_; }
    bool is_zero() const noexcept;
    bool is_one() const noexcept;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement inverse() const;
    FieldElement pow(std::int64_t e) const;

    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }
    // Digit-lexicographic order; used for deterministic embeddings.
    bool operator<(const FieldElement& o) const;

private:
    void check_same_spec(const FieldElement& o) const;

    FieldSpecPtr spec_;
    std::vector<std::uint32_t> digits_; // exactly m residues in [0, p)
};

// All q elements of the field in digit-lexicographic order.
std::vector<FieldElement> all_elements(const FieldSpecPtr& spec);

// Dense matrix over a fixed field.
class FMatrix {
public:
    FMatrix(FieldSpecPtr spec, std::size_t rows, std::size_t cols); // zero-filled
    static FMatrix identity(const FieldSpecPtr& spec, std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const FieldSpecPtr& spec() const noexcept { return spec_; }

    FieldElement& at(std::size_t i, std::size_t j);
    const FieldElement& at(std::size_t i, std::size_t j) const;

    FMatrix operator+(const FMatrix& o) const;
    FMatrix operator-(const FMatrix& o) const;
    FMatrix operator*(const FMatrix& o) const;
    FMatrix transpose() const;
    bool operator==(const FMatrix& o) const;
    bool is_zero() const;

    std::size_t rank() const;
    // Basis of the right null space, in reduced echelon form. Deterministic.
    std::vector<std::vector<FieldElement>> kernel() const;
    // One solution of A x = b plus the kernel basis; nullopt if inconsistent.
    struct Solution {
        std::vector<FieldElement> particular;
        std::vector<std::vector<FieldElement>> kernel;
    };
    std::optional<Solution> solve(const std::vector<FieldElement>& rhs) const;
    FMatrix inverse() const; // throws Errc::Singular

private:
    FieldSpecPtr spec_;
    std::size_t rows_, cols_;
    std::vector<FieldElement> a_;
};

} // namespace strat
