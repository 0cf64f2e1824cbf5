#pragma once

// Exponent extraction for logarithmic modules at a boundary point, torsion
// classification of p-adic digit vectors, naive pole-order reporting, and a
// bounded search for logarithmic extensions of small unipotent modules.

#include <cstdint>
#include <optional>
#include <vector>

#include "strat/stratmod.hpp"

namespace strat {

// Commuting family B[h], h in [0, H], each the action of x^{p^h} d^(p^h)
// restricted to the divisor {x = 0}.
class LogModule {
public:
    LogModule(FieldSpecPtr field, std::vector<FMatrix> b); // throws NonCommutingFamily

    const FieldSpecPtr& field() const noexcept { return field_; }
    std::size_t rank() const noexcept { return rank_; }
    std::int64_t truncation() const noexcept; // H
    const std::vector<FMatrix>& b() const noexcept { return b_; }

private:
    FieldSpecPtr field_;
    std::size_t rank_;
    std::vector<FMatrix> b_;
};

enum class TorsionKind { Zero, IntegerTorsion, Periodic, Inconclusive };

struct TorsionClass {
    TorsionKind kind = TorsionKind::Inconclusive;
    std::int64_t period = 0; // set for IntegerTorsion and Periodic
    bool operator==(const TorsionClass&) const = default;
};

struct ExponentEntry {
    DigitVector digits; // length H + 1
    std::size_t multiplicity = 0;
    TorsionClass classification;
};

struct ExponentRecord {
    std::vector<ExponentEntry> entries; // sorted by digit vector
};

// Joint eigenspace decomposition of the B[h] with eigenvalues required in the
// prime field; nullopt when some B[h] fails to diagonalize that way.
std::optional<ExponentRecord> exponent_digits(const LogModule& l);

// Periodicity of the digit tail inside the last `window` digits. Reports only
// what the window supports; Inconclusive is never a claim of non-torsion.
TorsionClass torsion_class(const DigitVector& digits, std::int64_t window);

// Max over supported orders k <= cutoff of the pole order of t^k A_k at t = 0.
std::int64_t log_pole_order(const StratifiedModule& m, std::int64_t cutoff);

// Bounded search over lower-unitriangular gauges whose off-diagonal entry has
// t-degrees in [-deg_range, deg_range] (coefficients solved linearly) for one
// clearing every pole of the supported orders; nullopt if none exists in range.
std::optional<GaugeMatrix> search_log_extension(const StratifiedModule& m,
                                                std::int64_t deg_range);

} // namespace strat
