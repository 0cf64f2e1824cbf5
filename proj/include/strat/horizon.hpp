#pragma once

// Horizontal-section solver, triviality certification on fibers, and the
// rank-two fiberwise-trivial family with its explicit gauges.

#include <cstdint>
#include <optional>
#include <vector>

#include "strat/stratmod.hpp"

namespace strat {

// Base points a_0, ..., a_{M-1}, pairwise distinct. Orders p^h for h >= M
// act as zero (the finite truncation of the family).
struct FamilySpec {
    FieldSpecPtr field;
    std::vector<FieldElement> points;
};

struct TrivializationCertificate {
    GaugeMatrix gauge;
    std::int64_t checked_order_bound;
    std::int64_t minimal_degree; // max over variables of gauge degree
};

// Maximal independent set of sections with per-variable degree <= deg_bound
// annihilated by every d^(k), 1 <= k <= deg_bound + max support order (higher
// orders vanish on any candidate: every operator term then carries either a
// too-high derivative or an order beyond the support). Requires no base vars.
std::vector<Section> horizontal_sections(const StratifiedModule& m, std::int64_t deg_bound);

// Sweeps bounds 0..deg_bound; succeeds at the least bound producing rank many
// horizontal sections forming a unimodular matrix. Failure means only that no
// low-degree witness exists, not that the module is nontrivial.
std::optional<TrivializationCertificate> trivialize(const StratifiedModule& m,
                                                    std::int64_t deg_bound);

// Rank-two module over K[x, y] relative to y with A_{x, p^h} carrying
// prod_{i=0}^{h} (y - a_i) in the (2,1) slot, for h < M.
StratifiedModule make_family(const FamilySpec& spec);

// The printed basis change at fiber y = a_n: lower-unitriangular with
// (2,1)-entry -sum_{h<n} [prod_{i<=h} (a_n - a_i)] x^{p^h}.
GaugeMatrix paper_gauge(const FamilySpec& spec, std::size_t n);

// (n, minimal gauge degree) for every fiber a_n, solver bound p^M.
std::vector<std::pair<std::size_t, std::int64_t>> gauge_degree_profile(const FamilySpec& spec);

} // namespace strat
