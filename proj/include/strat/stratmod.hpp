#pragma once

// Relative stratified modules presented by generator matrices A_{i,k} for the
// divided-power operators on fiber variables, with relation verification,
// gauge transformation, fiber restriction, category operations, scalar
// extension, and coordinate inversion.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strat/diffop.hpp"
#include "strat/poly.hpp"

namespace strat {

// Small dense matrix with Poly entries.
class PolyMat {
public:
    PolyMat(PolyRingPtr ring, std::size_t rows, std::size_t cols); // zero-filled
    static PolyMat identity(const PolyRingPtr& ring, std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const PolyRingPtr& ring() const noexcept { return ring_; }

    Poly& at(std::size_t i, std::size_t j);
    const Poly& at(std::size_t i, std::size_t j) const;

    PolyMat operator+(const PolyMat& o) const;
    PolyMat operator-(const PolyMat& o) const;
    PolyMat operator*(const PolyMat& o) const;
    PolyMat operator-() const;
    PolyMat transpose() const;
    PolyMat scaled(const FieldElement& c) const;
    PolyMat scaled(const Poly& f) const;
    PolyMat kron(const PolyMat& o) const; // row convention consistent
    bool operator==(const PolyMat& o) const;
    bool is_zero() const;

    PolyMat map_entries(const PolyRingPtr& target,
                        const std::function<Poly(const Poly&)>& fn) const;

    Poly det() const;                    // Laplace expansion; square only
    PolyMat unimodular_inverse() const;  // adjugate / det; throws NotUnimodular

    // Entry-wise divided partial derivative.
    PolyMat divided_partial(const std::string& var, std::int64_t k) const;

    std::int64_t degree(const std::string& var) const;    // max entry degree, 0 for zero matrix
    std::optional<std::int64_t> min_valuation(const std::string& var) const;

private:
    PolyRingPtr ring_;
    std::size_t rows_, cols_;
    std::vector<Poly> a_;
};

using SupportKey = std::pair<std::string, std::int64_t>; // (fiber var, order k >= 1)

class StratifiedModule {
public:
    StratifiedModule(PolyRingPtr ring, std::vector<std::string> base_vars,
                     std::vector<std::string> fiber_vars, std::size_t rank,
                     std::map<SupportKey, PolyMat> support);

    const PolyRingPtr& ring() const noexcept { return ring_; }
    const std::vector<std::string>& base_vars() const noexcept { return base_vars_; }
    const std::vector<std::string>& fiber_vars() const noexcept { return fiber_vars_; }
    std::size_t rank() const noexcept { return rank_; }
    const std::map<SupportKey, PolyMat>& support() const noexcept { return support_; }

    // A_{var,k}; identity for k = 0, zero matrix for orders absent from support.
    PolyMat matrix(const std::string& var, std::int64_t k) const;
    std::int64_t max_order(const std::string& var) const; // 0 if no support
    std::int64_t max_order() const;

    // Set only by invert_coordinate: the presentation is exact up to this order.
    std::optional<std::int64_t> truncated_at() const noexcept { return truncated_at_; }
    void set_truncated_at(std::int64_t k) { truncated_at_ = k; }

    bool operator==(const StratifiedModule& o) const;

private:
    PolyRingPtr ring_;
    std::vector<std::string> base_vars_, fiber_vars_;
    std::size_t rank_;
    std::map<SupportKey, PolyMat> support_;
    std::optional<std::int64_t> truncated_at_;
};

// Basis change U with det a nonzero field constant, so U^{-1} stays polynomial.
class GaugeMatrix {
public:
    explicit GaugeMatrix(PolyMat u); // throws NotUnimodular
    const PolyMat& mat() const noexcept { return u_; }
    const PolyMat& inv() const noexcept { return uinv_; }

private:
    PolyMat u_;
    PolyMat uinv_;
};

using Section = std::vector<Poly>; // r coordinates in the module basis

// Action of d^(k)/d var on a section: sum over a+b=k of d^(a)(f_j) (row j of A_b).
Section apply_operator(const StratifiedModule& m, const Section& s,
                       const std::string& var, std::int64_t k);

struct RelationViolation {
    std::string rule; // "R1", "R2", "R3"
    std::string var_i, var_j;
    std::int64_t k = 0, l = 0;
    std::string detail;
};

struct RelationReport {
    bool pass = true;
    std::vector<RelationViolation> violations;
};

// Checks the generator relations of the divided-power operator ring as matrix
// identities, up to the cutoff order.
RelationReport verify_relations(const StratifiedModule& m, std::int64_t cutoff);

// A'_k = [sum over a+b=k of d^(a)(U) A_b] U^{-1}, per fiber variable, computed
// for k up to max support order + deg(U) in that variable (all higher orders
// vanish: each term then carries either a vanished derivative of U or a zero A).
StratifiedModule gauge_transform(const StratifiedModule& m, const GaugeMatrix& u);

StratifiedModule restrict_fiber(const StratifiedModule& m,
                                const std::map<std::string, FieldElement>& point);

StratifiedModule dual(const StratifiedModule& m);
StratifiedModule tensor(const StratifiedModule& m, const StratifiedModule& n);
StratifiedModule direct_sum(const StratifiedModule& m, const StratifiedModule& n);

// Coefficients mapped through the lexicographically-least embedding into target.
StratifiedModule extend_scalars(const StratifiedModule& m, const FieldSpecPtr& target);
FieldElement embed_element(const FieldElement& e, const FieldSpecPtr& target);

// Rewrites a single-fiber-variable Laurent module in the reciprocal
// coordinate. Output exact up to `cutoff` (flagged via truncated_at).
StratifiedModule invert_coordinate(const StratifiedModule& m, std::int64_t cutoff);

// Operator identity used by invert_coordinate: the scalar gamma_{k,j} with
// d_t^(k) = sum_j gamma_{k,j} t^{-(k+j)} d_x^(j). Exposed for testing.
std::vector<FieldElement> reciprocal_operator_row(const FieldSpecPtr& spec, std::int64_t k);

} // namespace strat
