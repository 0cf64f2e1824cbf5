#include "strat/exponents.hpp"

#include <algorithm>

namespace strat {

LogModule::LogModule(FieldSpecPtr field, std::vector<FMatrix> b)
    : field_(std::move(field)), rank_(0), b_(std::move(b)) {
    if (b_.empty()) throw Error(Errc::IndexOutOfRange, "need at least B[0]");
    rank_ = b_[0].rows();
    for (const auto& m : b_) {
        if (!(*m.spec() == *field_)) throw Error(Errc::RingMismatch, "B entry over wrong field");
        if (m.rows() != rank_ || m.cols() != rank_)
            throw Error(Errc::ShapeMismatch, "B entries must be square of equal rank");
    }
    for (std::size_t i = 0; i < b_.size(); ++i)
        for (std::size_t j = i + 1; j < b_.size(); ++j)
            if (!(b_[i] * b_[j] == b_[j] * b_[i]))
                throw Error(Errc::NonCommutingFamily,
                            "B[" + std::to_string(i) + "] and B[" + std::to_string(j) + "]");
}

std::int64_t LogModule::truncation() const noexcept {
    return static_cast<std::int64_t>(b_.size()) - 1;
}

namespace {

using Basis = std::vector<std::vector<FieldElement>>; // column vectors, length r

// Basis of {v in span(basis) : b v = lambda v}, expressed back in ambient
// coordinates.
Basis eigen_sub(const FMatrix& b, const FieldElement& lambda, const Basis& basis) {
    const auto& spec = b.spec();
    const std::size_t r = b.rows(), d = basis.size();
    FMatrix m(spec, r, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < r; ++i) {
            FieldElement acc = FieldElement::zero(spec);
            for (std::size_t t = 0; t < r; ++t) acc = acc + b.at(i, t) * basis[j][t];
            m.at(i, j) = acc - lambda * basis[j][i];
        }
    Basis out;
    for (const auto& v : m.kernel()) {
        std::vector<FieldElement> w(r, FieldElement::zero(spec));
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < r; ++i) w[i] = w[i] + basis[j][i] * v[j];
        out.push_back(std::move(w));
    }
    return out;
}

} // namespace

std::optional<ExponentRecord> exponent_digits(const LogModule& l) {
    const auto& spec = l.field();
    const std::uint32_t p = spec->p();
    const std::size_t r = l.rank();

    struct Node {
        std::vector<std::uint32_t> digits;
        Basis basis;
    };
    Basis full;
    for (std::size_t i = 0; i < r; ++i) {
        std::vector<FieldElement> e(r, FieldElement::zero(spec));
        e[i] = FieldElement::one(spec);
        full.push_back(std::move(e));
    }
    std::vector<Node> nodes{{{}, std::move(full)}};

    for (const auto& b : l.b()) {
        std::vector<Node> next;
        for (auto& node : nodes) {
            std::size_t found = 0;
            for (std::uint32_t lam = 0; lam < p; ++lam) {
                Basis sub = eigen_sub(b, FieldElement::from_int(spec, lam), node.basis);
                if (sub.empty()) continue;
                found += sub.size();
                Node child{node.digits, std::move(sub)};
                child.digits.push_back(lam);
                next.push_back(std::move(child));
            }
            if (found != node.basis.size()) return std::nullopt;
        }
        nodes = std::move(next);
    }

    ExponentRecord rec;
    for (auto& node : nodes) {
        ExponentEntry e;
        e.digits = DigitVector{p, std::move(node.digits)};
        e.multiplicity = node.basis.size();
        e.classification = torsion_class(e.digits, l.truncation() + 1);
        rec.entries.push_back(std::move(e));
    }
    std::sort(rec.entries.begin(), rec.entries.end(),
              [](const ExponentEntry& a, const ExponentEntry& b) {
                  return a.digits.digits < b.digits.digits;
              });
    return rec;
}

TorsionClass torsion_class(const DigitVector& digits, std::int64_t window) {
    const auto len = static_cast<std::int64_t>(digits.digits.size());
    if (window < 1 || window > len)
        throw Error(Errc::WindowTooLarge, "window " + std::to_string(window) + " on " +
                                              std::to_string(len) + " digits");
    if (std::all_of(digits.digits.begin(), digits.digits.end(),
                    [](std::uint32_t d) { return d == 0; }))
        return {TorsionKind::Zero, 0};

    const std::uint32_t* w = digits.digits.data() + (len - window);
    for (std::int64_t d = 1; 2 * d <= window; ++d) {
        std::int64_t start = window - d;
        while (start > 0 && w[start - 1] == w[start - 1 + d]) --start;
        if (window - start < 2 * d) continue;
        if (d == 1 && (w[window - 1] == 0 || w[window - 1] == digits.p - 1))
            return {TorsionKind::IntegerTorsion, 1};
        return {TorsionKind::Periodic, d};
    }
    return {TorsionKind::Inconclusive, 0};
}

namespace {

const std::string& single_laurent_fiber(const StratifiedModule& m) {
    if (!m.base_vars().empty())
        throw Error(Errc::HasBaseVariables, "expected a pure fiber module");
    if (m.fiber_vars().size() != 1)
        throw Error(Errc::MultipleFiberVariables, "expected exactly one fiber variable");
    const std::string& var = m.fiber_vars()[0];
    if (!m.ring()->laurent()[m.ring()->index(var)])
        throw Error(Errc::NotLaurent, "variable " + var + " is not Laurent");
    return var;
}

} // namespace

std::int64_t log_pole_order(const StratifiedModule& m, std::int64_t cutoff) {
    const std::string& var = single_laurent_fiber(m);
    if (cutoff < 1) throw Error(Errc::CutoffTooSmall, "cutoff must be >= 1");
    std::int64_t pole = 0;
    for (const auto& [key, mat] : m.support()) {
        if (key.second > cutoff) continue;
        auto v = mat.min_valuation(var);
        if (!v) continue;
        pole = std::max(pole, -std::min<std::int64_t>(0, *v + key.second));
    }
    return pole;
}

std::optional<GaugeMatrix> search_log_extension(const StratifiedModule& m,
                                                std::int64_t deg_range) {
    const std::string& var = single_laurent_fiber(m);
    if (deg_range < 0) throw Error(Errc::IndexOutOfRange, "deg_range must be >= 0");
    if (m.rank() > 2) throw Error(Errc::UnsupportedShape, "rank must be <= 2");
    const auto& ring = m.ring();
    const auto& spec = ring->spec();

    for (const auto& [key, mat] : m.support())
        for (std::size_t i = 0; i < m.rank(); ++i)
            for (std::size_t j = 0; j < m.rank(); ++j)
                if (!(i == 1 && j == 0) && !mat.at(i, j).is_zero())
                    throw Error(Errc::UnsupportedShape, "support must be strictly lower");

    if (m.rank() < 2 || m.support().empty())
        return GaugeMatrix(PolyMat::identity(ring, m.rank()));

    // Gauging by U = [[1,0],[u,1]] sends A_k to A_k + d^(k)(u) E_21, so the
    // poles of order k clear iff the Laurent coefficients of u satisfy
    // C(d+k, k) c_{d+k} = -g_k[d] for every negative exponent d.
    const std::uint32_t p = spec->p();
    const std::size_t nunk = static_cast<std::size_t>(2 * deg_range + 1);
    auto col = [&](std::int64_t e) { return static_cast<std::size_t>(e + deg_range); };

    std::vector<std::vector<FieldElement>> rows;
    std::vector<FieldElement> rhs;
    for (const auto& [key, mat] : m.support()) {
        const std::int64_t k = key.second;
        const Poly& g = mat.at(1, 0);
        std::int64_t dmin = -deg_range - k;
        if (auto v = g.valuation(var)) dmin = std::min(dmin, *v);
        for (std::int64_t d = dmin; d < 0; ++d) {
            std::vector<FieldElement> row(nunk, FieldElement::zero(spec));
            const std::int64_t e = d + k;
            bool nonzero = false;
            if (e >= -deg_range && e <= deg_range) {
                std::uint32_t c = binom_mod_p(e, k, p);
                if (c != 0) {
                    row[col(e)] = FieldElement::from_int(spec, c);
                    nonzero = true;
                }
            }
            FieldElement g_d = g.coeff(Exponents{d});
            if (!nonzero && g_d.is_zero()) continue;
            rows.push_back(std::move(row));
            rhs.push_back(-g_d);
        }
    }

    FMatrix a(spec, std::max<std::size_t>(rows.size(), 1), nunk);
    std::vector<FieldElement> b(std::max<std::size_t>(rows.size(), 1),
                                FieldElement::zero(spec));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < nunk; ++j) a.at(i, j) = rows[i][j];
        b[i] = rhs[i];
    }
    auto sol = a.solve(b);
    if (!sol) return std::nullopt;

    Poly u(ring);
    for (std::int64_t e = -deg_range; e <= deg_range; ++e) {
        const auto& c = sol->particular[col(e)];
        if (!c.is_zero()) u.add_term(Exponents{e}, c);
    }
    PolyMat g = PolyMat::identity(ring, 2);
    g.at(1, 0) = u;
    return GaugeMatrix(std::move(g));
}

} // namespace strat
