#include "strat/horizon.hpp"

#include <algorithm>
#include <map>

namespace strat {

namespace {

std::int64_t ipow(std::int64_t base, std::int64_t e) {
    std::int64_t r = 1;
    for (std::int64_t i = 0; i < e; ++i) {
        r *= base;
        if (r > (std::int64_t{1} << 31)) throw Error(Errc::Overflow, "p^h too large");
    }
    return r;
}

// Exponent vectors with every entry in [0, deg_bound], lex ascending.
std::vector<Exponents> bounded_monomials(std::size_t nvars, std::int64_t deg_bound) {
    if (nvars == 0) return {Exponents{}};
    std::vector<Exponents> out;
    Exponents e(nvars, 0);
    while (true) {
        out.push_back(e);
        std::size_t i = nvars;
        bool carried = false;
        while (i-- > 0) {
            if (++e[i] <= deg_bound) {
                carried = true;
                break;
            }
            e[i] = 0;
        }
        if (!carried) break;
    }
    return out;
}

} // namespace

std::vector<Section> horizontal_sections(const StratifiedModule& m, std::int64_t deg_bound) {
    if (!m.base_vars().empty())
        throw Error(Errc::HasBaseVariables, "horizontal sections need a fiber module");
    if (deg_bound < 0) throw Error(Errc::IndexOutOfRange, "deg_bound must be >= 0");

    const auto& ring = m.ring();
    const auto& spec = ring->spec();
    const std::size_t r = m.rank();
    const auto monomials = bounded_monomials(ring->nvars(), deg_bound);
    const std::size_t ncols = r * monomials.size();

    struct Entry {
        std::size_t row, col;
        FieldElement value;
    };
    std::vector<Entry> entries;
    std::size_t nrows = 0;

    // One equation block per (fiber variable, operator order); rows within a
    // block are indexed by (output component, output exponent vector).
    for (const auto& var : m.fiber_vars()) {
        const std::int64_t kmax = deg_bound + m.max_order(var);
        for (std::int64_t k = 1; k <= kmax; ++k) {
            std::map<std::pair<std::size_t, Exponents>, std::size_t> block_rows;
            for (std::size_t j = 0; j < r; ++j) {
                for (std::size_t mi = 0; mi < monomials.size(); ++mi) {
                    Section s(r, Poly(ring));
                    s[j] = Poly::monomial(ring, monomials[mi], FieldElement::one(spec));
                    Section out = apply_operator(m, s, var, k);
                    const std::size_t col = j * monomials.size() + mi;
                    for (std::size_t t = 0; t < r; ++t) {
                        for (const auto& [e, c] : out[t].terms()) {
                            auto key = std::make_pair(t, e);
                            auto it = block_rows.find(key);
                            std::size_t row;
                            if (it == block_rows.end()) {
                                row = nrows++;
                                block_rows.emplace(key, row);
                            } else {
                                row = it->second;
                            }
                            entries.push_back({row, col, c});
                        }
                    }
                }
            }
        }
    }

    FMatrix a(spec, std::max<std::size_t>(nrows, 1), ncols);
    for (const auto& e : entries) a.at(e.row, e.col) = a.at(e.row, e.col) + e.value;

    auto kernel = a.kernel();
    std::vector<Section> sections;
    for (const auto& v : kernel) {
        Section s(r, Poly(ring));
        for (std::size_t j = 0; j < r; ++j)
            for (std::size_t mi = 0; mi < monomials.size(); ++mi) {
                const auto& c = v[j * monomials.size() + mi];
                if (!c.is_zero()) s[j] = s[j] + Poly::monomial(ring, monomials[mi], c);
            }
        sections.push_back(std::move(s));
    }
    return sections;
}

std::optional<TrivializationCertificate> trivialize(const StratifiedModule& m,
                                                    std::int64_t deg_bound) {
    const std::size_t r = m.rank();
    for (std::int64_t b = 0; b <= deg_bound; ++b) {
        auto sections = horizontal_sections(m, b);
        if (sections.size() != r) continue;
        PolyMat u(m.ring(), r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) u.at(i, j) = sections[i][j];
        // A full horizontal basis has constant nonzero determinant whenever the
        // module relations hold; a non-unimodular matrix here means the input
        // was not a genuine module, so skip this bound rather than certify.
        Poly d = u.det();
        if (d.is_zero() || !d.is_constant()) continue;
        GaugeMatrix gauge(std::move(u));
        StratifiedModule gauged = gauge_transform(m, gauge);
        if (!gauged.support().empty())
            throw Error(Errc::ProbeCheckFailed, "certificate failed to re-validate");
        std::int64_t deg = 0;
        for (const auto& var : m.fiber_vars())
            deg = std::max(deg, std::max<std::int64_t>(0, gauge.mat().degree(var)));
        std::int64_t checked = 0;
        for (const auto& var : m.fiber_vars())
            checked = std::max(checked, m.max_order(var) + deg);
        return TrivializationCertificate{std::move(gauge), checked, deg};
    }
    return std::nullopt;
}

StratifiedModule make_family(const FamilySpec& spec) {
    for (std::size_t i = 0; i < spec.points.size(); ++i)
        for (std::size_t j = i + 1; j < spec.points.size(); ++j)
            if (spec.points[i] == spec.points[j])
                throw Error(Errc::DuplicatePoints, "family points must be pairwise distinct");
    PolyRingPtr ring = make_ring(spec.field, {"x", "y"});
    const std::int64_t p = spec.field->p();
    std::map<SupportKey, PolyMat> support;
    Poly y = Poly::variable(ring, "y");
    Poly prod = Poly::constant(ring, FieldElement::one(spec.field));
    for (std::size_t h = 0; h < spec.points.size(); ++h) {
        prod = prod * (y - Poly::constant(ring, spec.points[h]));
        PolyMat a(ring, 2, 2);
        a.at(1, 0) = prod;
        support.emplace(SupportKey{"x", ipow(p, static_cast<std::int64_t>(h))}, std::move(a));
    }
    return StratifiedModule(ring, {"y"}, {"x"}, 2, std::move(support));
}

GaugeMatrix paper_gauge(const FamilySpec& spec, std::size_t n) {
    if (n >= spec.points.size())
        throw Error(Errc::IndexOutOfRange, "fiber index " + std::to_string(n));
    PolyRingPtr ring = make_ring(spec.field, {"x"});
    const std::int64_t p = spec.field->p();
    Poly entry(ring);
    FieldElement prod = FieldElement::one(spec.field);
    for (std::size_t h = 0; h < n; ++h) {
        prod = prod * (spec.points[n] - spec.points[h]);
        entry = entry + Poly::variable(ring, "x", ipow(p, static_cast<std::int64_t>(h))).scaled(prod);
    }
    PolyMat u = PolyMat::identity(ring, 2);
    u.at(1, 0) = -entry;
    return GaugeMatrix(std::move(u));
}

std::vector<std::pair<std::size_t, std::int64_t>> gauge_degree_profile(const FamilySpec& spec) {
    StratifiedModule family = make_family(spec);
    const std::int64_t p = spec.field->p();
    const std::int64_t bound = ipow(p, static_cast<std::int64_t>(spec.points.size()));
    std::vector<std::pair<std::size_t, std::int64_t>> profile;
    for (std::size_t n = 0; n < spec.points.size(); ++n) {
        StratifiedModule fiber = restrict_fiber(family, {{"y", spec.points[n]}});
        auto cert = trivialize(fiber, bound);
        if (!cert)
            throw Error(Errc::ProbeCheckFailed,
                        "fiber " + std::to_string(n) + " not trivialized within bound");
        profile.emplace_back(n, cert->minimal_degree);
    }
    return profile;
}

} // namespace strat
