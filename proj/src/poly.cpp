#include "strat/poly.hpp"

#include <algorithm>
#include <set>

namespace strat {

namespace {
constexpr std::int64_t kMaxExp = (std::int64_t{1} << 31) - 1;
}

PolyRing::PolyRing(FieldSpecPtr spec, std::vector<std::string> vars, std::vector<bool> laurent)
    : spec_(std::move(spec)), vars_(std::move(vars)), laurent_(std::move(laurent)) {
    if (laurent_.empty()) laurent_.assign(vars_.size(), false);
    if (laurent_.size() != vars_.size())
        throw Error(Errc::ShapeMismatch, "laurent flags must match variable count");
    std::set<std::string> seen;
    for (const auto& v : vars_) {
        if (v.empty()) throw Error(Errc::UnknownVariable, "empty variable name");
        if (!seen.insert(v).second)
            throw Error(Errc::UnknownVariable, "duplicate variable " + v);
    }
}

std::size_t PolyRing::index(const std::string& var) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == var) return i;
    throw Error(Errc::UnknownVariable, var);
}

bool PolyRing::has_var(const std::string& var) const noexcept {
    return std::find(vars_.begin(), vars_.end(), var) != vars_.end();
}

bool PolyRing::operator==(const PolyRing& o) const noexcept {
    return *spec_ == *o.spec_ && vars_ == o.vars_ && laurent_ == o.laurent_;
}

PolyRingPtr make_ring(FieldSpecPtr spec, std::vector<std::string> vars, std::vector<bool> laurent) {
    return std::make_shared<const PolyRing>(std::move(spec), std::move(vars), std::move(laurent));
}

Poly::Poly(PolyRingPtr ring) : ring_(std::move(ring)) {}

Poly Poly::constant(const PolyRingPtr& ring, const FieldElement& c) {
    Poly f(ring);
    f.add_term(Exponents(ring->nvars(), 0), c);
    return f;
}

Poly Poly::constant(const PolyRingPtr& ring, std::int64_t n) {
    return constant(ring, FieldElement::from_int(ring->spec(), n));
}

Poly Poly::variable(const PolyRingPtr& ring, const std::string& var, std::int64_t exp) {
    Exponents e(ring->nvars(), 0);
    e[ring->index(var)] = exp;
    return monomial(ring, e, FieldElement::one(ring->spec()));
}

Poly Poly::monomial(const PolyRingPtr& ring, const Exponents& exps, const FieldElement& c) {
    Poly f(ring);
    f.add_term(exps, c);
    return f;
}

void Poly::add_term(const Exponents& exps, const FieldElement& c) {
    if (exps.size() != ring_->nvars())
        throw Error(Errc::ShapeMismatch, "exponent vector length");
    if (!(*c.spec() == *ring_->spec()))
        throw Error(Errc::SpecMismatch, "coefficient field does not match ring");
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (std::llabs(exps[i]) > kMaxExp)
            throw Error(Errc::Overflow, "exponent exceeds 2^31");
        if (exps[i] < 0 && !ring_->laurent()[i])
            throw Error(Errc::ShapeMismatch,
                        "negative exponent in non-Laurent variable " + ring_->vars()[i]);
    }
    if (c.is_zero()) return;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        terms_.emplace(exps, c);
    } else {
        FieldElement s = it->second + c;
        if (s.is_zero())
            terms_.erase(it);
        else
            it->second = s;
    }
}

bool Poly::is_constant() const noexcept {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](std::int64_t x) { return x == 0; });
}

FieldElement Poly::constant_term() const {
    auto it = terms_.find(Exponents(ring_->nvars(), 0));
    if (it == terms_.end()) return FieldElement::zero(ring_->spec());
    return it->second;
}

FieldElement Poly::coeff(const Exponents& exps) const {
    auto it = terms_.find(exps);
    if (it == terms_.end()) return FieldElement::zero(ring_->spec());
    return it->second;
}

Poly Poly::operator+(const Poly& o) const {
    if (!(*ring_ == *o.ring_)) throw Error(Errc::RingMismatch, "poly addition");
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    if (!(*ring_ == *o.ring_)) throw Error(Errc::RingMismatch, "poly subtraction");
    Poly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
    return r;
}

Poly Poly::operator-() const {
    Poly r(ring_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Poly Poly::scaled(const FieldElement& c) const {
    Poly r(ring_);
    if (c.is_zero()) return r;
    for (const auto& [e, k] : terms_) {
        FieldElement v = k * c;
        if (!v.is_zero()) r.terms_.emplace(e, v);
    }
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    if (!(*ring_ == *o.ring_)) throw Error(Errc::RingMismatch, "poly multiplication");
    Poly r(ring_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) {
            Exponents e(e1.size());
            for (std::size_t i = 0; i < e.size(); ++i) {
                e[i] = e1[i] + e2[i];
                if (std::llabs(e[i]) > kMaxExp)
                    throw Error(Errc::Overflow, "exponent exceeds 2^31 in product");
            }
            r.add_term(e, c1 * c2);
        }
    return r;
}

bool Poly::operator==(const Poly& o) const {
    return *ring_ == *o.ring_ && terms_ == o.terms_;
}

Poly Poly::substitute(const std::string& var, const FieldElement& value,
                      const PolyRingPtr& target_ring) const {
    const std::size_t vi = ring_->index(var);
    if (ring_->laurent()[vi] && value.is_zero())
        throw Error(Errc::ZeroAtLaurentVariable, var + " -> 0");
    PolyRingPtr target = target_ring;
    if (!target) {
        std::vector<std::string> vars;
        std::vector<bool> laurent;
        for (std::size_t i = 0; i < ring_->nvars(); ++i) {
            if (i == vi) continue;
            vars.push_back(ring_->vars()[i]);
            laurent.push_back(ring_->laurent()[i]);
        }
        target = make_ring(ring_->spec(), std::move(vars), std::move(laurent));
    }
    if (target->nvars() != ring_->nvars() - 1)
        throw Error(Errc::ShapeMismatch, "substitution target ring shape");
    Poly out(target);
    for (const auto& [e, c] : terms_) {
        Exponents ne;
        ne.reserve(e.size() - 1);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (i != vi) ne.push_back(e[i]);
        out.add_term(ne, c * value.pow(e[vi]));
    }
    return out;
}

std::optional<std::int64_t> Poly::degree(const std::string& var) const {
    const std::size_t vi = ring_->index(var);
    if (terms_.empty()) return std::nullopt;
    std::int64_t d = terms_.begin()->first[vi];
    for (const auto& [e, c] : terms_) d = std::max(d, e[vi]);
    return d;
}

std::optional<std::int64_t> Poly::valuation(const std::string& var) const {
    const std::size_t vi = ring_->index(var);
    if (terms_.empty()) return std::nullopt;
    std::int64_t v = terms_.begin()->first[vi];
    for (const auto& [e, c] : terms_) v = std::min(v, e[vi]);
    return v;
}

Poly Poly::negate_exponents(const std::string& var) const {
    const std::size_t vi = ring_->index(var);
    if (!ring_->laurent()[vi])
        throw Error(Errc::NotLaurent, var + " is not Laurent-flagged");
    Poly out(ring_);
    for (const auto& [e, c] : terms_) {
        Exponents ne = e;
        ne[vi] = -ne[vi];
        out.add_term(ne, c);
    }
    return out;
}

} // namespace strat
