#include "strat/stratmod.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace strat {

PolyMat::PolyMat(PolyRingPtr ring, std::size_t rows, std::size_t cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols), a_(rows * cols, Poly(ring_)) {}

PolyMat PolyMat::identity(const PolyRingPtr& ring, std::size_t n) {
    PolyMat m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = Poly::constant(ring, FieldElement::one(ring->spec()));
    return m;
}

Poly& PolyMat::at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
const Poly& PolyMat::at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

PolyMat PolyMat::operator+(const PolyMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::ShapeMismatch, "matrix addition");
    PolyMat r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

PolyMat PolyMat::operator-(const PolyMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::ShapeMismatch, "matrix subtraction");
    PolyMat r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

PolyMat PolyMat::operator*(const PolyMat& o) const {
    if (cols_ != o.rows_) throw Error(Errc::ShapeMismatch, "matrix product");
    PolyMat r(ring_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
        }
    return r;
}

PolyMat PolyMat::operator-() const {
    PolyMat r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = -a_[i];
    return r;
}

PolyMat PolyMat::transpose() const {
    PolyMat r(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

PolyMat PolyMat::scaled(const FieldElement& c) const {
    PolyMat r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i].scaled(c);
    return r;
}

PolyMat PolyMat::scaled(const Poly& f) const {
    PolyMat r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * f;
    return r;
}

PolyMat PolyMat::kron(const PolyMat& o) const {
    PolyMat r(ring_, rows_ * o.rows_, cols_ * o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t m = 0; m < cols_; ++m) {
            if (at(i, m).is_zero()) continue;
            for (std::size_t j = 0; j < o.rows_; ++j)
                for (std::size_t n = 0; n < o.cols_; ++n)
                    r.at(i * o.rows_ + j, m * o.cols_ + n) = at(i, m) * o.at(j, n);
        }
    return r;
}

bool PolyMat::operator==(const PolyMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool PolyMat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Poly& f) { return f.is_zero(); });
}

PolyMat PolyMat::map_entries(const PolyRingPtr& target,
                             const std::function<Poly(const Poly&)>& fn) const {
    PolyMat r(target, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = fn(a_[i]);
    return r;
}

Poly PolyMat::det() const {
    if (rows_ != cols_) throw Error(Errc::ShapeMismatch, "determinant of non-square matrix");
    if (rows_ == 0) return Poly::constant(ring_, FieldElement::one(ring_->spec()));
    if (rows_ == 1) return at(0, 0);
    Poly d(ring_);
    for (std::size_t i = 0; i < rows_; ++i) {
        if (at(i, 0).is_zero()) continue;
        PolyMat minor(ring_, rows_ - 1, cols_ - 1);
        for (std::size_t r = 0, mr = 0; r < rows_; ++r) {
            if (r == i) continue;
            for (std::size_t c = 1; c < cols_; ++c) minor.at(mr, c - 1) = at(r, c);
            ++mr;
        }
        Poly term = at(i, 0) * minor.det();
        d = (i % 2 == 0) ? d + term : d - term;
    }
    return d;
}

PolyMat PolyMat::unimodular_inverse() const {
    Poly d = det();
    if (d.is_zero() || !d.is_constant())
        throw Error(Errc::NotUnimodular, "determinant is not a nonzero field constant");
    FieldElement dinv = d.constant_term().inverse();
    PolyMat inv(ring_, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            PolyMat minor(ring_, rows_ - 1, cols_ - 1);
            for (std::size_t r = 0, mr = 0; r < rows_; ++r) {
                if (r == j) continue; // cofactor transpose
                for (std::size_t c = 0, mc = 0; c < cols_; ++c) {
                    if (c == i) continue;
                    minor.at(mr, mc++) = at(r, c);
                }
                ++mr;
            }
            Poly cof = minor.det().scaled(dinv);
            inv.at(i, j) = ((i + j) % 2 == 0) ? cof : -cof;
        }
    return inv;
}

PolyMat PolyMat::divided_partial(const std::string& var, std::int64_t k) const {
    PolyMat r(ring_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = strat::divided_partial(a_[i], var, k);
    return r;
}

std::int64_t PolyMat::degree(const std::string& var) const {
    std::int64_t d = 0;
    for (const auto& f : a_)
        if (auto fd = f.degree(var)) d = std::max(d, *fd);
    return d;
}

std::optional<std::int64_t> PolyMat::min_valuation(const std::string& var) const {
    std::optional<std::int64_t> v;
    for (const auto& f : a_)
        if (auto fv = f.valuation(var)) v = v ? std::min(*v, *fv) : *fv;
    return v;
}

StratifiedModule::StratifiedModule(PolyRingPtr ring, std::vector<std::string> base_vars,
                                   std::vector<std::string> fiber_vars, std::size_t rank,
                                   std::map<SupportKey, PolyMat> support)
    : ring_(std::move(ring)), base_vars_(std::move(base_vars)),
      fiber_vars_(std::move(fiber_vars)), rank_(rank) {
    if (rank_ < 1) throw Error(Errc::ShapeMismatch, "rank must be >= 1");
    std::set<std::string> split;
    for (const auto& v : base_vars_) split.insert(v);
    for (const auto& v : fiber_vars_) {
        if (!split.insert(v).second)
            throw Error(Errc::ShapeMismatch, "variable in both base and fiber: " + v);
    }
    if (split.size() != ring_->nvars())
        throw Error(Errc::ShapeMismatch, "base and fiber variables must partition the ring");
    for (const auto& v : ring_->vars())
        if (!split.count(v)) throw Error(Errc::UnknownVariable, v);
    for (auto& [key, mat] : support) {
        if (std::find(fiber_vars_.begin(), fiber_vars_.end(), key.first) == fiber_vars_.end())
            throw Error(Errc::UnknownVariable, "support variable " + key.first + " is not a fiber variable");
        if (key.second < 1)
            throw Error(Errc::IndexOutOfRange, "support order must be >= 1");
        if (mat.rows() != rank_ || mat.cols() != rank_)
            throw Error(Errc::ShapeMismatch, "support matrix must be rank x rank");
        if (!(*mat.ring() == *ring_))
            throw Error(Errc::RingMismatch, "support matrix entries in foreign ring");
        if (!mat.is_zero()) support_.emplace(key, mat);
    }
}

PolyMat StratifiedModule::matrix(const std::string& var, std::int64_t k) const {
    if (std::find(fiber_vars_.begin(), fiber_vars_.end(), var) == fiber_vars_.end())
        throw Error(Errc::UnknownVariable, var + " is not a fiber variable");
    if (k == 0) return PolyMat::identity(ring_, rank_);
    auto it = support_.find({var, k});
    if (it == support_.end()) return PolyMat(ring_, rank_, rank_);
    return it->second;
}

std::int64_t StratifiedModule::max_order(const std::string& var) const {
    std::int64_t k = 0;
    for (const auto& [key, mat] : support_)
        if (key.first == var) k = std::max(k, key.second);
    return k;
}

std::int64_t StratifiedModule::max_order() const {
    std::int64_t k = 0;
    for (const auto& [key, mat] : support_) k = std::max(k, key.second);
    return k;
}

bool StratifiedModule::operator==(const StratifiedModule& o) const {
    return *ring_ == *o.ring_ && base_vars_ == o.base_vars_ && fiber_vars_ == o.fiber_vars_ &&
           rank_ == o.rank_ && support_ == o.support_;
}

GaugeMatrix::GaugeMatrix(PolyMat u) : u_(std::move(u)), uinv_(u_.unimodular_inverse()) {
    if (u_.rows() != u_.cols()) throw Error(Errc::ShapeMismatch, "gauge must be square");
}

Section apply_operator(const StratifiedModule& m, const Section& s, const std::string& var,
                       std::int64_t k) {
    if (s.size() != m.rank()) throw Error(Errc::ShapeMismatch, "section length");
    for (const auto& f : s)
        if (!(*f.ring() == *m.ring())) throw Error(Errc::RingMismatch, "section entries");
    Section out(m.rank(), Poly(m.ring()));
    for (std::int64_t a = 0; a <= k; ++a) {
        const std::int64_t b = k - a;
        PolyMat ab = m.matrix(var, b);
        if (ab.is_zero() && b != 0) continue;
        for (std::size_t j = 0; j < m.rank(); ++j) {
            Poly df = divided_partial(s[j], var, a);
            if (df.is_zero()) continue;
            for (std::size_t t = 0; t < m.rank(); ++t) {
                if (ab.at(j, t).is_zero()) continue;
                out[t] = out[t] + df * ab.at(j, t);
            }
        }
    }
    return out;
}

namespace {

std::string shape_note(const PolyMat& diff) {
    std::ostringstream os;
    os << "nonzero difference in " << diff.rows() << "x" << diff.cols() << " matrix";
    return os.str();
}

} // namespace

RelationReport verify_relations(const StratifiedModule& m, std::int64_t cutoff) {
    if (cutoff < m.max_order())
        throw Error(Errc::CutoffTooSmall, "cutoff below max support order");
    RelationReport report;
    const auto& spec = m.ring()->spec();
    const std::uint32_t p = spec->p();

    // (R1) same-variable composition
    for (const auto& vi : m.fiber_vars()) {
        for (std::int64_t k = 1; k < cutoff; ++k) {
            for (std::int64_t l = 1; k + l <= cutoff; ++l) {
                PolyMat lhs(m.ring(), m.rank(), m.rank());
                PolyMat al = m.matrix(vi, l);
                if (!al.is_zero()) {
                    for (std::int64_t a = 0; a <= k; ++a) {
                        PolyMat da = al.divided_partial(vi, a);
                        if (da.is_zero()) continue;
                        PolyMat ab = m.matrix(vi, k - a);
                        if (ab.is_zero()) continue;
                        lhs = lhs + da * ab;
                    }
                }
                FieldElement c = FieldElement::from_int(spec, binom_mod_p(k + l, k, p));
                PolyMat rhs = m.matrix(vi, k + l).scaled(c);
                if (!(lhs == rhs)) {
                    report.pass = false;
                    report.violations.push_back(
                        {"R1", vi, vi, k, l, shape_note(lhs - rhs)});
                }
            }
        }
    }

    // (R2) cross-variable commutation
    for (std::size_t i = 0; i < m.fiber_vars().size(); ++i) {
        for (std::size_t j = i + 1; j < m.fiber_vars().size(); ++j) {
            const auto& vi = m.fiber_vars()[i];
            const auto& vj = m.fiber_vars()[j];
            for (std::int64_t k = 1; k <= cutoff; ++k) {
                for (std::int64_t l = 1; l <= cutoff; ++l) {
                    PolyMat lhs(m.ring(), m.rank(), m.rank());
                    PolyMat ajl = m.matrix(vj, l);
                    for (std::int64_t a = 0; a <= k; ++a) {
                        PolyMat da = ajl.divided_partial(vi, a);
                        if (da.is_zero()) continue;
                        PolyMat ab = m.matrix(vi, k - a);
                        if (ab.is_zero()) continue;
                        lhs = lhs + da * ab;
                    }
                    PolyMat rhs(m.ring(), m.rank(), m.rank());
                    PolyMat aik = m.matrix(vi, k);
                    for (std::int64_t c = 0; c <= l; ++c) {
                        PolyMat dc = aik.divided_partial(vj, c);
                        if (dc.is_zero()) continue;
                        PolyMat ad = m.matrix(vj, l - c);
                        if (ad.is_zero()) continue;
                        rhs = rhs + dc * ad;
                    }
                    if (!(lhs == rhs)) {
                        report.pass = false;
                        report.violations.push_back(
                            {"R2", vi, vj, k, l, shape_note(lhs - rhs)});
                    }
                }
            }
        }
    }

    // (R3) [d^(k), x_i] = d^(k-1), probed on the sections x_i e_m. This holds
    // by construction of apply_operator; it guards the implementation.
    for (const auto& vi : m.fiber_vars()) {
        Poly x = Poly::variable(m.ring(), vi);
        for (std::int64_t k = 1; k <= cutoff; ++k) {
            for (std::size_t em = 0; em < m.rank(); ++em) {
                Section e(m.rank(), Poly(m.ring()));
                e[em] = Poly::constant(m.ring(), FieldElement::one(spec));
                Section xe(m.rank(), Poly(m.ring()));
                xe[em] = x;
                Section lhs = apply_operator(m, xe, vi, k);
                Section phik = apply_operator(m, e, vi, k);
                Section phikm1 = apply_operator(m, e, vi, k - 1);
                bool ok = true;
                for (std::size_t t = 0; t < m.rank(); ++t)
                    if (!(lhs[t] == x * phik[t] + phikm1[t])) ok = false;
                if (!ok) {
                    report.pass = false;
                    report.violations.push_back(
                        {"R3", vi, vi, k, 0, "probe section index " + std::to_string(em)});
                }
            }
        }
    }

    return report;
}

StratifiedModule gauge_transform(const StratifiedModule& m, const GaugeMatrix& u) {
    if (!(*u.mat().ring() == *m.ring())) throw Error(Errc::RingMismatch, "gauge ring");
    if (u.mat().rows() != m.rank()) throw Error(Errc::ShapeMismatch, "gauge size");
    std::map<SupportKey, PolyMat> support;
    for (const auto& vi : m.fiber_vars()) {
        const std::int64_t bound = m.max_order(vi) + std::max<std::int64_t>(0, u.mat().degree(vi));
        for (std::int64_t k = 1; k <= bound; ++k) {
            PolyMat acc(m.ring(), m.rank(), m.rank());
            for (std::int64_t a = 0; a <= k; ++a) {
                PolyMat du = u.mat().divided_partial(vi, a);
                if (du.is_zero()) continue;
                PolyMat ab = m.matrix(vi, k - a);
                if (ab.is_zero()) continue;
                acc = acc + du * ab;
            }
            PolyMat ak = acc * u.inv();
            if (!ak.is_zero()) support.emplace(SupportKey{vi, k}, std::move(ak));
        }
    }
    return StratifiedModule(m.ring(), m.base_vars(), m.fiber_vars(), m.rank(), std::move(support));
}

StratifiedModule restrict_fiber(const StratifiedModule& m,
                                const std::map<std::string, FieldElement>& point) {
    for (const auto& v : m.base_vars())
        if (!point.count(v)) throw Error(Errc::MissingAssignment, v);
    for (const auto& [v, val] : point)
        if (std::find(m.base_vars().begin(), m.base_vars().end(), v) == m.base_vars().end())
            throw Error(Errc::UnknownVariable, v + " is not a base variable");

    // Chain of rings with base variables removed one at a time.
    std::vector<std::string> vars = m.ring()->vars();
    std::vector<bool> laurent = m.ring()->laurent();
    auto substitute_all = [&](Poly f) {
        for (const auto& v : m.base_vars()) f = f.substitute(v, point.at(v));
        return f;
    };
    // Final ring, shared by every entry.
    std::vector<std::string> fvars;
    std::vector<bool> flaurent;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (std::find(m.base_vars().begin(), m.base_vars().end(), vars[i]) != m.base_vars().end())
            continue;
        fvars.push_back(vars[i]);
        flaurent.push_back(laurent[i]);
    }
    PolyRingPtr target = make_ring(m.ring()->spec(), fvars, flaurent);

    std::map<SupportKey, PolyMat> support;
    for (const auto& [key, mat] : m.support()) {
        PolyMat rm = mat.map_entries(target, [&](const Poly& f) {
            Poly g = substitute_all(f);
            // rebuild in the shared target ring
            Poly out(target);
            for (const auto& [e, c] : g.terms()) out.add_term(e, c);
            return out;
        });
        if (!rm.is_zero()) support.emplace(key, std::move(rm));
    }
    return StratifiedModule(target, {}, m.fiber_vars(), m.rank(), std::move(support));
}

StratifiedModule dual(const StratifiedModule& m) {
    std::map<SupportKey, PolyMat> support;
    for (const auto& vi : m.fiber_vars()) {
        const std::int64_t maxk = m.max_order(vi);
        if (maxk == 0) continue;
        const std::int64_t bound = maxk * static_cast<std::int64_t>(m.rank());
        std::vector<PolyMat> d;
        d.push_back(PolyMat::identity(m.ring(), m.rank()));
        for (std::int64_t k = 1; k <= bound; ++k) {
            PolyMat acc(m.ring(), m.rank(), m.rank());
            for (std::int64_t a = 0; a < k; ++a) {
                PolyMat akt = m.matrix(vi, k - a).transpose();
                if (akt.is_zero()) continue;
                acc = acc + d[a] * akt;
            }
            d.push_back(-acc);
            if (!d.back().is_zero()) support.emplace(SupportKey{vi, k}, d.back());
        }
    }
    return StratifiedModule(m.ring(), m.base_vars(), m.fiber_vars(), m.rank(), std::move(support));
}

StratifiedModule tensor(const StratifiedModule& m, const StratifiedModule& n) {
    if (!(*m.ring() == *n.ring()) || m.base_vars() != n.base_vars() ||
        m.fiber_vars() != n.fiber_vars())
        throw Error(Errc::RingMismatch, "tensor operands");
    const std::size_t rank = m.rank() * n.rank();
    std::map<SupportKey, PolyMat> support;
    for (const auto& vi : m.fiber_vars()) {
        const std::int64_t bound = m.max_order(vi) + n.max_order(vi);
        for (std::int64_t k = 1; k <= bound; ++k) {
            PolyMat acc(m.ring(), rank, rank);
            for (std::int64_t a = 0; a <= k; ++a) {
                PolyMat am = m.matrix(vi, a);
                if (am.is_zero()) continue;
                PolyMat bn = n.matrix(vi, k - a);
                if (bn.is_zero()) continue;
                acc = acc + am.kron(bn);
            }
            if (!acc.is_zero()) support.emplace(SupportKey{vi, k}, std::move(acc));
        }
    }
    return StratifiedModule(m.ring(), m.base_vars(), m.fiber_vars(), rank, std::move(support));
}

StratifiedModule direct_sum(const StratifiedModule& m, const StratifiedModule& n) {
    if (!(*m.ring() == *n.ring()) || m.base_vars() != n.base_vars() ||
        m.fiber_vars() != n.fiber_vars())
        throw Error(Errc::RingMismatch, "direct sum operands");
    const std::size_t rank = m.rank() + n.rank();
    std::set<SupportKey> keys;
    for (const auto& [key, mat] : m.support()) keys.insert(key);
    for (const auto& [key, mat] : n.support()) keys.insert(key);
    std::map<SupportKey, PolyMat> support;
    for (const auto& key : keys) {
        PolyMat block(m.ring(), rank, rank);
        PolyMat am = m.matrix(key.first, key.second);
        PolyMat bn = n.matrix(key.first, key.second);
        for (std::size_t i = 0; i < m.rank(); ++i)
            for (std::size_t j = 0; j < m.rank(); ++j) block.at(i, j) = am.at(i, j);
        for (std::size_t i = 0; i < n.rank(); ++i)
            for (std::size_t j = 0; j < n.rank(); ++j)
                block.at(m.rank() + i, m.rank() + j) = bn.at(i, j);
        support.emplace(key, std::move(block));
    }
    return StratifiedModule(m.ring(), m.base_vars(), m.fiber_vars(), rank, std::move(support));
}

namespace {

// Lexicographically-least root of the source modulus in the target field.
FieldElement embedding_root(const FieldSpecPtr& source, const FieldSpecPtr& target) {
    if (source->p() != target->p())
        throw Error(Errc::NoEmbedding, "different characteristic");
    for (const auto& cand : all_elements(target)) {
        FieldElement acc = FieldElement::zero(target);
        FieldElement power = FieldElement::one(target);
        for (std::size_t i = 0; i < source->modulus().size(); ++i) {
            acc = acc + power * FieldElement::from_int(target, static_cast<std::int64_t>(source->modulus()[i]));
            power = power * cand;
        }
        if (acc.is_zero()) return cand;
    }
    throw Error(Errc::NoEmbedding, "source modulus has no root in target field");
}

} // namespace

FieldElement embed_element(const FieldElement& e, const FieldSpecPtr& target) {
    if (*e.spec() == *target) return FieldElement(target, e.digits());
    FieldElement root = embedding_root(e.spec(), target);
    FieldElement acc = FieldElement::zero(target);
    FieldElement power = FieldElement::one(target);
    for (std::size_t i = 0; i < e.digits().size(); ++i) {
        acc = acc + power * FieldElement::from_int(target, static_cast<std::int64_t>(e.digits()[i]));
        power = power * root;
    }
    return acc;
}

StratifiedModule extend_scalars(const StratifiedModule& m, const FieldSpecPtr& target) {
    if (*m.ring()->spec() == *target) return m;
    FieldElement root = embedding_root(m.ring()->spec(), target);
    auto embed = [&](const FieldElement& e) {
        FieldElement acc = FieldElement::zero(target);
        FieldElement power = FieldElement::one(target);
        for (std::size_t i = 0; i < e.digits().size(); ++i) {
            acc = acc + power * FieldElement::from_int(target, static_cast<std::int64_t>(e.digits()[i]));
            power = power * root;
        }
        return acc;
    };
    PolyRingPtr ring = make_ring(target, m.ring()->vars(), m.ring()->laurent());
    std::map<SupportKey, PolyMat> support;
    for (const auto& [key, mat] : m.support()) {
        PolyMat em = mat.map_entries(ring, [&](const Poly& f) { return f.map_coeffs(ring, embed); });
        support.emplace(key, std::move(em));
    }
    return StratifiedModule(ring, m.base_vars(), m.fiber_vars(), m.rank(), std::move(support));
}

std::vector<FieldElement> reciprocal_operator_row(const FieldSpecPtr& spec, std::int64_t k) {
    // Solve sum_j gamma_j C(-m, j) = C(m, k) for m = 1..k; gamma_0 = 0.
    const std::uint32_t p = spec->p();
    FMatrix a(spec, k, k);
    std::vector<FieldElement> rhs;
    for (std::int64_t m = 1; m <= k; ++m) {
        for (std::int64_t j = 1; j <= k; ++j)
            a.at(m - 1, j - 1) = FieldElement::from_int(spec, binom_mod_p(-m, j, p));
        rhs.push_back(FieldElement::from_int(spec, binom_mod_p(m, k, p)));
    }
    auto sol = a.solve(rhs);
    if (!sol) throw Error(Errc::ProbeCheckFailed, "reciprocal operator system inconsistent");
    return sol->particular;
}

StratifiedModule invert_coordinate(const StratifiedModule& m, std::int64_t cutoff) {
    if (m.fiber_vars().size() != 1)
        throw Error(Errc::MultipleFiberVariables, "exactly one fiber variable required");
    if (!m.base_vars().empty())
        throw Error(Errc::HasBaseVariables, "restrict to a fiber first");
    const std::string& var = m.fiber_vars()[0];
    if (!m.ring()->laurent()[m.ring()->index(var)])
        throw Error(Errc::NotLaurent, var);
    if (cutoff < m.max_order())
        throw Error(Errc::CutoffTooSmall, "cutoff below max support order");

    const auto& spec = m.ring()->spec();
    const std::uint32_t p = spec->p();

    std::vector<std::vector<FieldElement>> gamma(cutoff + 1);
    for (std::int64_t k = 1; k <= cutoff; ++k) {
        gamma[k] = reciprocal_operator_row(spec, k);
        // Probe the operator identity on t^m for |m| <= 2*cutoff.
        for (std::int64_t mm = -2 * cutoff; mm <= 2 * cutoff; ++mm) {
            FieldElement lhs = FieldElement::zero(spec);
            for (std::int64_t j = 1; j <= k; ++j)
                lhs = lhs + gamma[k][j - 1] *
                                FieldElement::from_int(spec, binom_mod_p(-mm, j, p));
            FieldElement rhs = FieldElement::from_int(spec, binom_mod_p(mm, k, p));
            if (!(lhs == rhs))
                throw Error(Errc::ProbeCheckFailed,
                            "k=" + std::to_string(k) + " m=" + std::to_string(mm));
        }
    }

    std::map<SupportKey, PolyMat> support;
    for (std::int64_t k = 1; k <= cutoff; ++k) {
        PolyMat acc(m.ring(), m.rank(), m.rank());
        for (std::int64_t j = 1; j <= k; ++j) {
            if (gamma[k][j - 1].is_zero()) continue;
            PolyMat aj = m.matrix(var, j);
            if (aj.is_zero()) continue;
            // c_{k,j} = gamma_{k,j} t^{-(k+j)}, applied to A_j with x -> 1/t.
            Poly c = Poly::monomial(m.ring(), [&] {
                Exponents e(m.ring()->nvars(), 0);
                e[m.ring()->index(var)] = -(k + j);
                return e;
            }(), gamma[k][j - 1]);
            PolyMat tilde = aj.map_entries(m.ring(), [&](const Poly& f) {
                return f.negate_exponents(var) * c;
            });
            acc = acc + tilde;
        }
        if (!acc.is_zero()) support.emplace(SupportKey{var, k}, std::move(acc));
    }
    StratifiedModule out(m.ring(), m.base_vars(), m.fiber_vars(), m.rank(), std::move(support));
    out.set_truncated_at(cutoff);
    return out;
}

} // namespace strat
