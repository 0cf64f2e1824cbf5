#include "strat/gf.hpp"

#include <algorithm>

namespace strat {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::ReducibleModulus: return "ReducibleModulus";
    case Errc::DegreeMismatch: return "DegreeMismatch";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::SpecMismatch: return "SpecMismatch";
    case Errc::Singular: return "Singular";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::RingMismatch: return "RingMismatch";
    case Errc::UnknownVariable: return "UnknownVariable";
    case Errc::ZeroAtLaurentVariable: return "ZeroAtLaurentVariable";
    case Errc::DenominatorDivisibleByP: return "DenominatorDivisibleByP";
    case Errc::CutoffTooSmall: return "CutoffTooSmall";
    case Errc::NotUnimodular: return "NotUnimodular";
    case Errc::MissingAssignment: return "MissingAssignment";
    case Errc::NoEmbedding: return "NoEmbedding";
    case Errc::MultipleFiberVariables: return "MultipleFiberVariables";
    case Errc::NotLaurent: return "NotLaurent";
    case Errc::ProbeCheckFailed: return "ProbeCheckFailed";
    case Errc::DuplicatePoints: return "DuplicatePoints";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::HasBaseVariables: return "HasBaseVariables";
    case Errc::WindowTooLarge: return "WindowTooLarge";
    case Errc::UnsupportedShape: return "UnsupportedShape";
    case Errc::NonCommutingFamily: return "NonCommutingFamily";
    case Errc::Overflow: return "Overflow";
    case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

using Fp = std::vector<std::uint32_t>; // dense poly over F_p, little-endian, no trailing zeros

void fp_trim(Fp& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

// remainder of a mod b over F_p; b must be nonzero
Fp fp_mod(Fp a, const Fp& b, std::uint32_t p) {
    fp_trim(a);
    const std::size_t db = b.size() - 1;
    // inverse of leading coefficient of b
    std::uint32_t lead = b.back();
    std::uint32_t lead_inv = 1;
    for (std::uint32_t e = p - 2, base = lead; e; e >>= 1) {
        if (e & 1) lead_inv = static_cast<std::uint64_t>(lead_inv) * base % p;
        base = static_cast<std::uint64_t>(base) * base % p;
    }
    while (a.size() > db) {
        std::uint32_t c = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
        std::size_t shift = a.size() - 1 - db;
        if (c != 0) {
            for (std::size_t i = 0; i <= db; ++i) {
                std::uint64_t sub = static_cast<std::uint64_t>(c) * b[i] % p;
                a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
            }
        }
        a.pop_back();
        fp_trim(a);
        if (a.size() <= db) break;
    }
    return a;
}

// Enumerate monic polynomials of the given degree over F_p and test division.
bool fp_irreducible(const Fp& f, std::uint32_t p) {
    const std::size_t m = f.size() - 1;
    if (m == 1) return true;
    for (std::size_t d = 1; 2 * d <= m; ++d) {
        std::vector<std::uint32_t> coeffs(d, 0); // non-leading coefficients
        while (true) {
            Fp g(coeffs);
            g.push_back(1); // monic of degree d
            Fp r = fp_mod(f, g, p);
            if (r.empty()) return false;
            // next candidate
            std::size_t i = 0;
            for (; i < d; ++i) {
                if (++coeffs[i] < p) break;
                coeffs[i] = 0;
            }
            if (i == d) break;
        }
    }
    return true;
}

} // namespace

FieldSpec::FieldSpec(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus)
    : p_(p), m_(m), modulus_(std::move(modulus)) {
    if (!is_prime(p)) throw Error(Errc::NotPrime, "p = " + std::to_string(p));
    if (m < 1) throw Error(Errc::DegreeMismatch, "extension degree must be >= 1");
    if (modulus_.size() != static_cast<std::size_t>(m) + 1)
        throw Error(Errc::DegreeMismatch, "modulus must have m+1 digits");
    for (auto& d : modulus_)
        if (d >= p) throw Error(Errc::DegreeMismatch, "modulus digit not reduced mod p");
    if (modulus_.back() != 1)
        throw Error(Errc::DegreeMismatch, "modulus must be monic");
    if (m == 1) {
        if (modulus_[0] != 0)
            throw Error(Errc::DegreeMismatch, "for m = 1 the modulus must be T");
    } else if (!fp_irreducible(modulus_, p)) {
        throw Error(Errc::ReducibleModulus, "modulus factors over F_p");
    }
}

std::uint64_t FieldSpec::order() const noexcept {
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < m_; ++i) q *= p_;
    return q;
}

bool FieldSpec::operator==(const FieldSpec& other) const noexcept {
    return p_ == other.p_ && m_ == other.m_ && modulus_ == other.modulus_;
}

FieldSpecPtr make_field(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> modulus) {
    return std::make_shared<const FieldSpec>(p, m, std::move(modulus));
}

FieldElement::FieldElement(FieldSpecPtr spec, std::vector<std::uint32_t> digits)
    : spec_(std::move(spec)), digits_(std::move(digits)) {
    if (digits_.size() != spec_->m())
        throw Error(Errc::DegreeMismatch, "element needs exactly m digits");
    for (auto& d : digits_) d %= spec_->p();
}

FieldElement FieldElement::zero(const FieldSpecPtr& spec) {
    return FieldElement(spec, std::vector<std::uint32_t>(spec->m(), 0));
}

FieldElement FieldElement::one(const FieldSpecPtr& spec) {
    std::vector<std::uint32_t> d(spec->m(), 0);
    d[0] = 1;
    return FieldElement(spec, std::move(d));
}

FieldElement FieldElement::from_int(const FieldSpecPtr& spec, std::int64_t n) {
    std::int64_t p = spec->p();
    std::int64_t r = ((n % p) + p) % p;
    std::vector<std::uint32_t> d(spec->m(), 0);
    d[0] = static_cast<std::uint32_t>(r);
    return FieldElement(spec, std::move(d));
}

FieldElement FieldElement::generator(const FieldSpecPtr& spec) {
    std::vector<std::uint32_t> d(spec->m(), 0);
    if (spec->m() > 1) d[1] = 1;
    return FieldElement(spec, std::move(d));
}

bool FieldElement::is_zero() const noexcept {
    return std::all_of(digits_.begin(), digits_.end(), [](std::uint32_t d) { return d == 0; });
}

bool FieldElement::is_one() const noexcept {
    if (digits_[0] != 1) return false;
    return std::all_of(digits_.begin() + 1, digits_.end(), [](std::uint32_t d) { return d == 0; });
}

void FieldElement::check_same_spec(const FieldElement& o) const {
    if (!(*spec_ == *o.spec_))
        throw Error(Errc::SpecMismatch, "operands live in different fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_spec(o);
    std::vector<std::uint32_t> d(digits_.size());
    const std::uint32_t p = spec_->p();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (digits_[i] + o.digits_[i]) % p;
    return FieldElement(spec_, std::move(d));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_spec(o);
    std::vector<std::uint32_t> d(digits_.size());
    const std::uint32_t p = spec_->p();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (digits_[i] + p - o.digits_[i]) % p;
    return FieldElement(spec_, std::move(d));
}

FieldElement FieldElement::operator-() const {
    std::vector<std::uint32_t> d(digits_.size());
    const std::uint32_t p = spec_->p();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (p - digits_[i]) % p;
    return FieldElement(spec_, std::move(d));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_spec(o);
    const std::uint32_t p = spec_->p();
    const std::size_t m = digits_.size();
    std::vector<std::uint32_t> prod(2 * m - 1, 0);
    for (std::size_t i = 0; i < m; ++i) {
        if (digits_[i] == 0) continue;
        for (std::size_t j = 0; j < m; ++j)
            prod[i + j] = static_cast<std::uint32_t>(
                (prod[i + j] + static_cast<std::uint64_t>(digits_[i]) * o.digits_[j]) % p);
    }
    // reduce mod the (monic) modulus
    const auto& mod = spec_->modulus();
    for (std::size_t k = prod.size(); k-- > m;) {
        std::uint32_t c = prod[k];
        if (c == 0) continue;
        prod[k] = 0;
        for (std::size_t i = 0; i < m; ++i) {
            std::uint64_t sub = static_cast<std::uint64_t>(c) * mod[i] % p;
            prod[k - m + i] = static_cast<std::uint32_t>((prod[k - m + i] + p - sub) % p);
        }
    }
    prod.resize(m);
    return FieldElement(spec_, std::move(prod));
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
    return pow(static_cast<std::int64_t>(spec_->order()) - 2);
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    check_same_spec(o);
    return *this * o.inverse();
}

FieldElement FieldElement::pow(std::int64_t e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement acc = one(spec_);
    FieldElement base = *this;
    std::uint64_t n = static_cast<std::uint64_t>(e);
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

bool FieldElement::operator==(const FieldElement& o) const {
    return *spec_ == *o.spec_ && digits_ == o.digits_;
}

bool FieldElement::operator<(const FieldElement& o) const {
    return digits_ < o.digits_;
}

std::vector<FieldElement> all_elements(const FieldSpecPtr& spec) {
    std::vector<FieldElement> out;
    out.reserve(spec->order());
    std::vector<std::uint32_t> d(spec->m(), 0);
    const std::uint32_t p = spec->p();
    while (true) {
        out.emplace_back(spec, d);
        // digit-lex successor: increment the last digit first
        std::size_t i = d.size();
        while (i-- > 0) {
            if (++d[i] < p) break;
            d[i] = 0;
            if (i == 0) return out;
        }
    }
}

FMatrix::FMatrix(FieldSpecPtr spec, std::size_t rows, std::size_t cols)
    : spec_(std::move(spec)), rows_(rows), cols_(cols),
      a_(rows * cols, FieldElement::zero(spec_)) {}

FMatrix FMatrix::identity(const FieldSpecPtr& spec, std::size_t n) {
    FMatrix m(spec, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = FieldElement::one(spec);
    return m;
}

FieldElement& FMatrix::at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
const FieldElement& FMatrix::at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

FMatrix FMatrix::operator+(const FMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw Error(Errc::ShapeMismatch, "matrix addition");
    FMatrix r(spec_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

FMatrix FMatrix::operator-(const FMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw Error(Errc::ShapeMismatch, "matrix subtraction");
    FMatrix r(spec_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

FMatrix FMatrix::operator*(const FMatrix& o) const {
    if (cols_ != o.rows_) throw Error(Errc::ShapeMismatch, "matrix product");
    FMatrix r(spec_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            if (at(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) = r.at(i, j) + at(i, k) * o.at(k, j);
        }
    return r;
}

FMatrix FMatrix::transpose() const {
    FMatrix r(spec_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool FMatrix::operator==(const FMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool FMatrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const FieldElement& e) { return e.is_zero(); });
}

namespace {

// In-place reduced row echelon form; returns pivot column per pivot row.
std::vector<std::size_t> rref(FMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t sel = row;
        while (sel < m.rows() && m.at(sel, col).is_zero()) ++sel;
        if (sel == m.rows()) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(sel, j), m.at(row, j));
        FieldElement inv = m.at(row, col).inverse();
        for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            FieldElement f = m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

std::size_t FMatrix::rank() const {
    FMatrix m = *this;
    return rref(m).size();
}

std::vector<std::vector<FieldElement>> FMatrix::kernel() const {
    FMatrix m = *this;
    auto pivots = rref(m);
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<FieldElement>> basis;
    for (std::size_t freec = 0; freec < cols_; ++freec) {
        if (is_pivot[freec]) continue;
        std::vector<FieldElement> v(cols_, FieldElement::zero(spec_));
        v[freec] = FieldElement::one(spec_);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m.at(r, freec);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<FMatrix::Solution> FMatrix::solve(const std::vector<FieldElement>& rhs) const {
    if (rhs.size() != rows_) throw Error(Errc::ShapeMismatch, "rhs length");
    FMatrix aug(spec_, rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_) = rhs[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt; // inconsistent
    Solution s;
    s.particular.assign(cols_, FieldElement::zero(spec_));
    for (std::size_t r = 0; r < pivots.size(); ++r)
        s.particular[pivots[r]] = aug.at(r, cols_);
    s.kernel = kernel();
    return s;
}

FMatrix FMatrix::inverse() const {
    if (rows_ != cols_) throw Error(Errc::ShapeMismatch, "inverse of non-square matrix");
    FMatrix aug(spec_, rows_, 2 * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_ + i) = FieldElement::one(spec_);
    }
    auto pivots = rref(aug);
    if (pivots.size() != rows_ || pivots.back() != rows_ - 1)
        throw Error(Errc::Singular, "matrix is singular");
    FMatrix inv(spec_, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
    return inv;
}

} // namespace strat
