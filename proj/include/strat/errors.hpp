#pragma once

#include <stdexcept>
#include <string>

namespace strat {

// Error codes shared across the library. Mathematical "negative results"
// (NotFoundWithinBound, NotDecomposable, relation violations) are returned
// as values, not thrown; these codes cover contract violations and bad input.
enum class Errc {
    NotPrime,
    ReducibleModulus,
    DegreeMismatch,
    DivisionByZero,
    SpecMismatch,
    Singular,
    ShapeMismatch,
    RingMismatch,
    UnknownVariable,
    ZeroAtLaurentVariable,
    DenominatorDivisibleByP,
    CutoffTooSmall,
    NotUnimodular,
    MissingAssignment,
    NoEmbedding,
    MultipleFiberVariables,
    NotLaurent,
    ProbeCheckFailed,
    DuplicatePoints,
    IndexOutOfRange,
    HasBaseVariables,
    WindowTooLarge,
    UnsupportedShape,
    NonCommutingFamily,
    Overflow,
    ParseError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace strat
