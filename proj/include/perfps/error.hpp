#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace perfps {

enum class Errc {
    not_prime,
    reducible_modulus,
    degree_mismatch,
    field_too_large,
    division_by_zero,
    zero_has_no_valuation,
    negative_exponent,
    denominator_cap_exceeded,
    context_mismatch,
    indeterminate_below,
    precision_increase,
    inner_has_constant_term,
    not_ordinary,
    non_unit_leading_coefficient,
    precision_exhausted,
    degenerate_profile,
    both_ordinary,
    range_too_small,
    arity_mismatch,
    axioms_not_verified,
    not_stabilized,
    not_invertible,
    syntax_error,
    bad_denominator,
    unknown_variable,
    invalid_argument,
};

constexpr std::string_view errc_name(Errc c) noexcept {
    switch (c) {
    case Errc::not_prime: return "NotPrime";
    case Errc::reducible_modulus: return "ReducibleModulus";
    case Errc::degree_mismatch: return "DegreeMismatch";
    case Errc::field_too_large: return "FieldTooLarge";
    case Errc::division_by_zero: return "DivisionByZero";
    case Errc::zero_has_no_valuation: return "ZeroHasNoValuation";
    case Errc::negative_exponent: return "NegativeExponent";
    case Errc::denominator_cap_exceeded: return "DenominatorCapExceeded";
    case Errc::context_mismatch: return "ContextMismatch";
    case Errc::indeterminate_below: return "IndeterminateBelow";
    case Errc::precision_increase: return "PrecisionIncrease";
    case Errc::inner_has_constant_term: return "InnerHasConstantTerm";
    case Errc::not_ordinary: return "NotOrdinary";
    case Errc::non_unit_leading_coefficient: return "NonUnitLeadingCoefficient";
    case Errc::precision_exhausted: return "PrecisionExhausted";
    case Errc::degenerate_profile: return "DegenerateProfile";
    case Errc::both_ordinary: return "BothOrdinary";
    case Errc::range_too_small: return "RangeTooSmall";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::axioms_not_verified: return "AxiomsNotVerified";
    case Errc::not_stabilized: return "NotStabilized";
    case Errc::not_invertible: return "NotInvertible";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::bad_denominator: return "BadDenominator";
    case Errc::unknown_variable: return "UnknownVariable";
    case Errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Base of every exception thrown by the library. `code()` identifies the
/// failure; the message is human readable and starts with the code name.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// A parse failure at a byte offset of the input text.
class SyntaxError : public Error {
public:
    SyntaxError(Errc code, std::size_t position, const std::string& what)
        : Error(code, what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace perfps
