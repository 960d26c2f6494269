#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace koopman {

// Operands built over different coordinate charts were combined.
struct ChartMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Polynomial text could not be read; `position` is the byte offset of the
// first offending character.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t pos)
        : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    std::size_t position;
};

// A pairing integral fails to converge absolutely.
struct DivergentPairingError : std::runtime_error {
    explicit DivergentPairingError(const std::string& what)
        : std::runtime_error("divergent pairing: " + what) {}
};

// Matrix assembly found a basis monomial whose image leaves its degree block.
struct DegreeRaisingError : std::runtime_error {
    DegreeRaisingError(const std::string& mono, const std::string& detail)
        : std::runtime_error("degree-raising operator: image of monomial " + mono +
                             " " + detail),
          monomial(mono) {}
    std::string monomial;
};

// A quadrature grid does not cover the stretched support of a flowed function.
struct QuadratureDomainError : std::runtime_error {
    explicit QuadratureDomainError(const std::string& what)
        : std::runtime_error("quadrature domain too small: " + what) {}
};

// Dictionary elements are numerically dependent on the data or against the
// Gaussian measure.
struct IllConditionedDictionaryError : std::runtime_error {
    IllConditionedDictionaryError(const std::string& what, double cond)
        : std::runtime_error("ill-conditioned dictionary: " + what +
                             " (condition number " + std::to_string(cond) + ")"),
          condition_number(cond) {}
    double condition_number;
};

}  // namespace koopman
