#pragma once

#include <string_view>
#include <vector>

#include "koopman/polynomial.hpp"

namespace koopman {

// Reads the polynomial text grammar (README documents the EBNF):
//
//   poly     = [sign] term { ("+" | "-") term } ;
//   term     = factor { "*" factor } ;
//   factor   = coefficient | identifier [ "^" integer ] ;
//   coefficient = number [ "i" ]
//               | "(" signed-number [ ("+" | "-") number "i" ] ")" ;
//
// Identifiers must name chart coordinates; the imaginary unit is the "i"
// suffix on a number (write "1i", not "i"). Whitespace is free. Failures
// raise ParseError with the byte offset.
Polynomial parse_polynomial(const Chart& chart, std::string_view text);

// Identifiers in order of first appearance; used by the CLI to build a chart
// for inline input before parsing strictly.
std::vector<std::string> scan_identifiers(std::string_view text);

}  // namespace koopman
