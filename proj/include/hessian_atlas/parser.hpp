#pragma once

#include <string>
#include <string_view>

#include "hessian_atlas/poly.hpp"

namespace hatlas {

/// Parses integer, decimal (optionally with exponent) and rational literals,
/// the variables x and y, + - * / ^ and parentheses. Juxtaposition means
/// multiplication ("3xy^2"). Arithmetic is exact; coefficients are rounded
/// to double once at the end. Throws ParseError with a 1-based column.
BivariatePolynomial parse_polynomial(std::string_view text);

/// Canonical text form; parse_polynomial(to_string(p)) == p.
std::string to_string(const BivariatePolynomial& p);

}  // namespace hatlas
