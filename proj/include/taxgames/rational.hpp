#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace taxgames {

/// Exact rational used for every cost, tax and mean value.
using Rational = mpq_class;

/// One rational per agent.
using CostVector = std::vector<Rational>;

/// Parses "7", "-3", "2/3" or a decimal such as "0.125" exactly.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "p/q" when q != 1, otherwise "p".
std::string to_string(const Rational& value);

/// Fixed-point rendering with `digits` fractional digits (rounded toward zero).
std::string to_decimal(const Rational& value, int digits = 6);

CostVector zero_vector(std::size_t agents);

}  // namespace taxgames
