#pragma once

#include <gmpxx.h>

#include <string>

namespace stochlp {

// Exact value of a decimal literal such as "0.1", "-2.5e-3" or "7/3".
mpq_class parse_rational(const std::string& text);

// Shortest-free 17 significant digit rendering used for all reports.
std::string format_double(double v);

// "p/q" when both parts fit in 64 digits, otherwise empty.
std::string format_rational(const mpq_class& q);

mpz_class factorial(unsigned n);
mpz_class binomial(unsigned n, unsigned k);

}  // namespace stochlp
