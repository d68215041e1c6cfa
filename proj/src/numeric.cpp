#include "stochlp/numeric.hpp"

#include "stochlp/errors.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace stochlp {

mpq_class parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) throw InputError("empty number");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    mpq_class num = parse_rational(text.substr(0, slash));
    mpq_class den = parse_rational(text.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + raw + "'");
    return num / den;
  }
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
  std::string digits;
  long frac_len = 0;
  bool seen_dot = false, any = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any = true;
      if (seen_dot) ++frac_len;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any) throw InputError("not a number: '" + raw + "'");
  long exp10 = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw InputError("not a number: '" + raw + "'");
    char* end = nullptr;
    std::string rest = text.substr(i + 1);
    exp10 = std::strtol(rest.c_str(), &end, 10);
    if (rest.empty() || *end != '\0') throw InputError("bad exponent in '" + raw + "'");
  }
  mpz_class mant(digits, 10);
  long shift = exp10 - frac_len;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  mpq_class q = shift >= 0 ? mpq_class(mant * pow10) : mpq_class(mant, pow10);
  q.canonicalize();
  return neg ? mpq_class(-q) : q;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_rational(const mpq_class& q) {
  std::string num = q.get_num().get_str();
  std::string den = q.get_den().get_str();
  if (num.size() > 64 || den.size() > 64) return {};
  return num + "/" + den;
}

mpz_class factorial(unsigned n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Budgets default_budgets() {
  Budgets b;
  const char* env = std::getenv("STOCHLP_BUDGET");
  if (!env || !*env) return b;
  std::string s(env);
  if (s.find('=') == std::string::npos) {
    double f = std::atof(env);
    if (f > 0) {
      b.max_cells = static_cast<std::uint64_t>(b.max_cells * f);
      b.max_regions = static_cast<std::uint64_t>(b.max_regions * f);
      b.max_terms = static_cast<std::uint64_t>(b.max_terms * f);
    }
    return b;
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) continue;
    std::string key = item.substr(0, eq);
    auto val = std::strtoull(item.c_str() + eq + 1, nullptr, 10);
    if (key == "cells") b.max_cells = val;
    else if (key == "regions") b.max_regions = val;
    else if (key == "terms") b.max_terms = val;
  }
  return b;
}

}  // namespace stochlp
