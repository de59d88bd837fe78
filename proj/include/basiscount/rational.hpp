#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace basiscount {

/// Parses "a", "-a" or "a/b" into a canonical rational. Throws on malformed input
/// or a zero denominator.
inline mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  auto valid_integer = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](const std::string& s) { return (!s.empty() && s[0] == '+') ? s.substr(1) : s; };
  if (slash == std::string::npos) {
    if (!valid_integer(text)) throw std::invalid_argument("malformed rational literal '" + text + "'");
    return mpq_class(mpz_class(strip_plus(text)));
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den))
    throw std::invalid_argument("malformed rational literal '" + text + "'");
  mpz_class d(strip_plus(den));
  if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  mpq_class q(mpz_class(strip_plus(num)), d);
  q.canonicalize();
  return q;
}

/// Exact rational value of a finite double (every double is a dyadic rational).
inline mpq_class rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value has no rational form");
  mpq_class q(x);
  return q;
}

inline std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

inline double to_double(const mpq_class& q) { return q.get_d(); }

/// Natural log of a positive rational without overflowing through double.
inline double log_rational(const mpq_class& q) {
  if (sgn(q) <= 0) throw std::domain_error("log of nonpositive rational");
  long exp_num = 0, exp_den = 0;
  const double mant_num = mpz_get_d_2exp(&exp_num, q.get_num_mpz_t());
  const double mant_den = mpz_get_d_2exp(&exp_den, q.get_den_mpz_t());
  return std::log(mant_num) - std::log(mant_den) +
         static_cast<double>(exp_num - exp_den) * std::log(2.0);
}

inline mpz_class lcm_of_denominators(const std::vector<mpq_class>& row) {
  mpz_class l = 1;
  for (const auto& q : row) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  return l;
}

}  // namespace basiscount
