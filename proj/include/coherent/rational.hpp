#pragma once

// Exact rational scalar used throughout the library.

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace coherent {

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.  Thin value wrapper over GMP's mpq_class.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : q_(v) {}                 // NOLINT(google-explicit-constructor)
  Rational(long v) : q_(v) {}                // NOLINT(google-explicit-constructor)
  Rational(long long v) : q_(std::to_string(v)) {}  // NOLINT
  Rational(unsigned v) : q_(v) {}            // NOLINT
  Rational(unsigned long v) : q_(v) {}       // NOLINT
  Rational(long num, long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
  explicit Rational(const mpz_class& z) : q_(z) {}
  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  const mpq_class& raw() const { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  /// Display-only float snapshot.
  double to_double() const { return q_.get_d(); }

  /// "num/den" form; the denominator is always written, even when it is 1.
  std::string to_string() const {
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }
  /// Short form: "num" for integers, otherwise "num/den".
  std::string to_short_string() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return to_string();
  }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_short_string();
  }

  std::size_t hash() const {
    return std::hash<std::string>{}(q_.get_str());
  }

 private:
  mpq_class q_{0};
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// r^e for integer e >= 0; negative e inverts.
inline Rational pow(const Rational& base, long e) {
  if (e < 0) return Rational(1) / pow(base, -e);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.raw().get_num_mpz_t(), static_cast<unsigned long>(e));
  mpz_pow_ui(d.get_mpz_t(), base.raw().get_den_mpz_t(), static_cast<unsigned long>(e));
  return Rational(n, d);
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline mpz_class parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed integer");
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

}  // namespace detail

/// Parses "int", "int/int" or a finite decimal ("0.3", "-1.25", ".5").
/// Decimals are converted exactly.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  const std::string original(text);
  try {
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
      const auto num = detail::parse_integer(trim(text.substr(0, slash)));
      const auto den_text = trim(text.substr(slash + 1));
      if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+'))
        throw std::invalid_argument("signed denominator");
      const auto den = detail::parse_integer(den_text);
      if (den == 0) throw std::domain_error("zero denominator in '" + original + "'");
      return Rational(num, den);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
      bool neg = false;
      std::string_view s = text;
      if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
      }
      const auto dot2 = s.find('.');
      auto ip = s.substr(0, dot2);
      auto fp = s.substr(dot2 + 1);
      if (ip.empty() && fp.empty()) throw std::invalid_argument("empty decimal");
      if ((!ip.empty() && !detail::all_digits(ip)) || (!fp.empty() && !detail::all_digits(fp)))
        throw std::invalid_argument("malformed decimal");
      std::string digits = std::string(ip) + std::string(fp);
      if (digits.empty()) digits = "0";
      mpz_class num(digits, 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
      if (neg) num = -num;
      return Rational(num, den);
    }
    return Rational(detail::parse_integer(text));
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational '" + original + "'");
  }
}

namespace literals {
inline Rational operator""_q(const char* s, std::size_t n) {
  return parse_rational(std::string_view(s, n));
}
}  // namespace literals

}  // namespace coherent

template <>
struct std::hash<coherent::Rational> {
  std::size_t operator()(const coherent::Rational& r) const { return r.hash(); }
};
