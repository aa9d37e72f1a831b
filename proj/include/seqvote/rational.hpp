#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace seqvote {

// Exact rational with 64-bit numerator/denominator, always kept in lowest
// terms with a positive denominator. Arithmetic throws std::overflow_error
// instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

  double to_double() const { return static_cast<double>(num_) / den_; }
  // "p/q", or "p" when the denominator is 1.
  std::string to_string() const;
  // Accepts "p", "p/q", and "-p/q". Throws std::invalid_argument.
  static Rational parse(const std::string& text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// A non-negative rational extended with +infinity. Used for popularity
// ratios whose denominator may be zero.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(Rational value) : value_(value) {}
  static ExtRational infinity();

  bool is_infinite() const { return infinite_; }
  // Throws std::logic_error when infinite.
  const Rational& value() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a,
                                          const ExtRational& b);

  std::string to_string() const;  // "inf" for +infinity
  static ExtRational parse(const std::string& text);
  double to_double() const;

 private:
  Rational value_;
  bool infinite_ = false;
};

}  // namespace seqvote
