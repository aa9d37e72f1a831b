#include "seqvote/rational.hpp"

#include <limits>
#include <numeric>

namespace seqvote {
namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < -std::numeric_limits<std::int64_t>::max()) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(Wide num, Wide den) {
  if (den == 0) throw std::domain_error("rational division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::operator-() const { return make(-Wide{num_}, den_); }

Rational operator+(const Rational& a, const Rational& b) {
  return make(Wide{a.num_} * b.den_ + Wide{b.num_} * a.den_,
              Wide{a.den_} * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make(Wide{a.num_} * b.num_, Wide{a.den_} * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational division by zero");
  return make(Wide{a.num_} * b.den_, Wide{a.den_} * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide lhs = Wide{a.num_} * b.den_;
  Wide rhs = Wide{b.num_} * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      std::int64_t v = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Rational(v);
    }
    std::string head = text.substr(0, slash);
    std::string tail = text.substr(slash + 1);
    std::int64_t p = std::stoll(head, &used);
    if (used != head.size()) throw std::invalid_argument(text);
    std::int64_t q = std::stoll(tail, &used);
    if (used != tail.size() || q == 0) throw std::invalid_argument(text);
    return Rational(p, q);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed rational: '" + text + "'");
  }
}

ExtRational ExtRational::infinity() {
  ExtRational r;
  r.infinite_ = true;
  return r;
}

const Rational& ExtRational::value() const {
  if (infinite_) throw std::logic_error("value() of infinite ratio");
  return value_;
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) {
    return static_cast<int>(a.infinite_) <=> static_cast<int>(b.infinite_);
  }
  return a.value_ <=> b.value_;
}

std::string ExtRational::to_string() const {
  return infinite_ ? "inf" : value_.to_string();
}

ExtRational ExtRational::parse(const std::string& text) {
  if (text == "inf") return infinity();
  return ExtRational(Rational::parse(text));
}

double ExtRational::to_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity()
                   : value_.to_double();
}

}  // namespace seqvote
