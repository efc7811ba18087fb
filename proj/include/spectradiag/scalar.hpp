#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "spectradiag/errors.hpp"

namespace spectradiag {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Exact rational scalar. Always stored canonically (reduced, positive
// denominator); serialization is "p/q", or just "p" when q == 1.
class Scalar {
 public:
  Scalar() : v_(0) {}
  Scalar(std::int64_t n) : v_(n) {}  // NOLINT: implicit by design, mirrors int literals
  Scalar(std::int64_t num, std::int64_t den);
  Scalar(BigInt num, BigInt den);
  explicit Scalar(BigRational v) : v_(std::move(v)) {}

  // Parses "p", "-p", "p/q". Throws errc::parse_error on anything else.
  static Scalar parse(const std::string& text);

  const BigRational& value() const noexcept { return v_; }
  BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  BigInt denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_integer() const { return denominator() == 1; }
  bool is_zero() const { return v_.is_zero(); }
  int sign() const { return v_.sign(); }

  // Largest integer <= *this, as a Scalar.
  Scalar floor() const;

  std::string str() const;
  double to_double() const { return v_.convert_to<double>(); }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return Scalar(BigRational(a.v_ + b.v_)); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return Scalar(BigRational(a.v_ - b.v_)); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return Scalar(BigRational(a.v_ * b.v_)); }
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar operator-() const { return Scalar(BigRational(-v_)); }

  Scalar& operator+=(const Scalar& o) { v_ += o.v_; return *this; }
  Scalar& operator-=(const Scalar& o) { v_ -= o.v_; return *this; }
  Scalar& operator*=(const Scalar& o) { v_ *= o.v_; return *this; }
  Scalar& operator/=(const Scalar& o) { *this = *this / o; return *this; }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return a.v_ != b.v_; }
  friend bool operator<(const Scalar& a, const Scalar& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s);

 private:
  BigRational v_;
};

// x - floor(x), always in [0, 1). frac_mod_one(7/3) = 1/3, frac_mod_one(-1/2) = 1/2.
Scalar frac_mod_one(const Scalar& x);

// Count in N union {infinity}. Arithmetic saturates at infinity.
class ExtendedCount {
 public:
  ExtendedCount() : finite_(0) {}
  ExtendedCount(std::uint64_t n) : finite_(n) {}  // NOLINT: implicit by design
  static ExtendedCount infinite() { ExtendedCount c; c.infinite_ = true; return c; }

  // Parses a nonnegative integer or "inf".
  static ExtendedCount parse(const std::string& text);

  bool is_infinite() const noexcept { return infinite_; }
  std::uint64_t finite_value() const;  // throws errc::out_of_range when infinite

  std::string str() const;

  friend ExtendedCount operator+(const ExtendedCount& a, const ExtendedCount& b);
  ExtendedCount& operator+=(const ExtendedCount& o) { *this = *this + o; return *this; }

  friend bool operator==(const ExtendedCount& a, const ExtendedCount& b);
  friend bool operator!=(const ExtendedCount& a, const ExtendedCount& b) { return !(a == b); }
  // Total order with infinity as top.
  friend bool operator<(const ExtendedCount& a, const ExtendedCount& b);
  friend bool operator<=(const ExtendedCount& a, const ExtendedCount& b) { return a < b || a == b; }
  friend bool operator>(const ExtendedCount& a, const ExtendedCount& b) { return b < a; }
  friend bool operator>=(const ExtendedCount& a, const ExtendedCount& b) { return b <= a; }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedCount& c);

 private:
  bool infinite_ = false;
  std::uint64_t finite_ = 0;
};

}  // namespace spectradiag
