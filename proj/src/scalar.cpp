#include "spectradiag/scalar.hpp"

#include <cctype>
#include <ostream>

namespace spectradiag {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::length_mismatch: return "LengthMismatch";
    case errc::hypothesis_violated: return "HypothesisViolated";
    case errc::out_of_range: return "OutOfRange";
    case errc::not_in_class_f: return "NotInClassF";
    case errc::not_summable: return "NotSummable";
    case errc::interior_infinite: return "InteriorInfinite";
    case errc::not_nondecreasing: return "NotNondecreasing";
    case errc::not_enough_infinite: return "NotEnoughInfinite";
    case errc::bounds_violated: return "BoundsViolated";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::order_violated: return "OrderViolated";
    case errc::no_receiver: return "NoReceiver";
    case errc::precondition_violated: return "PreconditionViolated";
    case errc::infeasible_input: return "InfeasibleInput";
    case errc::parse_error: return "ParseError";
  }
  return "UnknownError";
}

Scalar::Scalar(std::int64_t num, std::int64_t den) : Scalar(BigInt(num), BigInt(den)) {}

Scalar::Scalar(BigInt num, BigInt den) {
  if (den == 0) fail(errc::parse_error, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  v_ = BigRational(std::move(num), std::move(den));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (b.is_zero()) fail(errc::out_of_range, "division by zero");
  return Scalar(BigRational(a.v_ / b.v_));
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_signed_integer(const std::string& s) {
  std::string body = s;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body.erase(body.begin());
  }
  if (!all_digits(body)) fail(errc::parse_error, "not an integer: '" + s + "'");
  BigInt v(body);
  return neg ? BigInt(-v) : v;
}

}  // namespace

Scalar Scalar::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Scalar(BigRational(parse_signed_integer(text)));
  BigInt num = parse_signed_integer(text.substr(0, slash));
  std::string den_text = text.substr(slash + 1);
  if (!all_digits(den_text)) fail(errc::parse_error, "bad denominator: '" + text + "'");
  BigInt den(den_text);
  if (den == 0) fail(errc::parse_error, "zero denominator: '" + text + "'");
  return Scalar(std::move(num), std::move(den));
}

Scalar Scalar::floor() const {
  BigInt n = numerator();
  BigInt d = denominator();
  BigInt q = n / d;
  if (n % d != 0 && n < 0) --q;
  return Scalar(BigRational(q));
}

std::string Scalar::str() const { return v_.str(); }

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

Scalar frac_mod_one(const Scalar& x) { return x - x.floor(); }

ExtendedCount ExtendedCount::parse(const std::string& text) {
  if (text == "inf") return infinite();
  if (!text.empty() && text[0] != '-') {
    bool digits = true;
    for (char c : text) digits = digits && std::isdigit(static_cast<unsigned char>(c));
    if (digits) return ExtendedCount(std::stoull(text));
  }
  fail(errc::parse_error, "bad count: '" + text + "'");
}

std::uint64_t ExtendedCount::finite_value() const {
  if (infinite_) fail(errc::out_of_range, "count is infinite");
  return finite_;
}

std::string ExtendedCount::str() const { return infinite_ ? "inf" : std::to_string(finite_); }

ExtendedCount operator+(const ExtendedCount& a, const ExtendedCount& b) {
  if (a.infinite_ || b.infinite_) return ExtendedCount::infinite();
  return ExtendedCount(a.finite_ + b.finite_);
}

bool operator==(const ExtendedCount& a, const ExtendedCount& b) {
  if (a.infinite_ != b.infinite_) return false;
  return a.infinite_ || a.finite_ == b.finite_;
}

bool operator<(const ExtendedCount& a, const ExtendedCount& b) {
  if (a.infinite_) return false;
  if (b.infinite_) return true;
  return a.finite_ < b.finite_;
}

std::ostream& operator<<(std::ostream& os, const ExtendedCount& c) { return os << c.str(); }

}  // namespace spectradiag
