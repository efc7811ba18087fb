#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectradiag/scalar.hpp"

namespace spectradiag {

// Value of an absolutely convergent series, or the marker that the series
// fails to converge absolutely.
class ExactSum {
 public:
  ExactSum() : value_(Scalar(0)) {}
  ExactSum(Scalar v) : value_(std::move(v)) {}  // NOLINT: implicit by design
  static ExactSum divergent() { ExactSum s; s.divergent_ = true; return s; }

  bool is_divergent() const noexcept { return divergent_; }
  const Scalar& value() const;  // throws errc::out_of_range when divergent

  std::string str() const { return divergent_ ? "DIVERGENT" : value_.str(); }

  friend ExactSum operator+(const ExactSum& a, const ExactSum& b) {
    if (a.divergent_ || b.divergent_) return divergent();
    return ExactSum(a.value_ + b.value_);
  }
  ExactSum& operator+=(const ExactSum& o) { *this = *this + o; return *this; }

  friend bool operator==(const ExactSum& a, const ExactSum& b) {
    if (a.divergent_ != b.divergent_) return false;
    return a.divergent_ || a.value_ == b.value_;
  }
  friend bool operator!=(const ExactSum& a, const ExactSum& b) { return !(a == b); }

 private:
  bool divergent_ = false;
  Scalar value_;
};

// Terms limit + coeff * ratio^t for t = 1, 2, 3, ... Strictly monotone toward
// the (never attained) limit; the extreme term is limit + coeff * ratio.
struct GeometricTail {
  Scalar limit;
  Scalar coeff;  // nonzero
  Scalar ratio;  // in (0, 1)

  Scalar term(std::uint64_t t) const;
  Scalar first_term() const { return limit + coeff * ratio; }
  // Total distance from the limit: |coeff| * ratio / (1 - ratio).
  Scalar deviation_mass() const;
  // Signed remainder sum_{s >= t} coeff * ratio^s.
  Scalar signed_remainder(std::uint64_t t) const;
};

// One side of a tail split at a threshold. dev_sum is sum of (term - limit)
// over the side's terms; it converges even when the side is infinite, so any
// affine sum over the side can be reconstructed exactly.
struct TailSideView {
  ExtendedCount count;
  Scalar dev_sum;
  Scalar limit;

  // sum over the side of (a * term + b); divergent iff the side is infinite
  // and a * limit + b != 0.
  ExactSum affine_sum(const Scalar& a, const Scalar& b) const;
};

struct TailSplit {
  TailSideView low;   // terms < alpha (or <= alpha when low_closed)
  TailSideView high;  // the rest
};

TailSplit tail_split(const GeometricTail& tail, const Scalar& alpha, bool low_closed);

// Number of tail terms inside the interval cut out by the two bounds.
ExtendedCount tail_count_in_interval(const GeometricTail& tail, const Scalar& lo,
                                     bool lo_closed, const Scalar& hi, bool hi_closed);

// Countable multiset of reals with a closed-form presentation: finitely many
// atoms with finite counts, values of infinite multiplicity, and geometric
// tails. Declared bounds contain every entry.
class DiagonalSequence {
 public:
  using Atom = std::pair<Scalar, std::uint64_t>;

  // Validates and canonicalizes (atoms sorted ascending and merged, infinite
  // atom values deduplicated). Throws errc::bounds_violated when an entry
  // falls outside [lo, hi], errc::out_of_range for a ratio outside (0, 1) or
  // a zero coefficient or count.
  static DiagonalSequence create(Scalar lo, Scalar hi, std::vector<Atom> atoms,
                                 std::vector<Scalar> infinite_atoms,
                                 std::vector<GeometricTail> tails);

  static DiagonalSequence finite(Scalar lo, Scalar hi, const std::vector<Scalar>& values);

  const Scalar& lo() const noexcept { return lo_; }
  const Scalar& hi() const noexcept { return hi_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const std::vector<Scalar>& infinite_atoms() const noexcept { return infinite_atoms_; }
  const std::vector<GeometricTail>& tails() const noexcept { return tails_; }

  bool is_finite() const noexcept { return infinite_atoms_.empty() && tails_.empty(); }
  ExtendedCount entry_count() const;

  // All entries with multiplicity, sorted nonincreasing. Throws
  // errc::precondition_violated unless is_finite().
  std::vector<Scalar> materialize_nonincreasing() const;

  // Entry-wise x -> a * x + b, a != 0. Exact on the closed form.
  DiagonalSequence affine_image(const Scalar& a, const Scalar& b) const;

  DiagonalSequence with_bounds(Scalar lo, Scalar hi) const;

  // Multiset union; bounds are the hull of the operands' bounds.
  friend DiagonalSequence concat(const DiagonalSequence& a, const DiagonalSequence& b);

  // Removes one entry equal to value. Atoms are consumed first; a value of
  // infinite multiplicity absorbs the removal (one copy fewer is still
  // infinitely many); otherwise the generating tail is located, its leading
  // terms are materialized as atoms, and the tail is advanced past the
  // removed term. Throws errc::precondition_violated when no entry matches.
  void remove_one(const Scalar& value);
  void add_atom(const Scalar& value, std::uint64_t count = 1);
  void add_infinite_atom(const Scalar& value);

 private:
  DiagonalSequence() = default;

  Scalar lo_, hi_;
  std::vector<Atom> atoms_;
  std::vector<Scalar> infinite_atoms_;
  std::vector<GeometricTail> tails_;
};

// sum C(alpha) of entries below the cut, deficiency sum D(alpha) of
// B - entry over entries at or above the cut, with the entry counts of both
// sides. Sums that fail absolute convergence are DIVERGENT.
struct CutStatistics {
  Scalar alpha;
  Scalar B;
  ExactSum C;
  ExactSum D;
  ExtendedCount count_below;
  ExtendedCount count_at_least;
};

// Requires alpha in (0, B); throws errc::out_of_range otherwise.
CutStatistics cut_stats(const DiagonalSequence& seq, const Scalar& alpha, const Scalar& B);

// Sum over all entries; divergent unless all infinite atoms and tail limits
// sit at zero.
ExactSum total_sum(const DiagonalSequence& seq);

// sum_{d <= alpha} (alpha - d), exact, DIVERGENT when infinite mass sits
// strictly below alpha.
ExactSum lower_defect_sum(const DiagonalSequence& seq, const Scalar& alpha);

// sum_{d >= alpha} (d - alpha), mirror of lower_defect_sum.
ExactSum upper_excess_sum(const DiagonalSequence& seq, const Scalar& alpha);

// Entry count in the interval with the given endpoint inclusions.
ExtendedCount count_in_interval(const DiagonalSequence& seq, const Scalar& lo, bool lo_closed,
                                const Scalar& hi, bool hi_closed);

// Membership test for the summable-at-both-ends class over [0, 1]: true iff
// every infinite atom and every tail limit is 0 or 1. Requires declared
// bounds inside [0, 1]; throws errc::precondition_violated otherwise.
bool in_class_F(const DiagonalSequence& seq);

// Trace-gap functional (1 - alpha) * C(alpha) + alpha * D(alpha) on [0, 1]
// sequences. Throws errc::not_in_class_f unless in_class_F(seq), and
// errc::out_of_range unless alpha in (0, 1).
Scalar f_value(const DiagonalSequence& seq, const Scalar& alpha);

}  // namespace spectradiag
