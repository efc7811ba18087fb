#pragma once

#include <string>
#include <vector>

#include "spectradiag/sequences.hpp"

namespace spectradiag {

// One aggregate sum tracked across a rewrite, measured at a declared
// threshold. The pair (before, after) is exact, so replaying the change
// backwards recovers the original aggregate.
struct AggregateChange {
  std::string label;
  Scalar threshold;
  ExactSum before;
  ExactSum after;
};

struct TransformReceipt {
  Scalar moved_mass;
  std::string touched_indices;  // readable descriptor of the selection that was rewritten
  std::vector<AggregateChange> changes;
};

struct TransformResult {
  DiagonalSequence sequence;
  TransformReceipt receipt;
};

// Moves eta0 of mass out of the selection i0 (down toward A, smallest value
// first) and into the selection i1 (up toward B, largest value first). The
// selections are multisets of entry values that must be present in the
// sequence; every other entry is unchanged. Exactly:
//   sum_{i0}(d' - A) = sum_{i0}(d - A) - eta0,
//   sum_{i1}(B - d') = sum_{i1}(B - d) - eta0.
// Throws errc::order_violated when max(i0) > min(i1), errc::budget_exceeded
// when eta0 exceeds either side's headroom, errc::out_of_range for selection
// values outside [A, B].
TransformResult move_toward_endpoints(const DiagonalSequence& seq, std::vector<Scalar> i0,
                                      std::vector<Scalar> i1, const Scalar& eta0, const Scalar& A,
                                      const Scalar& B);

// Rebalances the sub-multiset J (values in [-gamma, delta]) so that the
// negative-side sum drops by exactly eta and the positive-side sum rises by
// exactly eta, touching only finitely many entries:
//   sum_{J, d'<0} d' = sum_{J, d<0} d - eta,
//   sum_{J, d'>0} d' = sum_{J, d>0} d + eta.
// Requires one side of J to carry infinite headroom, i.e.
// sum_{d<=0}(d+gamma) or sum_{d>=0}(delta-d) divergent; otherwise throws
// errc::hypothesis_violated. ceil(eta/gamma) entries end up below zero.
TransformResult decouple(const DiagonalSequence& seq, const DiagonalSequence& J,
                         const Scalar& gamma, const Scalar& delta, const Scalar& eta);

struct ExtremeSplit {
  ExtendedCount count_zero;
  DiagonalSequence interior;
  ExtendedCount count_top;
};

// Partitions entries of a sequence in [0, B] by value into {0}, (0, B), {B}.
// The interior part keeps its presentation, so cut statistics on (0, B) are
// unchanged.
ExtremeSplit split_extremes(const DiagonalSequence& seq, const Scalar& B);

// Collapses all entries at distance <= eps' from an endpoint onto the
// endpoint, for a calibrated cutoff eps' chosen so the displaced mass fits
// onto a single receiver entry per side without crossing eps. Afterwards all
// but finitely many entries are 0 or 1, entries in [eps, 1-eps] are
// untouched, the index sets below eps and above 1-eps are preserved, and
//   sum_{d<eps} d  and  sum_{d>1-eps}(1-d)
// are preserved exactly. The receiver on the low side is the largest entry
// in (0, eps); on the high side the smallest entry in (1-eps, 1). Throws
// errc::no_receiver when a side has no candidate, errc::not_in_class_f when
// the sequence is not summable toward both endpoints, errc::out_of_range for
// eps outside (0, 1/2).
TransformResult truncate_to_finite(const DiagonalSequence& seq, const Scalar& epsilon);

}  // namespace spectradiag
