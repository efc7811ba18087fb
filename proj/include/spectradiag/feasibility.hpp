#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectradiag/sequences.hpp"
#include "spectradiag/spectrum.hpp"

namespace spectradiag {

enum class Branch { classical, one_infinite, two_infinite_summable, non_summable, many_infinite };

const char* branch_name(Branch b) noexcept;

// Outcome of a feasibility decision. Slacks carry the margin of every
// inequality that was evaluated, keyed by a stable condition id; for
// equality-type conditions the recorded value is the residue, which must be
// zero. A feasible verdict has no failed_condition and every recorded slack
// is finite and nonnegative.
struct FeasibilityVerdict {
  bool feasible = false;
  Branch branch = Branch::classical;
  std::optional<Scalar> k0;  // integer-valued trace shift, summable branches only
  std::vector<std::pair<std::string, ExactSum>> slacks;
  std::optional<std::string> failed_condition;
};

// Slack of the lower exterior inequality at each r = -m..0:
//   sum_{j<r} N_j (A_r - A_j)  -  sum_{d <= A_r} (A_r - d).
// Nonnegative everywhere iff the condition holds; a DIVERGENT entry means
// infinite defect mass below the threshold (failure). Works in the original
// (untranslated) coordinates. Throws errc::hypothesis_violated when the
// sequence leaves [A_{-m}, A_{n+p+1}].
std::vector<std::pair<int, ExactSum>> lower_exterior_check(const DiagonalSequence& seq,
                                                           const NormalizedSpec& nspec);

// Mirror image at each r = n+1..n+p+1:
//   sum_{j>r} N_j (A_j - A_r)  -  sum_{d >= A_r} (d - A_r).
std::vector<std::pair<int, ExactSum>> upper_exterior_check(const DiagonalSequence& seq,
                                                           const NormalizedSpec& nspec);

// Trace-class comparison against finitely many eigenvalues decreasing to
// lambda_inf: sum over d_i >= lambda_inf of (d_i - lambda_inf) bounded by
// sum_j N_j (lambda_j - lambda_inf).
bool infinite_tail_exterior_check(const std::vector<Scalar>& d_values,
                                  const std::vector<std::pair<Scalar, std::uint64_t>>& lambdas,
                                  const Scalar& lambda_inf);

// Projection-diagonal feasibility for values in [0, 1]: feasible when the cut
// statistics diverge at 1/2, or when C(1/2) - D(1/2) is an integer (recorded
// as k0). Throws errc::bounds_violated for entries outside [0, 1].
FeasibilityVerdict kadison_check(const DiagonalSequence& seq);

// Partition variant: given exact sums over a declared partition, feasibility
// is integrality of mass0 - deficiency1.
bool kadison_partition_check(const DiagonalSequence& seq, const Scalar& mass0,
                             const Scalar& deficiency1);

// Interior majorization relative to a frame with n >= 1 interior eigenvalues:
// the trace residue pins k0 (id "fulltrace1"), then one counting inequality
// per interior eigenvalue (ids "fullmaj1:r=..."). Throws
// errc::precondition_violated when n = 0, errc::interior_infinite when an
// interior multiplicity is infinite, errc::not_summable when the cut sums
// diverge at B/2.
FeasibilityVerdict interior_majorization_check(const DiagonalSequence& seq,
                                               const NormalizedSpec& nspec);

// Nondecreasing sequence indexed by all integers: a lower tail descending to
// its limit as i -> -infinity (coeff >= 0; zero coeff means the side is
// constant at the limit), a finite middle d_1..d_M, and an upper tail
// ascending to its limit (coeff <= 0). Entry i <= 0 is lower.term(1 - i);
// entry M + t is upper.term(t).
struct ZSequence {
  GeometricTail lower;
  std::vector<Scalar> middle;
  GeometricTail upper;
};

// Throws errc::not_nondecreasing for orientation or seam violations,
// errc::bounds_violated when entries leave [0, B].
void validate_z_sequence(const ZSequence& z, const Scalar& B);

// Ordered partial-sum feasibility at shift k: with the eigenvalue staircase
// lambda_i (zeros for i <= 0, A_r blocks, then B), checks
// delta_m = sum_{i<=m}(d_{i-k} - lambda_i) >= 0 for all m with delta_m -> 0.
// Requires a frame with m = p = 0 (errc::precondition_violated otherwise),
// finite interior multiplicities (errc::interior_infinite), and a summable
// lower tail, i.e. limit 0 (errc::not_summable).
bool riemann_interior_check(const ZSequence& z, const NormalizedSpec& nspec, std::int64_t k);

// The limit condition is linear in k, so at most one shift can work; returns
// it when the full check passes there.
std::optional<std::int64_t> riemann_interior_search(const ZSequence& z,
                                                    const NormalizedSpec& nspec);

// The same entries as an unordered sequence, for cross-checking against the
// cut-statistics formulation.
DiagonalSequence to_diagonal_sequence(const ZSequence& z, const Scalar& B);

// True when the ordered (shift-based) and unordered (cut-statistics) interior
// conditions return the same verdict on z.
bool equivalence_audit(const ZSequence& z, const NormalizedSpec& nspec);

// Full decision: dispatches on the number of infinite multiplicities.
// Throws errc::bounds_violated when the sequence leaves the eigenvalue hull.
FeasibilityVerdict decide_diagonal(const DiagonalSequence& seq, const SpectrumSpec& spec);

}  // namespace spectradiag
