#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spectradiag/sequences.hpp"

namespace spectradiag {

// One two-dimensional rotation of the construction chain: rows/columns
// (axis_a, axis_b) were mixed with cosine c and sine s so that the diagonal
// entry at axis_a landed exactly on target.
struct RotationStep {
  std::size_t axis_a;
  std::size_t axis_b;
  double c;
  double s;
  Scalar target;
};

// Dense real symmetric matrix stored as a packed upper triangle, so the
// symmetry invariant holds by construction: at(i, j) and at(j, i) read the
// same stored value. Diagonal entries are set, never recomputed.
class SymmetricMatrixWitness {
 public:
  explicit SymmetricMatrixWitness(std::size_t n) : n_(n), upper_(n * (n + 1) / 2, 0.0) {}

  std::size_t dimension() const noexcept { return n_; }
  double at(std::size_t i, std::size_t j) const { return upper_[index(i, j)]; }
  void set(std::size_t i, std::size_t j, double value) { upper_[index(i, j)] = value; }

  const std::vector<RotationStep>& provenance() const noexcept { return steps_; }
  void record_step(RotationStep step) { steps_.push_back(std::move(step)); }

  // Comma-separated rows, full precision round-trip format.
  std::string to_csv() const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i + 1) / 2 + j;
  }

  std::size_t n_;
  std::vector<double> upper_;
  std::vector<RotationStep> steps_;
};

std::vector<Scalar> decreasing_rearrangement(std::vector<Scalar> v);

// mu is majorized by lambda: equal sums, and each prefix of the sorted
// nonincreasing lambda dominates the matching prefix of sorted mu. Throws
// errc::length_mismatch for unequal sizes, errc::precondition_violated when
// either vector is empty.
bool majorizes(const std::vector<Scalar>& mu, const std::vector<Scalar>& lambda);

// Feasibility of d as the diagonal of a symmetric matrix with eigenvalue
// list lambda; identical to majorizes(d, lambda).
bool schur_horn_check(const std::vector<Scalar>& lambda, const std::vector<Scalar>& d);

enum class Orientation { nonincreasing, nondecreasing };

// Feasibility of an infinite diagonal for a positive rank-N operator with
// eigenvalues lambda. d_interior is the length-N block aligned with lambda;
// d_tail holds every remaining diagonal term. With the nonincreasing
// orientation the tail follows the block and each tail entry must not exceed
// the block's last entry; the nondecreasing orientation is the mirror image
// (tail precedes the block, bounded by its first entry). The verdict is:
// every aligned suffix (resp. prefix) sum of the diagonal, tail included,
// dominates the matching sum of lambda, with equality over the whole
// sequence. Throws errc::hypothesis_violated when positivity or one of the
// ordering hypotheses fails.
bool finite_rank_check(const std::vector<Scalar>& lambda, const std::vector<Scalar>& d_interior,
                       const DiagonalSequence& d_tail, Orientation orientation);

// Builds an N x N symmetric matrix with diagonal exactly d (in the given
// order) and eigenvalues lambda, via a chain of at most N - 1 rotations,
// each freezing one diagonal entry onto its target. Throws
// errc::infeasible_input unless schur_horn_check(lambda, d) passes.
SymmetricMatrixWitness construct_matrix(const std::vector<Scalar>& lambda,
                                        const std::vector<Scalar>& d);

// Largest absolute gap between the witness's eigenvalues and lambda, both
// sorted. Eigenvalues come from a dense symmetric eigensolver.
double validate_eigenvalues(const SymmetricMatrixWitness& witness,
                            const std::vector<Scalar>& lambda);

}  // namespace spectradiag
