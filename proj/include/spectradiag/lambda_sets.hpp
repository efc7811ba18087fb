#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spectradiag/sequences.hpp"

namespace spectradiag {

// How a minimal element was assembled. The first two tags mean the target
// constant vector ((k+eta)/N, ..., (k+eta)/N) is itself feasible, certified
// from above (case1) or below (case2); case3 carries the two-level solution
// with plateau values a and b around the untouched middle entries.
enum class MinimalCase { case1, case2, case3 };

const char* minimal_case_name(MinimalCase c) noexcept;

struct MinimalElement {
  std::uint64_t k = 0;
  std::vector<Scalar> mu;  // nonincreasing, length N, values in (0, 1), sum k + eta
  MinimalCase tag = MinimalCase::case1;
  std::optional<Scalar> a;
  std::optional<Scalar> b;
  std::optional<std::uint64_t> Na;
  std::optional<std::uint64_t> Nb;
};

struct MinimalElementReport {
  Scalar eta;
  std::vector<MinimalElement> entries;  // ascending k
};

// Fractional trace invariant: frac_mod_one(C(1/2) - D(1/2)). Every feasible
// N-point spectrum of the sequence sums to k + eta for some natural k.
// Throws errc::not_in_class_f; declared bounds outside [0, 1] surface as
// errc::precondition_violated from the class test.
Scalar eta_of(const DiagonalSequence& seq);

// Minimal element of {lambda in (0,1)^N : d-padded majorization holds} where
// d (nonincreasing, sum K + eta) is padded with K - k ones and the rest
// zeros. Requires N < |d|, k <= K, k + eta > 0, K - k <= |d| - N, and the
// target (k + eta)/N inside (0, 1); violations throw
// errc::precondition_violated with the failed requirement named.
MinimalElement minimal_element(const std::vector<Scalar>& d, std::uint64_t K, const Scalar& eta,
                               std::uint64_t N, std::uint64_t k);

// All minimal elements of the feasible N-point spectra of seq: one per
// admissible trace class k + eta, k = 0..N-1, with k = 0 dropped when
// eta = 0. Requires infinitely many entries in (0, 1/2) and in [1/2, 1)
// (errc::hypothesis_violated otherwise). The two-argument form picks the
// truncation width deterministically; the explicit form requires an epsilon
// leaving at least N entries strictly between epsilon and every target and
// N more between every target and 1 - epsilon.
MinimalElementReport minimal_set(const DiagonalSequence& seq, std::uint64_t N);
MinimalElementReport minimal_set(const DiagonalSequence& seq, std::uint64_t N,
                                 const Scalar& epsilon);

// Exact membership test for a prescribed list of interior eigenvalues:
// the trace must match the sequence's invariant mod 1, and the trace-gap
// functional of the sequence must dominate the list's at every listed value.
// Throws errc::not_in_class_f, errc::out_of_range for lambda outside (0, 1),
// errc::precondition_violated for an empty lambda.
bool lambda_membership(const DiagonalSequence& seq, const std::vector<Scalar>& lambda);

// Two geometric tails meeting at the endpoints: entries beta^t toward 0 and
// 1 - beta^t toward 1. Throws errc::out_of_range unless beta is in (0, 1).
DiagonalSequence beta_sequence(const Scalar& beta);

}  // namespace spectradiag
