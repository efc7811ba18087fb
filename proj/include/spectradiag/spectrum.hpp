#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "spectradiag/scalar.hpp"

namespace spectradiag {

// Eigenvalue-multiplicity list, strictly increasing in eigenvalue.
class SpectrumSpec {
 public:
  using Pair = std::pair<Scalar, ExtendedCount>;

  // Throws errc::precondition_violated unless eigenvalues are strictly
  // increasing, errc::out_of_range for a zero multiplicity.
  static SpectrumSpec create(std::vector<Pair> pairs);

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }

 private:
  std::vector<Pair> pairs_;
};

enum class SpectrumClass { all_finite, one_infinite, two_infinite, many_infinite };

const char* spectrum_class_name(SpectrumClass c) noexcept;

// Number of infinite multiplicities, capped by the four-way branch split.
SpectrumClass classify(const SpectrumSpec& spec);

// Reindexed frame for a spectrum with at least two infinite multiplicities.
// Indices run j = -m..n+p+1; after subtracting `translation` from every
// eigenvalue, A(0) = 0 marks the smallest infinite multiplicity and
// A(n+1) = B the largest. Multiplicities at j < 0 and j > n+1 are finite;
// interior ones (1..n) may still be infinite.
class NormalizedSpec {
 public:
  NormalizedSpec(std::size_t m, std::size_t n, std::size_t p, Scalar translation,
                 std::vector<std::pair<Scalar, ExtendedCount>> entries)
      : m_(m), n_(n), p_(p), translation_(std::move(translation)), entries_(std::move(entries)) {}

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t p() const noexcept { return p_; }
  const Scalar& translation() const noexcept { return translation_; }
  const Scalar& B() const { return A(static_cast<std::ptrdiff_t>(n_) + 1); }

  const Scalar& A(std::ptrdiff_t j) const;
  const ExtendedCount& N(std::ptrdiff_t j) const;

  std::ptrdiff_t lowest_index() const noexcept { return -static_cast<std::ptrdiff_t>(m_); }
  std::ptrdiff_t highest_index() const noexcept {
    return static_cast<std::ptrdiff_t>(n_) + static_cast<std::ptrdiff_t>(p_) + 1;
  }

 private:
  std::size_t m_, n_, p_;
  Scalar translation_;
  std::vector<std::pair<Scalar, ExtendedCount>> entries_;  // position j + m
};

// Throws errc::not_enough_infinite when fewer than two multiplicities are
// infinite.
NormalizedSpec normalize(const SpectrumSpec& spec);

}  // namespace spectradiag
