#include "spectradiag/spectrum.hpp"

#include <cstdlib>

#include "spectradiag/errors.hpp"

namespace spectradiag {

SpectrumSpec SpectrumSpec::create(std::vector<Pair> pairs) {
  if (pairs.empty()) fail(errc::precondition_violated, "spectrum must have at least one eigenvalue");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0 && !(pairs[i - 1].first < pairs[i].first)) {
      fail(errc::precondition_violated, "eigenvalues must be strictly increasing");
    }
    if (!pairs[i].second.is_infinite() && pairs[i].second.finite_value() == 0) {
      fail(errc::out_of_range, "multiplicity must be at least 1");
    }
  }
  SpectrumSpec spec;
  spec.pairs_ = std::move(pairs);
  return spec;
}

const char* spectrum_class_name(SpectrumClass c) noexcept {
  switch (c) {
    case SpectrumClass::all_finite: return "ALL_FINITE";
    case SpectrumClass::one_infinite: return "ONE_INFINITE";
    case SpectrumClass::two_infinite: return "TWO_INFINITE";
    case SpectrumClass::many_infinite: return "MANY_INFINITE";
  }
  std::abort();
}

SpectrumClass classify(const SpectrumSpec& spec) {
  std::size_t infinite = 0;
  for (const auto& [value, count] : spec.pairs()) {
    (void)value;
    if (count.is_infinite()) ++infinite;
  }
  switch (infinite) {
    case 0: return SpectrumClass::all_finite;
    case 1: return SpectrumClass::one_infinite;
    case 2: return SpectrumClass::two_infinite;
    default: return SpectrumClass::many_infinite;
  }
}

const Scalar& NormalizedSpec::A(std::ptrdiff_t j) const {
  std::ptrdiff_t pos = j + static_cast<std::ptrdiff_t>(m_);
  if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(entries_.size())) {
    fail(errc::out_of_range, "spectrum index out of frame");
  }
  return entries_[static_cast<std::size_t>(pos)].first;
}

const ExtendedCount& NormalizedSpec::N(std::ptrdiff_t j) const {
  std::ptrdiff_t pos = j + static_cast<std::ptrdiff_t>(m_);
  if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(entries_.size())) {
    fail(errc::out_of_range, "spectrum index out of frame");
  }
  return entries_[static_cast<std::size_t>(pos)].second;
}

NormalizedSpec normalize(const SpectrumSpec& spec) {
  const auto& pairs = spec.pairs();
  std::size_t first_inf = pairs.size(), last_inf = pairs.size();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].second.is_infinite()) {
      if (first_inf == pairs.size()) first_inf = i;
      last_inf = i;
    }
  }
  if (first_inf == last_inf || first_inf == pairs.size()) {
    fail(errc::not_enough_infinite, "frame needs two infinite multiplicities");
  }

  std::size_t m = first_inf;
  std::size_t n = last_inf - first_inf - 1;
  std::size_t p = pairs.size() - 1 - last_inf;
  Scalar translation = pairs[first_inf].first;

  std::vector<std::pair<Scalar, ExtendedCount>> entries;
  entries.reserve(pairs.size());
  for (const auto& [value, count] : pairs) entries.emplace_back(value - translation, count);
  return NormalizedSpec(m, n, p, translation, std::move(entries));
}

}  // namespace spectradiag
