#include "spectradiag/feasibility.hpp"

#include <algorithm>
#include <cstdlib>

#include "spectradiag/errors.hpp"
#include "spectradiag/majorization.hpp"

namespace spectradiag {

namespace {

Scalar count_scalar(const ExtendedCount& c) {
  return Scalar(static_cast<std::int64_t>(c.finite_value()));
}

// Entries outside [lo, hi] in original coordinates.
bool leaves_hull(const DiagonalSequence& seq, const Scalar& lo, const Scalar& hi) {
  if (count_in_interval(seq, seq.lo(), true, lo, false) != ExtendedCount(0)) return true;
  return count_in_interval(seq, hi, false, seq.hi(), true) != ExtendedCount(0);
}

ExactSum subtract_from(const Scalar& lhs, const ExactSum& amount) {
  if (amount.is_divergent()) return ExactSum::divergent();
  return ExactSum(lhs - amount.value());
}

bool slack_ok(const ExactSum& s) { return !s.is_divergent() && s.value() >= Scalar(0); }

// sum over j in [first, last] minus exclusions of N_j * (f applied to A_j).
template <typename F>
Scalar frame_sum(const NormalizedSpec& nspec, std::ptrdiff_t first, std::ptrdiff_t last,
                 std::initializer_list<std::ptrdiff_t> skip, F&& f) {
  Scalar acc(0);
  for (std::ptrdiff_t j = first; j <= last; ++j) {
    if (std::find(skip.begin(), skip.end(), j) != skip.end()) continue;
    acc += count_scalar(nspec.N(j)) * f(nspec.A(j));
  }
  return acc;
}

}  // namespace

const char* branch_name(Branch b) noexcept {
  switch (b) {
    case Branch::classical: return "CLASSICAL";
    case Branch::one_infinite: return "ONE_INFINITE";
    case Branch::two_infinite_summable: return "TWO_INFINITE_SUMMABLE";
    case Branch::non_summable: return "NON_SUMMABLE";
    case Branch::many_infinite: return "MANY_INFINITE";
  }
  std::abort();
}

std::vector<std::pair<int, ExactSum>> lower_exterior_check(const DiagonalSequence& seq,
                                                           const NormalizedSpec& nspec) {
  Scalar lo = nspec.A(nspec.lowest_index()) + nspec.translation();
  Scalar hi = nspec.A(nspec.highest_index()) + nspec.translation();
  if (leaves_hull(seq, lo, hi)) {
    fail(errc::hypothesis_violated, "sequence leaves the eigenvalue hull");
  }
  DiagonalSequence t = seq.affine_image(Scalar(1), -nspec.translation());
  std::vector<std::pair<int, ExactSum>> out;
  for (std::ptrdiff_t r = nspec.lowest_index(); r <= 0; ++r) {
    Scalar budget = frame_sum(nspec, nspec.lowest_index(), r - 1, {},
                              [&](const Scalar& a) { return nspec.A(r) - a; });
    out.emplace_back(static_cast<int>(r), subtract_from(budget, lower_defect_sum(t, nspec.A(r))));
  }
  return out;
}

std::vector<std::pair<int, ExactSum>> upper_exterior_check(const DiagonalSequence& seq,
                                                           const NormalizedSpec& nspec) {
  Scalar lo = nspec.A(nspec.lowest_index()) + nspec.translation();
  Scalar hi = nspec.A(nspec.highest_index()) + nspec.translation();
  if (leaves_hull(seq, lo, hi)) {
    fail(errc::hypothesis_violated, "sequence leaves the eigenvalue hull");
  }
  DiagonalSequence t = seq.affine_image(Scalar(1), -nspec.translation());
  std::ptrdiff_t n1 = static_cast<std::ptrdiff_t>(nspec.n()) + 1;
  std::vector<std::pair<int, ExactSum>> out;
  for (std::ptrdiff_t r = n1; r <= nspec.highest_index(); ++r) {
    Scalar budget = frame_sum(nspec, r + 1, nspec.highest_index(), {},
                              [&](const Scalar& a) { return a - nspec.A(r); });
    out.emplace_back(static_cast<int>(r), subtract_from(budget, upper_excess_sum(t, nspec.A(r))));
  }
  return out;
}

bool infinite_tail_exterior_check(const std::vector<Scalar>& d_values,
                                  const std::vector<std::pair<Scalar, std::uint64_t>>& lambdas,
                                  const Scalar& lambda_inf) {
  Scalar excess(0);
  for (const Scalar& d : d_values) {
    if (d >= lambda_inf) excess += d - lambda_inf;
  }
  Scalar budget(0);
  for (const auto& [value, count] : lambdas) {
    budget += Scalar(static_cast<std::int64_t>(count)) * (value - lambda_inf);
  }
  return excess <= budget;
}

FeasibilityVerdict kadison_check(const DiagonalSequence& seq) {
  if (leaves_hull(seq, Scalar(0), Scalar(1))) {
    fail(errc::bounds_violated, "projection diagonals live in [0, 1]");
  }
  auto cut = cut_stats(seq, Scalar(1, 2), Scalar(1));
  FeasibilityVerdict v;
  if (cut.C.is_divergent() || cut.D.is_divergent()) {
    v.feasible = true;
    v.branch = Branch::non_summable;
    return v;
  }
  v.branch = Branch::two_infinite_summable;
  Scalar diff = cut.C.value() - cut.D.value();
  Scalar residue = frac_mod_one(diff);
  v.slacks.emplace_back("kadcond", ExactSum(residue));
  if (residue.is_zero()) {
    v.feasible = true;
    v.k0 = diff;
  } else {
    v.failed_condition = "kadcond";
  }
  return v;
}

bool kadison_partition_check(const DiagonalSequence& seq, const Scalar& mass0,
                             const Scalar& deficiency1) {
  if (leaves_hull(seq, Scalar(0), Scalar(1))) {
    fail(errc::bounds_violated, "projection diagonals live in [0, 1]");
  }
  return frac_mod_one(mass0 - deficiency1).is_zero();
}

FeasibilityVerdict interior_majorization_check(const DiagonalSequence& seq,
                                               const NormalizedSpec& nspec) {
  std::ptrdiff_t n = static_cast<std::ptrdiff_t>(nspec.n());
  if (n < 1) fail(errc::precondition_violated, "no interior eigenvalues");
  for (std::ptrdiff_t j = 1; j <= n; ++j) {
    if (nspec.N(j).is_infinite()) fail(errc::interior_infinite, "interior multiplicity infinite");
  }

  DiagonalSequence t = seq.affine_image(Scalar(1), -nspec.translation());
  const Scalar& B = nspec.B();
  auto mid = cut_stats(t, B / Scalar(2), B);
  if (mid.C.is_divergent() || mid.D.is_divergent()) {
    fail(errc::not_summable, "cut statistics diverge at B/2");
  }

  FeasibilityVerdict v;
  v.branch = Branch::two_infinite_summable;

  auto at_top = cut_stats(t, nspec.A(n), B);
  Scalar weighted = frame_sum(nspec, nspec.lowest_index(), nspec.highest_index(), {0, n + 1},
                              [](const Scalar& a) { return a; });
  Scalar shift = (at_top.C.value() - at_top.D.value() - weighted) / B;
  Scalar residue = frac_mod_one(shift);
  v.slacks.emplace_back("fulltrace1", ExactSum(residue));
  if (!residue.is_zero()) {
    v.failed_condition = "trace";
    return v;
  }
  v.k0 = shift;

  bool ok = true;
  for (std::ptrdiff_t r = 1; r <= n; ++r) {
    Scalar mass = cut_stats(t, nspec.A(r), B).C.value();
    Scalar head = frame_sum(nspec, nspec.lowest_index(), r, {std::ptrdiff_t{0}},
                            [](const Scalar& a) { return a; });
    Scalar above(0);
    for (std::ptrdiff_t j = r + 1; j <= nspec.highest_index(); ++j) {
      if (j != n + 1) above += count_scalar(nspec.N(j));
    }
    Scalar between = count_scalar(count_in_interval(t, nspec.A(r), true, nspec.A(n), false));
    Scalar slack = mass - head - nspec.A(r) * (*v.k0 - between + above);
    std::string id = "fullmaj1:r=" + std::to_string(r);
    v.slacks.emplace_back(id, ExactSum(slack));
    if (ok && slack < Scalar(0)) {
      ok = false;
      v.failed_condition = id;
    }
  }
  v.feasible = ok;
  return v;
}

namespace {

Scalar tail_remainder(const GeometricTail& tail, std::uint64_t t) {
  return tail.coeff.is_zero() ? Scalar(0) : tail.signed_remainder(t);
}

// sum_{s=1..count} coeff * ratio^s
Scalar partial_deviation(const GeometricTail& tail, std::uint64_t count) {
  if (tail.coeff.is_zero() || count == 0) return Scalar(0);
  return tail.signed_remainder(1) - tail.signed_remainder(count + 1);
}

Scalar z_entry(const ZSequence& z, std::int64_t i) {
  if (i <= 0) {
    std::uint64_t t = static_cast<std::uint64_t>(1 - i);
    return z.lower.coeff.is_zero() ? z.lower.limit : z.lower.term(t);
  }
  std::int64_t mid = static_cast<std::int64_t>(z.middle.size());
  if (i <= mid) return z.middle[static_cast<std::size_t>(i - 1)];
  std::uint64_t t = static_cast<std::uint64_t>(i - mid);
  return z.upper.coeff.is_zero() ? z.upper.limit : z.upper.term(t);
}

// sum_{i <= J} z_i; needs the lower side to vanish at -infinity.
Scalar z_prefix_sum(const ZSequence& z, std::int64_t J) {
  if (J <= 0) {
    return tail_remainder(z.lower, static_cast<std::uint64_t>(1 - J));
  }
  Scalar acc = tail_remainder(z.lower, 1);
  std::int64_t mid = static_cast<std::int64_t>(z.middle.size());
  for (std::int64_t i = 1; i <= std::min(J, mid); ++i) {
    acc += z.middle[static_cast<std::size_t>(i - 1)];
  }
  if (J > mid) {
    std::uint64_t count = static_cast<std::uint64_t>(J - mid);
    acc += Scalar(static_cast<std::int64_t>(count)) * z.upper.limit +
           partial_deviation(z.upper, count);
  }
  return acc;
}

// sum_{i > J} (z_i - B); needs the upper limit to equal B.
Scalar z_upper_gap(const ZSequence& z, std::int64_t J, const Scalar& B) {
  std::int64_t mid = static_cast<std::int64_t>(z.middle.size());
  if (J >= mid) return tail_remainder(z.upper, static_cast<std::uint64_t>(J - mid + 1));
  Scalar acc = tail_remainder(z.upper, 1);
  for (std::int64_t i = std::max<std::int64_t>(J, 0) + 1; i <= mid; ++i) {
    acc += z.middle[static_cast<std::size_t>(i - 1)] - B;
  }
  if (J < 0) {
    std::uint64_t count = static_cast<std::uint64_t>(-J);
    acc += Scalar(static_cast<std::int64_t>(count)) * (z.lower.limit - B) +
           partial_deviation(z.lower, count);
  }
  return acc;
}

struct Staircase {
  std::vector<std::pair<Scalar, std::uint64_t>> blocks;  // (A_r, N_r), r = 1..n
  std::int64_t length = 0;                               // sigma_n
  Scalar total = Scalar(0);                              // sum of all interior lambda_i
};

Staircase interior_staircase(const NormalizedSpec& nspec) {
  Staircase s;
  for (std::ptrdiff_t j = 1; j <= static_cast<std::ptrdiff_t>(nspec.n()); ++j) {
    if (nspec.N(j).is_infinite()) fail(errc::interior_infinite, "interior multiplicity infinite");
    std::uint64_t count = nspec.N(j).finite_value();
    s.blocks.emplace_back(nspec.A(j), count);
    s.length += static_cast<std::int64_t>(count);
    s.total += count_scalar(nspec.N(j)) * nspec.A(j);
  }
  return s;
}

void require_interior_frame(const NormalizedSpec& nspec) {
  if (nspec.m() != 0 || nspec.p() != 0) {
    fail(errc::precondition_violated, "frame must not have exterior eigenvalues");
  }
}

}  // namespace

void validate_z_sequence(const ZSequence& z, const Scalar& B) {
  if (z.lower.coeff < Scalar(0) || z.upper.coeff > Scalar(0)) {
    fail(errc::not_nondecreasing, "tail orientations must point toward the limits");
  }
  for (const GeometricTail* tail : {&z.lower, &z.upper}) {
    if (!tail->coeff.is_zero() && !(tail->ratio > Scalar(0) && tail->ratio < Scalar(1))) {
      fail(errc::out_of_range, "tail ratio must lie in (0, 1)");
    }
  }
  Scalar low_top = z.lower.coeff.is_zero() ? z.lower.limit : z.lower.first_term();
  Scalar high_bottom = z.upper.coeff.is_zero() ? z.upper.limit : z.upper.first_term();
  Scalar prev = low_top;
  for (const Scalar& x : z.middle) {
    if (x < prev) fail(errc::not_nondecreasing, "middle entries out of order");
    prev = x;
  }
  if (high_bottom < prev) fail(errc::not_nondecreasing, "upper tail starts below the middle");
  if (z.lower.limit < Scalar(0) || z.upper.limit > B || low_top > B || high_bottom < Scalar(0)) {
    fail(errc::bounds_violated, "entries must lie in [0, B]");
  }
}

bool riemann_interior_check(const ZSequence& z, const NormalizedSpec& nspec, std::int64_t k) {
  require_interior_frame(nspec);
  const Scalar& B = nspec.B();
  Staircase stairs = interior_staircase(nspec);
  validate_z_sequence(z, B);
  if (!z.lower.limit.is_zero()) {
    fail(errc::not_summable, "lower tail must be summable toward 0");
  }

  // Above sigma_n the staircase is constant B and the increments
  // d_{i-k} - B are nonpositive, so delta decreases toward its limit; the
  // limit must be exactly 0 and then delta >= 0 is automatic there. Below
  // index 1 the increments are d_{i-k} >= 0, so only delta_1..delta_{sigma_n}
  // need explicit checks.
  if (z.upper.limit != B) return false;
  Scalar limit = z_prefix_sum(z, stairs.length - k) - stairs.total +
                 z_upper_gap(z, stairs.length - k, B);
  if (!limit.is_zero()) return false;

  Scalar delta = z_prefix_sum(z, -k);
  std::int64_t i = 0;
  for (const auto& [value, count] : stairs.blocks) {
    for (std::uint64_t c = 0; c < count; ++c) {
      ++i;
      delta += z_entry(z, i - k) - value;
      if (delta < Scalar(0)) return false;
    }
  }
  return true;
}

std::optional<std::int64_t> riemann_interior_search(const ZSequence& z,
                                                    const NormalizedSpec& nspec) {
  require_interior_frame(nspec);
  const Scalar& B = nspec.B();
  Staircase stairs = interior_staircase(nspec);
  validate_z_sequence(z, B);
  if (!z.lower.limit.is_zero()) {
    fail(errc::not_summable, "lower tail must be summable toward 0");
  }
  if (z.upper.limit != B) return std::nullopt;

  // The limit of delta is linear in the shift with slope -B, so solving for
  // zero at shift 0 forces the only candidate.
  Scalar at_zero = z_prefix_sum(z, stairs.length) - stairs.total +
                   z_upper_gap(z, stairs.length, B);
  Scalar candidate = at_zero / B;
  if (!candidate.is_integer()) return std::nullopt;
  BigInt numer = candidate.numerator();
  if (numer < std::numeric_limits<std::int64_t>::min() ||
      numer > std::numeric_limits<std::int64_t>::max()) {
    return std::nullopt;
  }
  std::int64_t k = numer.convert_to<std::int64_t>();
  if (riemann_interior_check(z, nspec, k)) return k;
  return std::nullopt;
}

DiagonalSequence to_diagonal_sequence(const ZSequence& z, const Scalar& B) {
  validate_z_sequence(z, B);
  std::vector<DiagonalSequence::Atom> atoms;
  for (const Scalar& x : z.middle) atoms.emplace_back(x, 1);
  std::vector<Scalar> infinite_atoms;
  std::vector<GeometricTail> tails;
  for (const GeometricTail* tail : {&z.lower, &z.upper}) {
    if (tail->coeff.is_zero()) {
      infinite_atoms.push_back(tail->limit);
    } else {
      tails.push_back(*tail);
    }
  }
  return DiagonalSequence::create(Scalar(0), B, std::move(atoms), std::move(infinite_atoms),
                                  std::move(tails));
}

bool equivalence_audit(const ZSequence& z, const NormalizedSpec& nspec) {
  bool ordered = riemann_interior_search(z, nspec).has_value();
  DiagonalSequence seq = to_diagonal_sequence(z, nspec.B());
  bool unordered;
  if (nspec.n() >= 1) {
    unordered = interior_majorization_check(seq, nspec).feasible;
  } else {
    const Scalar& B = nspec.B();
    auto cut = cut_stats(seq, B / Scalar(2), B);
    unordered = frac_mod_one((cut.C.value() - cut.D.value()) / B).is_zero();
  }
  return ordered == unordered;
}

namespace {

FeasibilityVerdict decide_all_finite(const DiagonalSequence& seq, const SpectrumSpec& spec) {
  FeasibilityVerdict v;
  v.branch = Branch::classical;
  ExtendedCount dim(0);
  for (const auto& [value, count] : spec.pairs()) {
    (void)value;
    dim += count;
  }
  if (!seq.is_finite() || seq.entry_count() != dim) {
    v.failed_condition = "dimension";
    return v;
  }
  std::vector<Scalar> lambda;
  for (const auto& [value, count] : spec.pairs()) {
    for (std::uint64_t c = 0; c < count.finite_value(); ++c) lambda.push_back(value);
  }
  std::sort(lambda.begin(), lambda.end(), [](const Scalar& a, const Scalar& b) { return b < a; });
  std::vector<Scalar> d = seq.materialize_nonincreasing();

  bool ok = true;
  Scalar lam_acc(0), d_acc(0);
  for (std::size_t i = 0; i + 1 < d.size(); ++i) {
    lam_acc += lambda[i];
    d_acc += d[i];
    Scalar slack = lam_acc - d_acc;
    std::string id = "horn1:n=" + std::to_string(i + 1);
    v.slacks.emplace_back(id, ExactSum(slack));
    if (ok && slack < Scalar(0)) {
      ok = false;
      v.failed_condition = id;
    }
  }
  lam_acc += lambda.back();
  d_acc += d.back();
  Scalar residue = lam_acc - d_acc;
  v.slacks.emplace_back("horn1:trace", ExactSum(residue));
  if (ok && !residue.is_zero()) {
    ok = false;
    v.failed_condition = "horn1:trace";
  }
  v.feasible = ok;
  return v;
}

FeasibilityVerdict decide_one_infinite(const DiagonalSequence& seq, const SpectrumSpec& spec) {
  FeasibilityVerdict v;
  v.branch = Branch::one_infinite;
  if (!seq.entry_count().is_infinite()) {
    v.failed_condition = "dimension";
    return v;
  }

  const auto& pairs = spec.pairs();
  std::size_t pivot = 0;
  while (!pairs[pivot].second.is_infinite()) ++pivot;
  const Scalar& a0 = pairs[pivot].first;

  bool ok = true;
  auto note = [&](const std::string& id, const ExactSum& slack) {
    v.slacks.emplace_back(id, slack);
    if (ok && !slack_ok(slack)) {
      ok = false;
      v.failed_condition = id;
    }
  };

  for (std::size_t r = 0; r <= pivot; ++r) {
    Scalar budget(0);
    for (std::size_t j = 0; j < r; ++j) {
      budget += count_scalar(pairs[j].second) * (pairs[r].first - pairs[j].first);
    }
    int index = static_cast<int>(r) - static_cast<int>(pivot);
    note("llmaj1:r=" + std::to_string(index),
         subtract_from(budget, lower_defect_sum(seq, pairs[r].first)));
  }
  for (std::size_t r = pivot; r < pairs.size(); ++r) {
    Scalar budget(0);
    for (std::size_t j = r + 1; j < pairs.size(); ++j) {
      budget += count_scalar(pairs[j].second) * (pairs[j].first - pairs[r].first);
    }
    int index = static_cast<int>(r) - static_cast<int>(pivot);
    note("ulmaj1:r=" + std::to_string(index),
         subtract_from(budget, upper_excess_sum(seq, pairs[r].first)));
  }

  Scalar target(0);
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    if (j == pivot) continue;
    target += count_scalar(pairs[j].second) * (pairs[j].first - a0);
  }
  ExactSum trace = total_sum(seq.affine_image(Scalar(1), -a0));
  if (trace.is_divergent()) {
    v.slacks.emplace_back("frhorn1", ExactSum::divergent());
    if (ok) {
      ok = false;
      v.failed_condition = "frhorn1";
    }
  } else {
    Scalar residue = trace.value() - target;
    v.slacks.emplace_back("frhorn1", ExactSum(residue));
    if (ok && !residue.is_zero()) {
      ok = false;
      v.failed_condition = "frhorn1";
    }
  }
  v.feasible = ok;
  return v;
}

FeasibilityVerdict decide_with_frame(const DiagonalSequence& seq, const SpectrumSpec& spec,
                                     bool many_infinite) {
  NormalizedSpec nspec = normalize(spec);
  FeasibilityVerdict v;
  v.branch = many_infinite ? Branch::many_infinite : Branch::two_infinite_summable;
  if (!seq.entry_count().is_infinite()) {
    v.failed_condition = "dimension";
    return v;
  }

  bool ok = true;
  for (const auto& [r, slack] : lower_exterior_check(seq, nspec)) {
    std::string id = "fulllow:r=" + std::to_string(r);
    v.slacks.emplace_back(id, slack);
    if (ok && !slack_ok(slack)) {
      ok = false;
      v.failed_condition = id;
    }
  }
  for (const auto& [r, slack] : upper_exterior_check(seq, nspec)) {
    std::string id = "fullup:r=" + std::to_string(r);
    v.slacks.emplace_back(id, slack);
    if (ok && !slack_ok(slack)) {
      ok = false;
      v.failed_condition = id;
    }
  }
  if (!ok) {
    v.feasible = false;
    return v;
  }

  DiagonalSequence t = seq.affine_image(Scalar(1), -nspec.translation());
  const Scalar& B = nspec.B();
  auto mid = cut_stats(t, B / Scalar(2), B);
  bool summable = !mid.C.is_divergent() && !mid.D.is_divergent();

  if (!summable) {
    v.feasible = true;
    v.branch = Branch::non_summable;
    return v;
  }
  if (many_infinite) {
    v.failed_condition = "3intsuff1";
    v.feasible = false;
    return v;
  }

  v.branch = Branch::two_infinite_summable;
  if (!mid.count_below.is_infinite() || !mid.count_at_least.is_infinite()) {
    v.failed_condition = "fullinf";
    v.feasible = false;
    return v;
  }

  if (nspec.n() == 0) {
    Scalar weighted = frame_sum(nspec, nspec.lowest_index(), nspec.highest_index(), {0, 1},
                                [](const Scalar& a) { return a; });
    Scalar shift = (mid.C.value() - mid.D.value() - weighted) / B;
    Scalar residue = frac_mod_one(shift);
    v.slacks.emplace_back("fulltrace1", ExactSum(residue));
    if (residue.is_zero()) {
      v.feasible = true;
      v.k0 = shift;
    } else {
      v.failed_condition = "trace";
    }
    return v;
  }

  FeasibilityVerdict interior = interior_majorization_check(seq, nspec);
  v.feasible = interior.feasible;
  v.k0 = interior.k0;
  v.failed_condition = interior.failed_condition;
  for (auto& entry : interior.slacks) v.slacks.push_back(std::move(entry));
  return v;
}

}  // namespace

FeasibilityVerdict decide_diagonal(const DiagonalSequence& seq, const SpectrumSpec& spec) {
  const Scalar& lo = spec.pairs().front().first;
  const Scalar& hi = spec.pairs().back().first;
  if (leaves_hull(seq, lo, hi)) {
    fail(errc::bounds_violated, "diagonal entries must lie in the eigenvalue hull");
  }
  switch (classify(spec)) {
    case SpectrumClass::all_finite: return decide_all_finite(seq, spec);
    case SpectrumClass::one_infinite: return decide_one_infinite(seq, spec);
    case SpectrumClass::two_infinite: return decide_with_frame(seq, spec, false);
    case SpectrumClass::many_infinite: return decide_with_frame(seq, spec, true);
  }
  std::abort();
}

}  // namespace spectradiag
