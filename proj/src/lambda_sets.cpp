#include "spectradiag/lambda_sets.hpp"

#include <cstddef>
#include <utility>

#include "spectradiag/transforms.hpp"

namespace spectradiag {

namespace {

Scalar scalar_of(std::uint64_t n) { return Scalar(static_cast<std::int64_t>(n)); }

// sum of (d_i - x) over the slice d[from..) restricted to entries above x.
Scalar upper_gap(const std::vector<Scalar>& d, std::size_t from, const Scalar& x) {
  Scalar s(0);
  for (std::size_t i = from; i < d.size(); ++i) {
    if (d[i] > x) s += d[i] - x;
  }
  return s;
}

// sum of (x - d_i) over the slice d[0..upto) restricted to entries below x.
Scalar lower_gap(const std::vector<Scalar>& d, std::size_t upto, const Scalar& x) {
  Scalar s(0);
  for (std::size_t i = 0; i < upto; ++i) {
    if (d[i] < x) s += x - d[i];
  }
  return s;
}

// Level crossing of the nonincreasing piecewise-linear map
// x -> upper_gap(d, from, x). The slice is nonincreasing, so the knots are
// its distinct values; between two consecutive knots the active entries are
// the ones already walked, giving one exact linear solve per segment. The
// caller guarantees a crossing at or above floor_x.
Scalar solve_upper_gap(const std::vector<Scalar>& d, std::size_t from, const Scalar& rhs,
                       const Scalar& floor_x) {
  Scalar active_sum(0);
  std::int64_t active = 0;
  std::size_t i = from;
  while (i < d.size()) {
    const Scalar v = d[i];
    while (i < d.size() && d[i] == v) {
      active_sum += d[i];
      ++active;
      ++i;
    }
    const Scalar lo = i < d.size() ? d[i] : floor_x;
    const Scalar x = (active_sum - rhs) / Scalar(active);
    if (lo <= x && x <= v) return x;
  }
  fail(errc::precondition_violated, "upper plateau level has no crossing");
}

// Mirror walk for the nondecreasing map x -> lower_gap(d, upto, x), scanning
// the slice from its smallest value upward. Crossing at or below ceil_x.
Scalar solve_lower_gap(const std::vector<Scalar>& d, std::size_t upto, const Scalar& rhs,
                       const Scalar& ceil_x) {
  Scalar active_sum(0);
  std::int64_t active = 0;
  std::size_t i = upto;
  while (i > 0) {
    const Scalar v = d[i - 1];
    while (i > 0 && d[i - 1] == v) {
      active_sum += d[i - 1];
      ++active;
      --i;
    }
    const Scalar hi = i > 0 ? d[i - 1] : ceil_x;
    const Scalar x = (rhs + active_sum) / Scalar(active);
    if (v <= x && x <= hi) return x;
  }
  fail(errc::precondition_violated, "lower plateau level has no crossing");
}

MinimalElementReport minimal_set_impl(const DiagonalSequence& seq, std::uint64_t N,
                                      const Scalar* forced_epsilon) {
  if (N == 0) fail(errc::precondition_violated, "N must be positive");
  if (!in_class_F(seq)) fail(errc::not_in_class_f, "sequence is not summable toward both endpoints");

  const Scalar half(1, 2);
  const Scalar one(1);
  if (!count_in_interval(seq, Scalar(0), false, half, false).is_infinite() ||
      !count_in_interval(seq, half, true, one, false).is_infinite()) {
    fail(errc::hypothesis_violated, "need infinitely many entries in (0, 1/2) and in [1/2, 1)");
  }

  MinimalElementReport report;
  report.eta = eta_of(seq);

  std::vector<std::uint64_t> ks;
  for (std::uint64_t k = report.eta.is_zero() ? 1 : 0; k < N; ++k) ks.push_back(k);
  if (ks.empty()) return report;  // projection diagonal with N = 1: nothing interior sums to 1

  std::vector<Scalar> targets;
  for (std::uint64_t k : ks) targets.push_back((scalar_of(k) + report.eta) / scalar_of(N));

  // The truncation width must leave N entries strictly between it and every
  // target on both sides; those entries survive truncation untouched.
  const ExtendedCount quota(N);
  const auto wide_enough = [&](const Scalar& eps) {
    for (const Scalar& t : targets) {
      if (count_in_interval(seq, eps, false, t, false) < quota) return false;
      if (count_in_interval(seq, t, false, one - eps, false) < quota) return false;
    }
    return true;
  };

  Scalar epsilon;
  if (forced_epsilon != nullptr) {
    epsilon = *forced_epsilon;
    if (epsilon <= Scalar(0) || epsilon > half) {
      fail(errc::out_of_range, "epsilon must lie in (0, 1/2]");
    }
    if (!wide_enough(epsilon)) {
      fail(errc::precondition_violated,
           "epsilon leaves fewer than N entries beside some target");
    }
  } else {
    Scalar gap = targets.front() < one - targets.front() ? targets.front() : one - targets.front();
    for (const Scalar& t : targets) {
      if (t < gap) gap = t;
      if (one - t < gap) gap = one - t;
    }
    epsilon = gap / 2;
    while (!wide_enough(epsilon)) epsilon /= 2;
  }

  const DiagonalSequence flattened = truncate_to_finite(seq, epsilon).sequence;
  const std::vector<Scalar> d =
      split_extremes(flattened, one).interior.materialize_nonincreasing();

  Scalar interior_sum(0);
  for (const Scalar& v : d) interior_sum += v;
  const Scalar whole = interior_sum - report.eta;
  if (!whole.is_integer() || whole.sign() < 0) {
    fail(errc::precondition_violated, "interior mass is inconsistent with the fractional trace");
  }
  const std::uint64_t K = whole.numerator().convert_to<std::uint64_t>();

  for (std::uint64_t k : ks) report.entries.push_back(minimal_element(d, K, report.eta, N, k));
  return report;
}

}  // namespace

const char* minimal_case_name(MinimalCase c) noexcept {
  switch (c) {
    case MinimalCase::case1: return "CASE1";
    case MinimalCase::case2: return "CASE2";
    case MinimalCase::case3: return "CASE3";
  }
  return "CASE1";
}

Scalar eta_of(const DiagonalSequence& seq) {
  if (!in_class_F(seq)) fail(errc::not_in_class_f, "sequence is not summable toward both endpoints");
  const CutStatistics cs = cut_stats(seq, Scalar(1, 2), Scalar(1));
  return frac_mod_one(cs.C.value() - cs.D.value());
}

MinimalElement minimal_element(const std::vector<Scalar>& d, std::uint64_t K, const Scalar& eta,
                               std::uint64_t N, std::uint64_t k) {
  if (N == 0) fail(errc::precondition_violated, "N must be positive");
  if (eta < Scalar(0) || eta >= Scalar(1)) fail(errc::precondition_violated, "eta must lie in [0, 1)");
  Scalar sum(0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < Scalar(0) || d[i] > Scalar(1)) {
      fail(errc::precondition_violated, "entries must lie in [0, 1]");
    }
    if (i > 0 && d[i] > d[i - 1]) fail(errc::precondition_violated, "entries must be nonincreasing");
    sum += d[i];
  }
  if (sum != scalar_of(K) + eta) fail(errc::precondition_violated, "entries must sum to K + eta");
  if (N >= d.size()) fail(errc::precondition_violated, "need N < M");
  if (k > K) fail(errc::precondition_violated, "need k <= K");
  if (k == 0 && eta.is_zero()) fail(errc::precondition_violated, "need k + eta > 0");
  if (K - k > d.size() - N) fail(errc::precondition_violated, "need K - k <= M - N");
  const Scalar target = (scalar_of(k) + eta) / scalar_of(N);
  if (target >= Scalar(1)) {
    fail(errc::precondition_violated, "target (k + eta)/N must lie in (0, 1)");
  }

  // In the padded picture the K - k largest entries rise to 1 and the
  // trailing entries drop to 0; ones_room and tail_mass are the exact
  // budgets those paddings free up for the interior window of width N.
  const std::size_t ones = static_cast<std::size_t>(K - k);
  const std::size_t window_end = ones + static_cast<std::size_t>(N);
  Scalar ones_room(0);
  for (std::size_t i = 0; i < ones; ++i) ones_room += Scalar(1) - d[i];
  Scalar tail_mass(0);
  for (std::size_t i = window_end; i < d.size(); ++i) tail_mass += d[i];

  MinimalElement out;
  out.k = k;
  if (upper_gap(d, ones, target) <= ones_room) {
    out.tag = MinimalCase::case1;
    out.mu.assign(static_cast<std::size_t>(N), target);
    return out;
  }
  if (lower_gap(d, window_end, target) <= tail_mass) {
    out.tag = MinimalCase::case2;
    out.mu.assign(static_cast<std::size_t>(N), target);
    return out;
  }

  out.tag = MinimalCase::case3;
  const Scalar a = solve_upper_gap(d, ones, ones_room, target);
  const Scalar b = solve_lower_gap(d, window_end, tail_mass, target);
  std::uint64_t Na = 0;
  for (std::size_t i = ones; i < d.size(); ++i) {
    if (d[i] > a) ++Na;
  }
  std::uint64_t Nb = 0;
  for (std::size_t i = 0; i < window_end; ++i) {
    if (d[i] < b) ++Nb;
  }
  out.a = a;
  out.b = b;
  out.Na = Na;
  out.Nb = Nb;
  out.mu.reserve(static_cast<std::size_t>(N));
  for (std::uint64_t j = 0; j < N; ++j) {
    if (j < Na) {
      out.mu.push_back(a);
    } else if (j < N - Nb) {
      out.mu.push_back(d[static_cast<std::size_t>(j) + ones]);
    } else {
      out.mu.push_back(b);
    }
  }
  return out;
}

MinimalElementReport minimal_set(const DiagonalSequence& seq, std::uint64_t N) {
  return minimal_set_impl(seq, N, nullptr);
}

MinimalElementReport minimal_set(const DiagonalSequence& seq, std::uint64_t N,
                                 const Scalar& epsilon) {
  return minimal_set_impl(seq, N, &epsilon);
}

bool lambda_membership(const DiagonalSequence& seq, const std::vector<Scalar>& lambda) {
  if (lambda.empty()) fail(errc::precondition_violated, "lambda must be nonempty");
  for (const Scalar& v : lambda) {
    if (v <= Scalar(0) || v >= Scalar(1)) {
      fail(errc::out_of_range, "lambda entries must lie in (0, 1)");
    }
  }
  if (!in_class_F(seq)) fail(errc::not_in_class_f, "sequence is not summable toward both endpoints");

  const CutStatistics cs = cut_stats(seq, Scalar(1, 2), Scalar(1));
  Scalar trace(0);
  for (const Scalar& v : lambda) trace += v;
  if (!frac_mod_one(cs.C.value() - cs.D.value() - trace).is_zero()) return false;

  const DiagonalSequence probe = DiagonalSequence::finite(Scalar(0), Scalar(1), lambda);
  for (const Scalar& v : lambda) {
    if (f_value(seq, v) < f_value(probe, v)) return false;
  }
  return true;
}

DiagonalSequence beta_sequence(const Scalar& beta) {
  if (beta <= Scalar(0) || beta >= Scalar(1)) fail(errc::out_of_range, "beta must lie in (0, 1)");
  return DiagonalSequence::create(Scalar(0), Scalar(1), {}, {},
                                  {GeometricTail{Scalar(0), Scalar(1), beta},
                                   GeometricTail{Scalar(1), Scalar(-1), beta}});
}

}  // namespace spectradiag
