#include "spectradiag/sequences.hpp"

#include <algorithm>
#include <map>

namespace spectradiag {

namespace {

Scalar pow_u(const Scalar& base, std::uint64_t e) {
  Scalar result(1);
  Scalar b = base;
  while (e > 0) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

Scalar abs_scalar(const Scalar& x) { return x.sign() < 0 ? -x : x; }

bool in_interval(const Scalar& v, const Scalar& lo, bool lo_closed, const Scalar& hi,
                 bool hi_closed) {
  if (v < lo || (v == lo && !lo_closed)) return false;
  if (v > hi || (v == hi && !hi_closed)) return false;
  return true;
}

}  // namespace

const Scalar& ExactSum::value() const {
  if (divergent_) fail(errc::out_of_range, "sum is divergent");
  return value_;
}

Scalar GeometricTail::term(std::uint64_t t) const { return limit + coeff * pow_u(ratio, t); }

Scalar GeometricTail::deviation_mass() const {
  return abs_scalar(coeff) * ratio / (Scalar(1) - ratio);
}

Scalar GeometricTail::signed_remainder(std::uint64_t t) const {
  return coeff * pow_u(ratio, t) / (Scalar(1) - ratio);
}

ExactSum TailSideView::affine_sum(const Scalar& a, const Scalar& b) const {
  Scalar at_limit = a * limit + b;
  if (count.is_infinite()) {
    if (!at_limit.is_zero()) return ExactSum::divergent();
    return ExactSum(a * dev_sum);
  }
  return ExactSum(a * dev_sum + Scalar(BigInt(count.finite_value()), BigInt(1)) * at_limit);
}

TailSplit tail_split(const GeometricTail& tail, const Scalar& alpha, bool low_closed) {
  TailSplit split;
  split.low.limit = tail.limit;
  split.high.limit = tail.limit;
  Scalar total_dev = tail.signed_remainder(1);

  bool descending = tail.coeff.sign() > 0;
  if (descending ? alpha <= tail.limit : alpha >= tail.limit) {
    // Every term sits strictly on the limit's side of the cut.
    TailSideView whole{ExtendedCount::infinite(), total_dev, tail.limit};
    TailSideView empty{ExtendedCount(0), Scalar(0), tail.limit};
    if (descending) {
      split.low = empty;
      split.high = whole;
    } else {
      split.low = whole;
      split.high = empty;
    }
    return split;
  }

  // The cut lies strictly between the limit and (possibly) the first term, so
  // the terms on the far side of the limit form a finite prefix.
  std::uint64_t prefix = 0;
  Scalar prefix_dev(0);
  Scalar power = tail.ratio;
  for (;;) {
    Scalar x = tail.limit + tail.coeff * power;
    bool far_side = descending ? (x > alpha || (!low_closed && x == alpha))
                               : (x < alpha || (low_closed && x == alpha));
    if (!far_side) break;
    ++prefix;
    prefix_dev += tail.coeff * power;
    power *= tail.ratio;
  }

  TailSideView prefix_side{ExtendedCount(prefix), prefix_dev, tail.limit};
  TailSideView rest{ExtendedCount::infinite(), total_dev - prefix_dev, tail.limit};
  if (descending) {
    split.high = prefix_side;
    split.low = rest;
  } else {
    split.low = prefix_side;
    split.high = rest;
  }
  return split;
}

ExtendedCount tail_count_in_interval(const GeometricTail& tail, const Scalar& lo, bool lo_closed,
                                     const Scalar& hi, bool hi_closed) {
  if (lo > hi) return 0;
  if (lo == hi && !(lo_closed && hi_closed)) return 0;
  bool descending = tail.coeff.sign() > 0;
  const Scalar& L = tail.limit;
  if (descending) {
    if (L >= hi) return 0;  // terms stay strictly above hi
    if (L > lo || (L == lo && lo < hi)) return ExtendedCount::infinite();
  } else {
    if (L <= lo) return 0;  // terms stay strictly below lo
    if (L < hi || (L == hi && lo < hi)) return ExtendedCount::infinite();
  }
  // Terms march monotonically toward a limit strictly outside the interval,
  // so only a finite prefix can intersect it.
  std::uint64_t count = 0;
  Scalar power = tail.ratio;
  for (;;) {
    Scalar x = tail.limit + tail.coeff * power;
    bool passed = descending ? (x < lo || (x == lo && !lo_closed))
                             : (x > hi || (x == hi && !hi_closed));
    if (passed) break;
    if (in_interval(x, lo, lo_closed, hi, hi_closed)) ++count;
    power *= tail.ratio;
  }
  return count;
}

DiagonalSequence DiagonalSequence::create(Scalar lo, Scalar hi, std::vector<Atom> atoms,
                                          std::vector<Scalar> infinite_atoms,
                                          std::vector<GeometricTail> tails) {
  if (lo > hi) fail(errc::bounds_violated, "lo exceeds hi");
  DiagonalSequence seq;
  seq.lo_ = std::move(lo);
  seq.hi_ = std::move(hi);

  std::map<Scalar, std::uint64_t> merged;
  for (auto& [value, count] : atoms) {
    if (count == 0) fail(errc::out_of_range, "atom count must be positive");
    if (value < seq.lo_ || value > seq.hi_)
      fail(errc::bounds_violated, "atom " + value.str() + " outside bounds");
    merged[value] += count;
  }
  seq.atoms_.assign(merged.begin(), merged.end());

  std::sort(infinite_atoms.begin(), infinite_atoms.end());
  infinite_atoms.erase(std::unique(infinite_atoms.begin(), infinite_atoms.end()),
                       infinite_atoms.end());
  for (const Scalar& v : infinite_atoms) {
    if (v < seq.lo_ || v > seq.hi_)
      fail(errc::bounds_violated, "infinite atom " + v.str() + " outside bounds");
  }
  seq.infinite_atoms_ = std::move(infinite_atoms);

  for (const GeometricTail& tail : tails) {
    if (tail.ratio <= Scalar(0) || tail.ratio >= Scalar(1))
      fail(errc::out_of_range, "tail ratio must lie in (0,1)");
    if (tail.coeff.is_zero()) fail(errc::out_of_range, "tail coefficient must be nonzero");
    if (tail.limit < seq.lo_ || tail.limit > seq.hi_)
      fail(errc::bounds_violated, "tail limit " + tail.limit.str() + " outside bounds");
    Scalar first = tail.first_term();
    if (first < seq.lo_ || first > seq.hi_)
      fail(errc::bounds_violated, "tail first term " + first.str() + " outside bounds");
  }
  seq.tails_ = std::move(tails);
  return seq;
}

DiagonalSequence DiagonalSequence::finite(Scalar lo, Scalar hi,
                                          const std::vector<Scalar>& values) {
  std::vector<Atom> atoms;
  atoms.reserve(values.size());
  for (const Scalar& v : values) atoms.emplace_back(v, 1);
  return create(std::move(lo), std::move(hi), std::move(atoms), {}, {});
}

ExtendedCount DiagonalSequence::entry_count() const {
  if (!infinite_atoms_.empty() || !tails_.empty()) return ExtendedCount::infinite();
  std::uint64_t n = 0;
  for (const auto& [value, count] : atoms_) n += count;
  return n;
}

std::vector<Scalar> DiagonalSequence::materialize_nonincreasing() const {
  if (!is_finite()) fail(errc::precondition_violated, "sequence is not finite");
  constexpr std::uint64_t kMaterializeCap = 1u << 20;
  std::vector<Scalar> out;
  std::uint64_t total = 0;
  for (const auto& [value, count] : atoms_) {
    total += count;
    if (total > kMaterializeCap) fail(errc::out_of_range, "sequence too large to materialize");
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(value);
  }
  std::sort(out.begin(), out.end(), [](const Scalar& a, const Scalar& b) { return b < a; });
  return out;
}

DiagonalSequence DiagonalSequence::affine_image(const Scalar& a, const Scalar& b) const {
  if (a.is_zero()) fail(errc::out_of_range, "affine map must be invertible");
  std::vector<Atom> atoms;
  atoms.reserve(atoms_.size());
  for (const auto& [value, count] : atoms_) atoms.emplace_back(a * value + b, count);
  std::vector<Scalar> inf_atoms;
  inf_atoms.reserve(infinite_atoms_.size());
  for (const Scalar& v : infinite_atoms_) inf_atoms.push_back(a * v + b);
  std::vector<GeometricTail> tails;
  tails.reserve(tails_.size());
  for (const GeometricTail& t : tails_)
    tails.push_back(GeometricTail{a * t.limit + b, a * t.coeff, t.ratio});
  Scalar new_lo = a * lo_ + b;
  Scalar new_hi = a * hi_ + b;
  if (a.sign() < 0) std::swap(new_lo, new_hi);
  return create(std::move(new_lo), std::move(new_hi), std::move(atoms), std::move(inf_atoms),
                std::move(tails));
}

DiagonalSequence DiagonalSequence::with_bounds(Scalar lo, Scalar hi) const {
  return create(std::move(lo), std::move(hi), atoms_, infinite_atoms_, tails_);
}

DiagonalSequence concat(const DiagonalSequence& a, const DiagonalSequence& b) {
  std::vector<DiagonalSequence::Atom> atoms = a.atoms_;
  atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
  std::vector<Scalar> inf_atoms = a.infinite_atoms_;
  inf_atoms.insert(inf_atoms.end(), b.infinite_atoms_.begin(), b.infinite_atoms_.end());
  std::vector<GeometricTail> tails = a.tails_;
  tails.insert(tails.end(), b.tails_.begin(), b.tails_.end());
  return DiagonalSequence::create(std::min(a.lo_, b.lo_), std::max(a.hi_, b.hi_),
                                  std::move(atoms), std::move(inf_atoms), std::move(tails));
}

void DiagonalSequence::remove_one(const Scalar& value) {
  for (auto it = atoms_.begin(); it != atoms_.end(); ++it) {
    if (it->first == value) {
      if (--it->second == 0) atoms_.erase(it);
      return;
    }
  }
  for (const Scalar& v : infinite_atoms_) {
    if (v == value) return;  // one copy fewer of infinitely many is a no-op
  }
  for (GeometricTail& tail : tails_) {
    Scalar q = (value - tail.limit) / tail.coeff;
    if (q.sign() <= 0 || q > tail.ratio) continue;
    Scalar power = tail.ratio;
    std::uint64_t t = 1;
    while (power > q) {
      power *= tail.ratio;
      ++t;
    }
    if (power != q) continue;  // value is not a generated term of this tail
    Scalar p = tail.ratio;
    for (std::uint64_t s = 1; s < t; ++s) {
      add_atom(tail.limit + tail.coeff * p);
      p *= tail.ratio;
    }
    tail.coeff = tail.coeff * power;  // advance the tail past the removed term
    return;
  }
  fail(errc::precondition_violated, "no entry equals " + value.str());
}

void DiagonalSequence::add_atom(const Scalar& value, std::uint64_t count) {
  if (count == 0) fail(errc::out_of_range, "atom count must be positive");
  if (value < lo_ || value > hi_)
    fail(errc::bounds_violated, "atom " + value.str() + " outside bounds");
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), value,
                             [](const Atom& a, const Scalar& v) { return a.first < v; });
  if (it != atoms_.end() && it->first == value) {
    it->second += count;
  } else {
    atoms_.insert(it, Atom{value, count});
  }
}

void DiagonalSequence::add_infinite_atom(const Scalar& value) {
  if (value < lo_ || value > hi_)
    fail(errc::bounds_violated, "infinite atom " + value.str() + " outside bounds");
  auto it = std::lower_bound(infinite_atoms_.begin(), infinite_atoms_.end(), value);
  if (it == infinite_atoms_.end() || *it != value) infinite_atoms_.insert(it, value);
}

namespace {

// Accumulates the two affine functionals over the low/high sides of the cut.
struct SplitAccumulator {
  Scalar a_low, b_low, a_high, b_high;
  ExactSum low, high;
  ExtendedCount n_low, n_high;

  void add_point(const Scalar& v, std::uint64_t count, bool low_side) {
    Scalar n(BigInt(count), BigInt(1));
    if (low_side) {
      low += ExactSum(n * (a_low * v + b_low));
      n_low += count;
    } else {
      high += ExactSum(n * (a_high * v + b_high));
      n_high += count;
    }
  }

  void add_infinite_point(const Scalar& v, bool low_side) {
    if (low_side) {
      Scalar at = a_low * v + b_low;
      low += at.is_zero() ? ExactSum(Scalar(0)) : ExactSum::divergent();
      n_low += ExtendedCount::infinite();
    } else {
      Scalar at = a_high * v + b_high;
      high += at.is_zero() ? ExactSum(Scalar(0)) : ExactSum::divergent();
      n_high += ExtendedCount::infinite();
    }
  }
};

SplitAccumulator split_sums(const DiagonalSequence& seq, const Scalar& alpha, bool low_closed,
                            Scalar a_low, Scalar b_low, Scalar a_high, Scalar b_high) {
  SplitAccumulator acc{std::move(a_low), std::move(b_low), std::move(a_high), std::move(b_high),
                       ExactSum(Scalar(0)), ExactSum(Scalar(0)), 0, 0};
  auto is_low = [&](const Scalar& v) { return v < alpha || (low_closed && v == alpha); };
  for (const auto& [value, count] : seq.atoms()) acc.add_point(value, count, is_low(value));
  for (const Scalar& v : seq.infinite_atoms()) acc.add_infinite_point(v, is_low(v));
  for (const GeometricTail& tail : seq.tails()) {
    TailSplit split = tail_split(tail, alpha, low_closed);
    acc.low += split.low.affine_sum(acc.a_low, acc.b_low);
    acc.high += split.high.affine_sum(acc.a_high, acc.b_high);
    acc.n_low += split.low.count;
    acc.n_high += split.high.count;
  }
  return acc;
}

}  // namespace

CutStatistics cut_stats(const DiagonalSequence& seq, const Scalar& alpha, const Scalar& B) {
  if (alpha <= Scalar(0) || alpha >= B) fail(errc::out_of_range, "cut must lie in (0,B)");
  SplitAccumulator acc =
      split_sums(seq, alpha, /*low_closed=*/false, Scalar(1), Scalar(0), Scalar(-1), B);
  return CutStatistics{alpha, B, acc.low, acc.high, acc.n_low, acc.n_high};
}

ExactSum total_sum(const DiagonalSequence& seq) {
  ExactSum sum{Scalar(0)};
  for (const auto& [value, count] : seq.atoms())
    sum += ExactSum(Scalar(BigInt(count), BigInt(1)) * value);
  for (const Scalar& v : seq.infinite_atoms())
    sum += v.is_zero() ? ExactSum(Scalar(0)) : ExactSum::divergent();
  for (const GeometricTail& tail : seq.tails())
    sum += tail.limit.is_zero() ? ExactSum(tail.signed_remainder(1)) : ExactSum::divergent();
  return sum;
}

ExactSum lower_defect_sum(const DiagonalSequence& seq, const Scalar& alpha) {
  return split_sums(seq, alpha, /*low_closed=*/true, Scalar(-1), alpha, Scalar(0), Scalar(0)).low;
}

ExactSum upper_excess_sum(const DiagonalSequence& seq, const Scalar& alpha) {
  return split_sums(seq, alpha, /*low_closed=*/false, Scalar(0), Scalar(0), Scalar(1), -alpha)
      .high;
}

ExtendedCount count_in_interval(const DiagonalSequence& seq, const Scalar& lo, bool lo_closed,
                                const Scalar& hi, bool hi_closed) {
  ExtendedCount count = 0;
  for (const auto& [value, n] : seq.atoms())
    if (in_interval(value, lo, lo_closed, hi, hi_closed)) count += n;
  for (const Scalar& v : seq.infinite_atoms())
    if (in_interval(v, lo, lo_closed, hi, hi_closed)) count += ExtendedCount::infinite();
  for (const GeometricTail& tail : seq.tails())
    count += tail_count_in_interval(tail, lo, lo_closed, hi, hi_closed);
  return count;
}

bool in_class_F(const DiagonalSequence& seq) {
  if (seq.lo() < Scalar(0) || seq.hi() > Scalar(1))
    fail(errc::precondition_violated, "class test requires bounds inside [0,1]");
  auto endpoint = [](const Scalar& v) { return v.is_zero() || v == Scalar(1); };
  for (const Scalar& v : seq.infinite_atoms())
    if (!endpoint(v)) return false;
  for (const GeometricTail& tail : seq.tails())
    if (!endpoint(tail.limit)) return false;
  return true;
}

Scalar f_value(const DiagonalSequence& seq, const Scalar& alpha) {
  if (!in_class_F(seq)) fail(errc::not_in_class_f, "sequence has interior infinite mass");
  if (alpha <= Scalar(0) || alpha >= Scalar(1))
    fail(errc::out_of_range, "alpha must lie in (0,1)");
  CutStatistics cut = cut_stats(seq, alpha, Scalar(1));
  return (Scalar(1) - alpha) * cut.C.value() + alpha * cut.D.value();
}

}  // namespace spectradiag
