#include "spectradiag/transforms.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <utility>

#include "spectradiag/errors.hpp"

namespace spectradiag {

namespace {

Scalar ceil_ratio(const Scalar& num, const Scalar& den) {
  Scalar q = num / den;
  Scalar f = q.floor();
  return f == q ? f : f + Scalar(1);
}

std::uint64_t small_count(const Scalar& x) {
  if (!x.is_integer() || x.sign() < 0) {
    fail(errc::out_of_range, "expected a nonnegative integer, got " + x.str());
  }
  BigInt numer = x.numerator();
  if (numer > BigInt(1000000)) {
    fail(errc::out_of_range, "selection size " + x.str() + " is unreasonably large");
  }
  return numer.convert_to<std::uint64_t>();
}

bool leaves_hull(const DiagonalSequence& seq, const Scalar& lo, const Scalar& hi) {
  if (count_in_interval(seq, seq.lo(), true, lo, false) != ExtendedCount(0)) return true;
  return count_in_interval(seq, hi, false, seq.hi(), true) != ExtendedCount(0);
}

std::string render_values(const char* name, const std::vector<Scalar>& vals) {
  std::ostringstream os;
  os << name << "[";
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i > 0) os << ",";
    os << vals[i].str();
  }
  os << "]";
  return os.str();
}

// old value -> new value for one rewritten entry
using Move = std::pair<Scalar, Scalar>;

// Lowers values toward floor_value until budget is spent, smallest first.
std::vector<Move> drain_toward(std::vector<Scalar> vals, Scalar budget, const Scalar& floor_value) {
  std::sort(vals.begin(), vals.end());
  std::vector<Move> moves;
  for (const auto& v : vals) {
    if (budget.is_zero()) break;
    const Scalar room = v - floor_value;
    const Scalar take = room < budget ? room : budget;
    if (take.sign() > 0) moves.emplace_back(v, v - take);
    budget = budget - take;
  }
  return moves;
}

// Raises values toward cap until budget is spent, largest first.
std::vector<Move> fill_toward(std::vector<Scalar> vals, Scalar budget, const Scalar& cap) {
  std::sort(vals.begin(), vals.end(), [](const Scalar& a, const Scalar& b) { return b < a; });
  std::vector<Move> moves;
  for (const auto& v : vals) {
    if (budget.is_zero()) break;
    const Scalar room = cap - v;
    const Scalar take = room < budget ? room : budget;
    if (take.sign() > 0) moves.emplace_back(v, v + take);
    budget = budget - take;
  }
  return moves;
}

void apply_moves(DiagonalSequence& seq, const std::vector<Move>& moves) {
  for (const auto& [from, to] : moves) {
    seq.remove_one(from);
    seq.add_atom(to);
  }
}

Scalar sum_above(const std::vector<Scalar>& vals, const Scalar& a) {
  Scalar s = 0;
  for (const auto& v : vals) s = s + (v - a);
  return s;
}

Scalar sum_below(const std::vector<Scalar>& vals, const Scalar& b) {
  Scalar s = 0;
  for (const auto& v : vals) s = s + (b - v);
  return s;
}

void check_selection_range(const std::vector<Scalar>& vals, const Scalar& a, const Scalar& b) {
  for (const auto& v : vals) {
    if (v < a || b < v) {
      fail(errc::out_of_range,
           "selection value " + v.str() + " outside [" + a.str() + ", " + b.str() + "]");
    }
  }
}

// sum over entries d <= 0 of (d + gamma); divergent when an infinite
// component accumulates strictly above -gamma on the nonpositive side.
ExactSum nonpositive_headroom(const DiagonalSequence& seq, const Scalar& gamma) {
  ExactSum total = Scalar(0);
  for (const auto& [v, c] : seq.atoms()) {
    if (v.sign() <= 0) total += Scalar((v + gamma) * Scalar(static_cast<std::int64_t>(c)));
  }
  for (const auto& v : seq.infinite_atoms()) {
    if (v.sign() <= 0) {
      if (v + gamma != Scalar(0)) return ExactSum::divergent();
    }
  }
  for (const auto& t : seq.tails()) {
    total += tail_split(t, Scalar(0), true).low.affine_sum(Scalar(1), gamma);
  }
  return total;
}

// sum over entries d >= 0 of (delta - d), mirror of nonpositive_headroom.
ExactSum nonnegative_headroom(const DiagonalSequence& seq, const Scalar& delta) {
  ExactSum total = Scalar(0);
  for (const auto& [v, c] : seq.atoms()) {
    if (v.sign() >= 0) total += Scalar((delta - v) * Scalar(static_cast<std::int64_t>(c)));
  }
  for (const auto& v : seq.infinite_atoms()) {
    if (v.sign() >= 0) {
      if (v != delta) return ExactSum::divergent();
    }
  }
  for (const auto& t : seq.tails()) {
    total += tail_split(t, Scalar(0), false).high.affine_sum(Scalar(-1), delta);
  }
  return total;
}

// Signed sum over entries on one side of zero (strict), used for decoupling
// receipts. Entries equal to zero contribute nothing to either side.
ExactSum strict_side_sum(const DiagonalSequence& seq, bool negative_side) {
  ExactSum total = Scalar(0);
  for (const auto& [v, c] : seq.atoms()) {
    if ((negative_side && v.sign() < 0) || (!negative_side && v.sign() > 0)) {
      total += Scalar(v * Scalar(static_cast<std::int64_t>(c)));
    }
  }
  for (const auto& v : seq.infinite_atoms()) {
    if ((negative_side && v.sign() < 0) || (!negative_side && v.sign() > 0)) {
      return ExactSum::divergent();
    }
  }
  for (const auto& t : seq.tails()) {
    TailSplit split = tail_split(t, Scalar(0), !negative_side);
    total += negative_side ? split.low.affine_sum(Scalar(1), Scalar(0))
                           : split.high.affine_sum(Scalar(1), Scalar(0));
  }
  return total;
}

// Picks the selections I0 (ceil(eta/gamma) entries, later pushed below zero)
// and I1 (pushed toward delta) from a component of J whose nonnegative side
// carries infinite headroom. Values only; extraction happens via remove_one.
std::pair<std::vector<Scalar>, std::vector<Scalar>> select_upward_witness(
    const DiagonalSequence& J, const Scalar& gamma, const Scalar& delta, const Scalar& eta) {
  const Scalar m_scalar = ceil_ratio(eta, gamma);
  const std::uint64_t m = small_count(m_scalar);

  for (const auto& v : J.infinite_atoms()) {
    if (v.sign() >= 0 && v < delta) {
      std::vector<Scalar> i0(m, v);
      // smallest count with count * (delta - v) > m * v + eta
      const Scalar n_scalar = (m_scalar * v + eta) / (delta - v);
      const std::uint64_t n = small_count(n_scalar.floor()) + 1;
      std::vector<Scalar> i1(n, v);
      return {std::move(i0), std::move(i1)};
    }
  }
  for (const auto& t : J.tails()) {
    if (t.coeff.sign() > 0 && t.limit.sign() >= 0 && t.limit < delta) {
      // terms descend toward the limit; take the first block as I1 until its
      // headroom clears m * (block minimum) + eta, then the next m as I0
      std::vector<Scalar> i1;
      Scalar acc = 0;
      std::uint64_t s = 1;
      for (;; ++s) {
        const Scalar term = t.term(s);
        acc = acc + (delta - term);
        i1.push_back(term);
        if (m_scalar * term + eta < acc) break;
      }
      std::vector<Scalar> i0;
      for (std::uint64_t k = 1; k <= m; ++k) i0.push_back(t.term(s + k));
      return {std::move(i0), std::move(i1)};
    }
    if (t.coeff.sign() < 0 && t.limit.sign() > 0 && t.limit < delta) {
      // terms ascend toward the limit; skip negative leading terms, then m
      // entries for I0 and enough following entries for I1
      std::uint64_t s0 = 1;
      while (t.term(s0).sign() < 0) ++s0;
      std::vector<Scalar> i0;
      for (std::uint64_t k = 0; k < m; ++k) i0.push_back(t.term(s0 + k));
      const Scalar target = m_scalar * t.limit + eta;
      std::vector<Scalar> i1;
      Scalar acc = 0;
      for (std::uint64_t s = s0 + m;; ++s) {
        const Scalar term = t.term(s);
        acc = acc + (delta - term);
        i1.push_back(term);
        if (target < acc) break;
      }
      return {std::move(i0), std::move(i1)};
    }
  }
  fail(errc::hypothesis_violated,
       "no selection component carries infinite headroom toward the upper endpoint");
}

// Rewrites both the host sequence and the selection J by draining I0 to
// -gamma and filling I1 toward delta with budget eta0 = eta + sum(I0).
void decouple_upward(DiagonalSequence& host, DiagonalSequence& selection, const Scalar& gamma,
                     const Scalar& delta, const Scalar& eta) {
  auto [i0, i1] = select_upward_witness(selection, gamma, delta, eta);
  const Scalar eta0 = eta + sum_above(i0, Scalar(0));
  const auto moves0 = drain_toward(i0, eta0, -gamma);
  const auto moves1 = fill_toward(i1, eta0, delta);
  apply_moves(host, moves0);
  apply_moves(host, moves1);
  apply_moves(selection, moves0);
  apply_moves(selection, moves1);
}

}  // namespace

TransformResult move_toward_endpoints(const DiagonalSequence& seq, std::vector<Scalar> i0,
                                      std::vector<Scalar> i1, const Scalar& eta0, const Scalar& A,
                                      const Scalar& B) {
  if (eta0.sign() < 0) fail(errc::precondition_violated, "mass to move must be nonnegative");
  check_selection_range(i0, A, B);
  check_selection_range(i1, A, B);
  if (!i0.empty() && !i1.empty()) {
    const Scalar top0 = *std::max_element(i0.begin(), i0.end());
    const Scalar bot1 = *std::min_element(i1.begin(), i1.end());
    if (bot1 < top0) {
      fail(errc::order_violated,
           "selections overlap: max of the lowered set is " + top0.str() +
               " but the raised set reaches down to " + bot1.str());
    }
  }
  const Scalar cap0 = sum_above(i0, A);
  const Scalar cap1 = sum_below(i1, B);
  if (cap0 < eta0 || cap1 < eta0) {
    fail(errc::budget_exceeded, "eta0 = " + eta0.str() + " exceeds selection headroom min(" +
                                    cap0.str() + ", " + cap1.str() + ")");
  }

  const Scalar new_lo = seq.lo() < A ? seq.lo() : A;
  const Scalar new_hi = B < seq.hi() ? seq.hi() : B;
  DiagonalSequence out = seq.with_bounds(new_lo, new_hi);
  apply_moves(out, drain_toward(i0, eta0, A));
  apply_moves(out, fill_toward(i1, eta0, B));

  TransformReceipt receipt;
  receipt.moved_mass = eta0;
  receipt.touched_indices = render_values("I0", i0) + " " + render_values("I1", i1);
  receipt.changes.push_back(
      {"selection mass above the low endpoint", A, ExactSum(cap0), ExactSum(cap0 - eta0)});
  receipt.changes.push_back(
      {"selection headroom below the high endpoint", B, ExactSum(cap1), ExactSum(cap1 - eta0)});
  return {std::move(out), std::move(receipt)};
}

TransformResult decouple(const DiagonalSequence& seq, const DiagonalSequence& J,
                         const Scalar& gamma, const Scalar& delta, const Scalar& eta) {
  if (gamma.sign() <= 0 || delta.sign() <= 0) {
    fail(errc::out_of_range, "decoupling endpoints require gamma > 0 and delta > 0");
  }
  if (eta.sign() < 0) fail(errc::precondition_violated, "eta must be nonnegative");
  if (leaves_hull(J, -gamma, delta)) {
    fail(errc::out_of_range, "selection has entries outside [-gamma, delta]");
  }

  const ExactSum neg_before = strict_side_sum(J, true);
  const ExactSum pos_before = strict_side_sum(J, false);

  const Scalar new_lo = seq.lo() < -gamma ? seq.lo() : -gamma;
  const Scalar new_hi = delta < seq.hi() ? seq.hi() : delta;
  DiagonalSequence host = seq.with_bounds(new_lo, new_hi);
  DiagonalSequence selection = J.with_bounds(-gamma, delta);

  if (eta.sign() > 0) {
    const bool up_room = nonnegative_headroom(J, delta).is_divergent();
    const bool down_room = nonpositive_headroom(J, gamma).is_divergent();
    if (!up_room && !down_room) {
      fail(errc::hypothesis_violated, "selection has finite headroom on both sides of zero");
    }
    if (up_room) {
      decouple_upward(host, selection, gamma, delta, eta);
    } else {
      // mirror through zero: the nonpositive side's headroom becomes upward
      DiagonalSequence host_m = host.affine_image(Scalar(-1), Scalar(0));
      DiagonalSequence sel_m = selection.affine_image(Scalar(-1), Scalar(0));
      decouple_upward(host_m, sel_m, delta, gamma, eta);
      host = host_m.affine_image(Scalar(-1), Scalar(0));
      selection = sel_m.affine_image(Scalar(-1), Scalar(0));
    }
  }

  TransformReceipt receipt;
  receipt.moved_mass = eta;
  {
    std::ostringstream os;
    os << "J with " << count_in_interval(J, -gamma, true, delta, true).str()
       << " entries in [-" << gamma.str() << ", " << delta.str() << "]";
    receipt.touched_indices = os.str();
  }
  receipt.changes.push_back(
      {"negative-side sum of the selection", Scalar(0), neg_before, strict_side_sum(selection, true)});
  receipt.changes.push_back(
      {"positive-side sum of the selection", Scalar(0), pos_before, strict_side_sum(selection, false)});
  return {std::move(host), std::move(receipt)};
}

ExtremeSplit split_extremes(const DiagonalSequence& seq, const Scalar& B) {
  if (B.sign() <= 0) fail(errc::out_of_range, "upper endpoint must be positive");
  if (leaves_hull(seq, Scalar(0), B)) {
    fail(errc::bounds_violated, "sequence has entries outside [0, B]");
  }

  ExtendedCount zeros = 0;
  ExtendedCount tops = 0;
  std::vector<DiagonalSequence::Atom> mid_atoms;
  std::vector<Scalar> mid_infinite;
  std::vector<GeometricTail> mid_tails;

  for (const auto& [v, c] : seq.atoms()) {
    if (v.is_zero()) {
      zeros += ExtendedCount(c);
    } else if (v == B) {
      tops += ExtendedCount(c);
    } else {
      mid_atoms.emplace_back(v, c);
    }
  }
  for (const auto& v : seq.infinite_atoms()) {
    if (v.is_zero()) {
      zeros += ExtendedCount::infinite();
    } else if (v == B) {
      tops += ExtendedCount::infinite();
    } else {
      mid_infinite.push_back(v);
    }
  }
  for (const auto& t : seq.tails()) {
    // strictly monotone terms hit an endpoint at most once, and only the
    // extreme term can: ascending tails start lowest, descending start highest
    GeometricTail kept = t;
    if (kept.first_term().is_zero()) {
      zeros += 1;
      kept.coeff = kept.coeff * kept.ratio;
    } else if (kept.first_term() == B) {
      tops += 1;
      kept.coeff = kept.coeff * kept.ratio;
    }
    mid_tails.push_back(kept);
  }

  DiagonalSequence interior = DiagonalSequence::create(Scalar(0), B, std::move(mid_atoms),
                                                       std::move(mid_infinite), std::move(mid_tails));
  return {zeros, std::move(interior), tops};
}

namespace {

// Largest entry value strictly inside (lo, hi), when one exists. Requires
// every accumulation point of seq to lie outside (lo, hi]; the class-F
// check in truncate_to_finite guarantees this for bands inside (0, 1).
std::optional<Scalar> largest_entry_in(const DiagonalSequence& seq, const Scalar& lo,
                                       const Scalar& hi) {
  std::optional<Scalar> best;
  auto consider = [&](const Scalar& v) {
    if (lo < v && v < hi && (!best || *best < v)) best = v;
  };
  for (const auto& [v, c] : seq.atoms()) consider(v);
  for (const auto& v : seq.infinite_atoms()) consider(v);
  for (const auto& t : seq.tails()) {
    if (t.coeff.sign() > 0) {
      // descending toward the limit: first term below hi is the side's max
      if (!(t.limit < hi)) continue;
      std::uint64_t s = 1;
      while (!(t.term(s) < hi)) ++s;
      consider(t.term(s));
    } else {
      // ascending toward the limit: finitely many terms below hi
      if (!(lo < t.limit)) continue;
      if (!(hi < t.limit)) {
        fail(errc::precondition_violated, "entries accumulate inside the receiver band");
      }
      for (std::uint64_t s = 1; t.term(s) < hi; ++s) consider(t.term(s));
    }
  }
  return best;
}

// sum of entries <= x (strict when closed is false); finite whenever seq is
// summable toward 0 and x < 1.
ExactSum mass_below(const DiagonalSequence& seq, const Scalar& x, bool closed) {
  ExactSum total = Scalar(0);
  for (const auto& [v, c] : seq.atoms()) {
    if (v < x || (closed && v == x)) total += Scalar(v * Scalar(static_cast<std::int64_t>(c)));
  }
  for (const auto& v : seq.infinite_atoms()) {
    if (v < x || (closed && v == x)) {
      if (!v.is_zero()) return ExactSum::divergent();
    }
  }
  for (const auto& t : seq.tails()) {
    total += tail_split(t, x, closed).low.affine_sum(Scalar(1), Scalar(0));
  }
  return total;
}

}  // namespace

TransformResult truncate_to_finite(const DiagonalSequence& seq, const Scalar& epsilon) {
  const Scalar zero(0);
  const Scalar one(1);
  const Scalar half(1, 2);
  if (epsilon.sign() <= 0 || half < epsilon) {
    fail(errc::out_of_range, "epsilon must lie in (0, 1/2]");
  }
  if (leaves_hull(seq, zero, one)) {
    fail(errc::bounds_violated, "sequence has entries outside [0, 1]");
  }
  if (!in_class_F(seq)) {
    fail(errc::not_in_class_f, "sequence is not summable toward the endpoints");
  }

  const DiagonalSequence mirrored = seq.affine_image(Scalar(-1), one);
  const std::optional<Scalar> low_receiver = largest_entry_in(seq, zero, epsilon);
  const std::optional<Scalar> high_mirror = largest_entry_in(mirrored, zero, epsilon);
  if (!low_receiver || !high_mirror) {
    fail(errc::no_receiver, "need an entry in (0, eps) and one in (1-eps, 1)");
  }
  const Scalar d0 = *low_receiver;
  const Scalar d1 = one - *high_mirror;

  const ExactSum low_before = mass_below(seq, epsilon, false);
  const ExactSum high_before = mass_below(mirrored, epsilon, false);

  TransformReceipt receipt;
  receipt.changes.push_back({"entry mass below the band edge", epsilon, low_before, low_before});
  receipt.changes.push_back(
      {"entry deficiency above the band edge", one - epsilon, high_before, high_before});

  if (seq.tails().empty()) {
    // nothing accumulates, so the sequence already has finite support off
    // the endpoints and no mass needs collapsing
    receipt.moved_mass = zero;
    receipt.touched_indices = "nothing (no tail mass)";
    return {seq, std::move(receipt)};
  }

  // calibrated cutoff: the collapsed mass per side must fit on the receiver
  // without leaving (0, eps) resp. (1-eps, 1)
  const Scalar slack0 = epsilon - d0;
  const Scalar slack1 = d1 - (one - epsilon);
  const Scalar bound = slack0 < slack1 ? slack0 : slack1;
  Scalar cutoff = half;
  for (;;) {
    if (cutoff < d0 && cutoff < one - d1) {
      const ExactSum m_low = mass_below(seq, cutoff, true);
      const ExactSum m_high = mass_below(mirrored, cutoff, true);
      if (!m_low.is_divergent() && !m_high.is_divergent() && m_low.value() < bound &&
          m_high.value() < bound) {
        break;
      }
    }
    cutoff = cutoff * half;
  }
  const Scalar m0 = mass_below(seq, cutoff, true).value();
  const Scalar m1 = mass_below(mirrored, cutoff, true).value();

  std::vector<DiagonalSequence::Atom> atoms;
  std::vector<Scalar> infinite_atoms;
  std::uint64_t zero_hits = 0;
  std::uint64_t one_hits = 0;
  bool zero_swarm = false;
  bool one_swarm = false;

  auto place_value = [&](const Scalar& v, std::uint64_t count) {
    if (v <= cutoff) {
      zero_hits += count;
    } else if (one - cutoff <= v) {
      one_hits += count;
    } else {
      atoms.emplace_back(v, count);
    }
  };

  for (const auto& [v, c] : seq.atoms()) place_value(v, c);
  for (const auto& v : seq.infinite_atoms()) {
    if (v <= cutoff) {
      zero_swarm = true;
    } else if (one - cutoff <= v) {
      one_swarm = true;
    } else {
      infinite_atoms.push_back(v);
    }
  }
  for (const auto& t : seq.tails()) {
    // materialize the finitely many terms outside the collapse bands, then
    // absorb the infinite remainder into the nearer endpoint
    const bool to_zero = t.limit <= cutoff;
    std::uint64_t s = 1;
    for (;; ++s) {
      const Scalar term = t.term(s);
      const bool collapsed_side = to_zero ? term <= cutoff : one - cutoff <= term;
      if (collapsed_side) break;
      place_value(term, 1);
    }
    (to_zero ? zero_swarm : one_swarm) = true;
  }

  if (zero_hits > 0) atoms.emplace_back(zero, zero_hits);
  if (one_hits > 0) atoms.emplace_back(one, one_hits);
  if (zero_swarm) infinite_atoms.push_back(zero);
  if (one_swarm) infinite_atoms.push_back(one);

  DiagonalSequence out =
      DiagonalSequence::create(zero, one, std::move(atoms), std::move(infinite_atoms), {});
  if (m0.sign() > 0) {
    out.remove_one(d0);
    out.add_atom(d0 + m0);
  }
  if (m1.sign() > 0) {
    out.remove_one(d1);
    out.add_atom(d1 - m1);
  }

  receipt.moved_mass = m0 + m1;
  {
    std::ostringstream os;
    os << "entries within " << cutoff.str() << " of an endpoint; receivers " << d0.str() << " and "
       << d1.str();
    receipt.touched_indices = os.str();
  }
  receipt.changes[0].after = mass_below(out, epsilon, false);
  receipt.changes[1].after = mass_below(out.affine_image(Scalar(-1), one), epsilon, false);
  return {std::move(out), std::move(receipt)};
}

}  // namespace spectradiag
