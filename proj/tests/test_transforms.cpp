#include "doctest.h"

#include <vector>

#include "spectradiag/errors.hpp"
#include "spectradiag/transforms.hpp"

using namespace spectradiag;

namespace {

DiagonalSequence beta_sequence(const Scalar& beta) {
  return DiagonalSequence::create(Scalar(0), Scalar(1), {}, {},
                                  {GeometricTail{Scalar(0), Scalar(1), beta},
                                   GeometricTail{Scalar(1), Scalar(-1), beta}});
}

Scalar negative_side(const DiagonalSequence& seq) {
  // sum over entries d < 0 of d, via the defect sum at zero
  return -lower_defect_sum(seq, Scalar(0)).value();
}

template <typename Body>
void check_throws_code(Body&& body, errc expected) {
  bool threw = false;
  try {
    body();
  } catch (const error& e) {
    threw = true;
    CHECK(e.code() == expected);
  }
  CHECK(threw);
}

void check_replay(const AggregateChange& change, const Scalar& delta_expected) {
  REQUIRE_FALSE(change.before.is_divergent());
  REQUIRE_FALSE(change.after.is_divergent());
  CHECK(change.after.value() == change.before.value() - delta_expected);
}

bool same_presentation(const DiagonalSequence& a, const DiagonalSequence& b) {
  if (a.atoms() != b.atoms()) return false;
  if (a.infinite_atoms() != b.infinite_atoms()) return false;
  if (a.tails().size() != b.tails().size()) return false;
  for (std::size_t i = 0; i < a.tails().size(); ++i) {
    const auto& ta = a.tails()[i];
    const auto& tb = b.tails()[i];
    if (ta.limit != tb.limit || ta.coeff != tb.coeff || ta.ratio != tb.ratio) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("full drain sends both selections to the endpoints") {
  auto seq = DiagonalSequence::finite(Scalar(0), Scalar(1), {Scalar(1, 4), Scalar(3, 4)});
  auto res = move_toward_endpoints(seq, {Scalar(1, 4)}, {Scalar(3, 4)}, Scalar(1, 4), Scalar(0),
                                   Scalar(1));
  REQUIRE(res.sequence.atoms().size() == 2);
  CHECK(res.sequence.atoms()[0].first == Scalar(0));
  CHECK(res.sequence.atoms()[1].first == Scalar(1));
  CHECK(res.receipt.moved_mass == Scalar(1, 4));
  REQUIRE(res.receipt.changes.size() == 2);
  CHECK(res.receipt.changes[0].before == ExactSum(Scalar(1, 4)));
  CHECK(res.receipt.changes[0].after == ExactSum(Scalar(0)));
  CHECK(res.receipt.changes[1].before == ExactSum(Scalar(1, 4)));
  CHECK(res.receipt.changes[1].after == ExactSum(Scalar(0)));
}

TEST_CASE("zero budget leaves the sequence unchanged") {
  auto seq = DiagonalSequence::finite(Scalar(0), Scalar(1), {Scalar(1, 4), Scalar(3, 4)});
  auto res = move_toward_endpoints(seq, {Scalar(1, 4)}, {Scalar(3, 4)}, Scalar(0), Scalar(0),
                                   Scalar(1));
  CHECK(same_presentation(res.sequence, seq));
  CHECK(res.receipt.moved_mass == Scalar(0));
}

TEST_CASE("greedy drain lowers the smallest selected value first") {
  auto seq = DiagonalSequence::finite(Scalar(0), Scalar(1),
                                      {Scalar(1, 4), Scalar(1, 3), Scalar(2, 3)});
  auto res = move_toward_endpoints(seq, {Scalar(1, 4), Scalar(1, 3)}, {Scalar(2, 3)}, Scalar(1, 3),
                                   Scalar(0), Scalar(1));
  // the lowered selection keeps total 7/12 - 1/3 = 1/4, split greedily as 0 and 1/4
  REQUIRE(res.sequence.atoms().size() == 3);
  CHECK(res.sequence.atoms()[0].first == Scalar(0));
  CHECK(res.sequence.atoms()[1].first == Scalar(1, 4));
  CHECK(res.sequence.atoms()[2].first == Scalar(1));
  check_replay(res.receipt.changes[0], Scalar(1, 3));
  check_replay(res.receipt.changes[1], Scalar(1, 3));
  CHECK(res.receipt.changes[1].after == ExactSum(Scalar(0)));
}

TEST_CASE("moving mass keeps untouched entries and total sum") {
  auto seq = DiagonalSequence::create(
      Scalar(0), Scalar(1), {{Scalar(9, 10), 2}}, {},
      {GeometricTail{Scalar(0), Scalar(1), Scalar(1, 2)}});
  // 1/4 is the second tail term: the head 1/2 materializes, the tail advances
  auto res = move_toward_endpoints(seq, {Scalar(1, 4)}, {Scalar(1, 2)}, Scalar(1, 16), Scalar(0),
                                   Scalar(1));
  CHECK(total_sum(res.sequence) == total_sum(seq));
  CHECK(count_in_interval(res.sequence, Scalar(9, 10), true, Scalar(9, 10), true) ==
        ExtendedCount(2));
  CHECK(count_in_interval(res.sequence, Scalar(3, 16), true, Scalar(3, 16), true) ==
        ExtendedCount(1));
  CHECK(count_in_interval(res.sequence, Scalar(9, 16), true, Scalar(9, 16), true) ==
        ExtendedCount(1));
  REQUIRE(res.sequence.tails().size() == 1);
  CHECK(res.sequence.tails()[0].coeff == Scalar(1, 4));
}

TEST_CASE("selection preconditions are enforced") {
  auto seq = DiagonalSequence::finite(Scalar(0), Scalar(1), {Scalar(1, 4), Scalar(3, 4)});
  check_throws_code(
      [&] {
        move_toward_endpoints(seq, {Scalar(3, 4)}, {Scalar(1, 4)}, Scalar(1, 8), Scalar(0),
                              Scalar(1));
      },
      errc::order_violated);
  check_throws_code(
      [&] {
        move_toward_endpoints(seq, {Scalar(1, 4)}, {Scalar(3, 4)}, Scalar(1, 2), Scalar(0),
                              Scalar(1));
      },
      errc::budget_exceeded);
  check_throws_code(
      [&] {
        move_toward_endpoints(seq, {Scalar(2)}, {Scalar(3, 4)}, Scalar(1, 8), Scalar(0), Scalar(1));
      },
      errc::out_of_range);
  check_throws_code(
      [&] {
        move_toward_endpoints(seq, {Scalar(1, 8)}, {Scalar(3, 4)}, Scalar(1, 16), Scalar(0),
                              Scalar(1));
      },
      errc::precondition_violated);  // 1/8 is not an entry of seq
}

TEST_CASE("decoupling with zero eta is the identity") {
  auto seq = beta_sequence(Scalar(1, 2)).affine_image(Scalar(1), Scalar(-1, 2));
  auto res = decouple(seq, seq, Scalar(1, 2), Scalar(1, 2), Scalar(0));
  CHECK(same_presentation(res.sequence, seq));
  CHECK(res.receipt.changes[0].before == res.receipt.changes[0].after);
  CHECK(res.receipt.changes[1].before == res.receipt.changes[1].after);
}

TEST_CASE("decoupling shifts the side sums by exactly eta") {
  // geometric tail descending to 0 inside [-1/2, 1/2]
  auto seq = DiagonalSequence::create(Scalar(-1, 2), Scalar(1, 2), {}, {},
                                      {GeometricTail{Scalar(0), Scalar(1), Scalar(1, 2)}});
  auto res = decouple(seq, seq, Scalar(1, 2), Scalar(1, 2), Scalar(1, 4));
  CHECK(negative_side(res.sequence) == Scalar(-1, 4));
  CHECK(total_sum(res.sequence) == total_sum(seq));  // drain and fill cancel
  REQUIRE(res.receipt.changes.size() == 2);
  CHECK(res.receipt.changes[0].before == ExactSum(Scalar(0)));
  CHECK(res.receipt.changes[0].after == ExactSum(Scalar(-1, 4)));
  CHECK(res.receipt.changes[1].before == ExactSum(Scalar(1)));
  CHECK(res.receipt.changes[1].after == ExactSum(Scalar(5, 4)));
  // ceil(eta/gamma) = 1 entry ends up below zero
  CHECK(count_in_interval(res.sequence, Scalar(-1, 2), true, Scalar(0), false) ==
        ExtendedCount(1));
}

TEST_CASE("the number of entries pushed below zero is ceil(eta over gamma)") {
  auto seq = DiagonalSequence::create(Scalar(0), Scalar(1, 2), {}, {Scalar(0)}, {});
  auto res = decouple(seq, seq, Scalar(1, 3), Scalar(1, 2), Scalar(1));
  CHECK(count_in_interval(res.sequence, Scalar(-1, 3), true, Scalar(0), false) ==
        ExtendedCount(3));
  CHECK(negative_side(res.sequence) == Scalar(-1));
  CHECK(res.receipt.changes[1].after == ExactSum(Scalar(1)));
  // the infinite reservoir at zero is untouched by removals
  REQUIRE(res.sequence.infinite_atoms().size() == 1);
  CHECK(res.sequence.infinite_atoms()[0] == Scalar(0));
}

TEST_CASE("decoupling uses the negative side when only it has room") {
  // terms -2^-t ascend to 0: the headroom sum over d <= 0 of (d + 1/2)
  // diverges while the positive side is empty
  auto tail = GeometricTail{Scalar(0), Scalar(-1), Scalar(1, 2)};
  auto seq = DiagonalSequence::create(Scalar(-1, 2), Scalar(1, 2), {}, {}, {tail});
  auto res = decouple(seq, seq, Scalar(1, 2), Scalar(1, 2), Scalar(1, 4));
  CHECK(res.receipt.changes[0].before == ExactSum(Scalar(-1)));
  check_replay(res.receipt.changes[0], Scalar(1, 4));   // negative side drops by eta
  check_replay(res.receipt.changes[1], Scalar(-1, 4));  // positive side gains eta
  CHECK(negative_side(res.sequence) == Scalar(-5, 4));
}

TEST_CASE("host entries outside the selection are untouched") {
  auto selection = DiagonalSequence::create(Scalar(-1, 2), Scalar(1, 2), {}, {},
                                            {GeometricTail{Scalar(0), Scalar(1), Scalar(1, 2)}});
  auto host = concat(selection, DiagonalSequence::finite(Scalar(7), Scalar(7), {Scalar(7)}));
  auto res = decouple(host, selection, Scalar(1, 2), Scalar(1, 2), Scalar(1, 4));
  CHECK(count_in_interval(res.sequence, Scalar(7), true, Scalar(7), true) == ExtendedCount(1));
  CHECK(negative_side(res.sequence) == Scalar(-1, 4));
}

TEST_CASE("decoupling preconditions are enforced") {
  auto finite = DiagonalSequence::finite(Scalar(0), Scalar(1, 2), {Scalar(1, 4), Scalar(1, 2)});
  check_throws_code([&] { decouple(finite, finite, Scalar(1, 2), Scalar(1, 2), Scalar(1, 8)); },
                    errc::hypothesis_violated);
  check_throws_code([&] { decouple(finite, finite, Scalar(0), Scalar(1, 2), Scalar(1, 8)); },
                    errc::out_of_range);
  check_throws_code([&] { decouple(finite, finite, Scalar(1, 2), Scalar(1, 4), Scalar(1, 8)); },
                    errc::out_of_range);  // selection entry 1/2 above delta
}

TEST_CASE("splitting extremes separates endpoint values") {
  auto seq = DiagonalSequence::create(Scalar(0), Scalar(1), {{Scalar(1, 2), 3}, {Scalar(1), 2}},
                                      {Scalar(0)}, {});
  auto split = split_extremes(seq, Scalar(1));
  CHECK(split.count_zero == ExtendedCount::infinite());
  CHECK(split.count_top == ExtendedCount(2));
  REQUIRE(split.interior.atoms().size() == 1);
  CHECK(split.interior.atoms()[0].first == Scalar(1, 2));
  CHECK(split.interior.atoms()[0].second == 3);
  CHECK(split.interior.infinite_atoms().empty());
}

TEST_CASE("splitting a sequence with no endpoint values is trivial") {
  auto seq = beta_sequence(Scalar(1, 2));
  auto split = split_extremes(seq, Scalar(1));
  CHECK(split.count_zero == ExtendedCount(0));
  CHECK(split.count_top == ExtendedCount(0));
  CHECK(same_presentation(split.interior, seq));

  auto empty = DiagonalSequence::create(Scalar(0), Scalar(1), {}, {}, {});
  auto esplit = split_extremes(empty, Scalar(1));
  CHECK(esplit.count_zero == ExtendedCount(0));
  CHECK(esplit.count_top == ExtendedCount(0));
  CHECK(esplit.interior.entry_count() == ExtendedCount(0));
}

TEST_CASE("a tail term sitting exactly on an endpoint is split off") {
  // terms 1, 3/4, 5/8, ... descend to 1/2; only the first term hits B = 1
  auto seq = DiagonalSequence::create(Scalar(0), Scalar(1), {}, {},
                                      {GeometricTail{Scalar(1, 2), Scalar(1), Scalar(1, 2)}});
  auto split = split_extremes(seq, Scalar(1));
  CHECK(split.count_zero == ExtendedCount(0));
  CHECK(split.count_top == ExtendedCount(1));
  REQUIRE(split.interior.tails().size() == 1);
  CHECK(split.interior.tails()[0].coeff == Scalar(1, 2));
  CHECK(split.interior.tails()[0].limit == Scalar(1, 2));
}

TEST_CASE("interior cut statistics survive the split") {
  auto seq = DiagonalSequence::create(Scalar(0), Scalar(1), {{Scalar(1, 2), 3}, {Scalar(1), 2}},
                                      {Scalar(0)}, {});
  auto split = split_extremes(seq, Scalar(1));
  for (const Scalar& alpha : {Scalar(1, 4), Scalar(1, 2), Scalar(3, 4)}) {
    auto before = cut_stats(seq, alpha, Scalar(1));
    auto after = cut_stats(split.interior, alpha, Scalar(1));
    CHECK(before.C == after.C);
    CHECK(before.D == after.D);
  }
}

TEST_CASE("truncation collapses tail mass onto the calibrated receivers") {
  auto seq = beta_sequence(Scalar(1, 2));
  auto res = truncate_to_finite(seq, Scalar(3, 10));
  const auto& out = res.sequence;

  // entries within 1/64 of an endpoint collapsed; receivers 1/4 and 3/4 absorb 1/32 each
  CHECK(res.receipt.moved_mass == Scalar(1, 16));
  CHECK(count_in_interval(out, Scalar(9, 32), true, Scalar(9, 32), true) == ExtendedCount(1));
  CHECK(count_in_interval(out, Scalar(23, 32), true, Scalar(23, 32), true) == ExtendedCount(1));
  CHECK(count_in_interval(out, Scalar(1, 4), true, Scalar(1, 4), true) == ExtendedCount(0));
  CHECK(out.tails().empty());
  REQUIRE(out.infinite_atoms().size() == 2);
  CHECK(out.infinite_atoms()[0] == Scalar(0));
  CHECK(out.infinite_atoms()[1] == Scalar(1));
  // untouched band entries survive: the two copies of 1/2
  CHECK(count_in_interval(out, Scalar(1, 2), true, Scalar(1, 2), true) == ExtendedCount(2));

  // exact mass preservation at both band edges
  CHECK(res.receipt.changes[0].before == res.receipt.changes[0].after);
  CHECK(res.receipt.changes[1].before == res.receipt.changes[1].after);
  auto before = cut_stats(seq, Scalar(3, 10), Scalar(1));
  auto after = cut_stats(out, Scalar(3, 10), Scalar(1));
  CHECK(before.C == after.C);
  auto dbefore = cut_stats(seq, Scalar(7, 10), Scalar(1));
  auto dafter = cut_stats(out, Scalar(7, 10), Scalar(1));
  CHECK(dbefore.D == dafter.D);
}

TEST_CASE("the trace-gap functional is invariant on the untouched band") {
  auto seq = beta_sequence(Scalar(1, 2));
  auto res = truncate_to_finite(seq, Scalar(3, 10));
  for (const Scalar& alpha : {Scalar(3, 10), Scalar(2, 5), Scalar(1, 2), Scalar(7, 10)}) {
    CHECK(f_value(seq, alpha) == f_value(res.sequence, alpha));
  }
}

TEST_CASE("truncation with a coarser ratio still balances exactly") {
  auto seq = beta_sequence(Scalar(1, 4));
  auto res = truncate_to_finite(seq, Scalar(1, 4));
  // receivers are 1/16 and 15/16; each absorbs the 1/48 of residual tail mass
  CHECK(count_in_interval(res.sequence, Scalar(1, 12), true, Scalar(1, 12), true) ==
        ExtendedCount(1));
  CHECK(count_in_interval(res.sequence, Scalar(11, 12), true, Scalar(11, 12), true) ==
        ExtendedCount(1));
  CHECK(res.receipt.changes[0].before == res.receipt.changes[0].after);
  CHECK(res.receipt.changes[1].before == res.receipt.changes[1].after);
  CHECK(res.sequence.tails().empty());
}

TEST_CASE("truncating a finite sequence is the identity") {
  auto seq = DiagonalSequence::finite(
      Scalar(0), Scalar(1), {Scalar(1, 40), Scalar(1, 4), Scalar(3, 4), Scalar(39, 40)});
  auto res = truncate_to_finite(seq, Scalar(3, 10));
  CHECK(same_presentation(res.sequence, seq));
  CHECK(res.receipt.moved_mass == Scalar(0));
  CHECK(res.receipt.changes[0].before == res.receipt.changes[0].after);
}

TEST_CASE("truncation failure modes") {
  check_throws_code(
      [] {
        auto seq = DiagonalSequence::finite(Scalar(0), Scalar(1), {Scalar(1, 2)});
        truncate_to_finite(seq, Scalar(3, 10));
      },
      errc::no_receiver);
  check_throws_code(
      [] {
        // low receiver exists but nothing sits in (1 - eps, 1)
        auto seq = DiagonalSequence::finite(Scalar(0), Scalar(1), {Scalar(1, 5), Scalar(1, 2)});
        truncate_to_finite(seq, Scalar(3, 10));
      },
      errc::no_receiver);
  check_throws_code(
      [] {
        auto seq = DiagonalSequence::create(Scalar(0), Scalar(1), {}, {Scalar(1, 2)}, {});
        truncate_to_finite(seq, Scalar(3, 10));
      },
      errc::not_in_class_f);
  check_throws_code(
      [] {
        auto seq = DiagonalSequence::finite(Scalar(-1), Scalar(1), {Scalar(-1, 2), Scalar(1, 2)});
        truncate_to_finite(seq, Scalar(3, 10));
      },
      errc::bounds_violated);
  check_throws_code(
      [] {
        auto seq = beta_sequence(Scalar(1, 2));
        truncate_to_finite(seq, Scalar(3, 5));
      },
      errc::out_of_range);
}

}  // TEST_SUITE
