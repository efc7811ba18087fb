#include "spectradiag/majorization.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace spectradiag {

std::string SymmetricMatrixWitness::to_csv() const {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", at(i, j));
      out += buf;
      out += (j + 1 < n_) ? ',' : '\n';
    }
  }
  return out;
}

std::vector<Scalar> decreasing_rearrangement(std::vector<Scalar> v) {
  std::stable_sort(v.begin(), v.end(), [](const Scalar& a, const Scalar& b) { return b < a; });
  return v;
}

bool majorizes(const std::vector<Scalar>& mu, const std::vector<Scalar>& lambda) {
  if (mu.size() != lambda.size()) fail(errc::length_mismatch, "vectors differ in length");
  if (mu.empty()) fail(errc::precondition_violated, "majorization needs nonempty vectors");
  std::vector<Scalar> m = decreasing_rearrangement(mu);
  std::vector<Scalar> l = decreasing_rearrangement(lambda);
  Scalar pm(0), pl(0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    pm += m[i];
    pl += l[i];
    if (pl < pm) return false;
  }
  return pm == pl;
}

bool schur_horn_check(const std::vector<Scalar>& lambda, const std::vector<Scalar>& d) {
  return majorizes(d, lambda);
}

bool finite_rank_check(const std::vector<Scalar>& lambda, const std::vector<Scalar>& d_interior,
                       const DiagonalSequence& d_tail, Orientation orientation) {
  if (lambda.empty()) fail(errc::precondition_violated, "rank must be positive");
  if (lambda.size() != d_interior.size())
    fail(errc::length_mismatch, "eigenvalue list and aligned diagonal block differ in length");
  const std::size_t N = lambda.size();
  bool noninc = orientation == Orientation::nonincreasing;

  for (const Scalar& l : lambda)
    if (l.sign() <= 0) fail(errc::hypothesis_violated, "eigenvalues must be positive");
  for (std::size_t i = 0; i + 1 < N; ++i) {
    bool ok = noninc ? lambda[i] >= lambda[i + 1] : lambda[i] <= lambda[i + 1];
    if (!ok) fail(errc::hypothesis_violated, "eigenvalues out of order for the orientation");
  }
  for (const Scalar& x : d_interior)
    if (x.sign() < 0) fail(errc::hypothesis_violated, "diagonal terms must be nonnegative");
  for (std::size_t i = 0; i + 1 < N; ++i) {
    bool ok = noninc ? d_interior[i] >= d_interior[i + 1] : d_interior[i] <= d_interior[i + 1];
    if (!ok) fail(errc::hypothesis_violated, "diagonal block out of order for the orientation");
  }
  const Scalar& pivot = noninc ? d_interior.back() : d_interior.front();
  if (d_tail.lo() < Scalar(0) &&
      count_in_interval(d_tail, d_tail.lo(), true, Scalar(0), false) != ExtendedCount(0))
    fail(errc::hypothesis_violated, "diagonal terms must be nonnegative");
  if (count_in_interval(d_tail, pivot, false, d_tail.hi(), true) != ExtendedCount(0))
    fail(errc::hypothesis_violated, "tail entry exceeds the pivot diagonal entry");

  ExactSum tail = total_sum(d_tail);
  if (tail.is_divergent()) return false;  // the full trace cannot match
  const Scalar& T = tail.value();

  if (noninc) {
    // Suffix sums: sum_{i >= n} d_i >= sum_{i >= n} lambda_i, equality at n = 1.
    Scalar sd = T, sl(0);
    for (std::size_t i = N; i-- > 0;) {
      sd += d_interior[i];
      sl += lambda[i];
      if (sd < sl) return false;
    }
    return sd == sl;
  }
  // Prefix sums including the whole tail on the left, equality at n = N.
  Scalar sd = T, sl(0);
  for (std::size_t i = 0; i < N; ++i) {
    sd += d_interior[i];
    sl += lambda[i];
    if (sd < sl) return false;
  }
  return sd == sl;
}

namespace {

struct ActiveSlot {
  Scalar value;
  std::size_t axis;
};

void apply_rotation(SymmetricMatrixWitness& m, std::size_t p, std::size_t q, double c,
                    double s) {
  const std::size_t n = m.dimension();
  std::vector<double> row_p(n), row_q(n);
  for (std::size_t k = 0; k < n; ++k) {
    row_p[k] = c * m.at(p, k) + s * m.at(q, k);
    row_q[k] = -s * m.at(p, k) + c * m.at(q, k);
  }
  // Same mix on the columns; the (p,p), (p,q), (q,q) entries need both.
  double mpp = c * row_p[p] + s * row_p[q];
  double mpq = -s * row_p[p] + c * row_p[q];
  double mqq = -s * row_q[p] + c * row_q[q];
  for (std::size_t k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    m.set(p, k, row_p[k]);
    m.set(q, k, row_q[k]);
  }
  m.set(p, p, mpp);
  m.set(p, q, mpq);
  m.set(q, q, mqq);
}

}  // namespace

SymmetricMatrixWitness construct_matrix(const std::vector<Scalar>& lambda,
                                        const std::vector<Scalar>& d) {
  if (!schur_horn_check(lambda, d))
    fail(errc::infeasible_input, "diagonal is not majorized by the eigenvalue list");
  const std::size_t N = lambda.size();

  SymmetricMatrixWitness m(N);
  std::vector<ActiveSlot> active;
  active.reserve(N);
  {
    std::vector<Scalar> sorted = decreasing_rearrangement(lambda);
    for (std::size_t i = 0; i < N; ++i) {
      active.push_back(ActiveSlot{sorted[i], i});
      m.set(i, i, sorted[i].to_double());
    }
  }
  std::vector<Scalar> targets = decreasing_rearrangement(d);
  std::vector<Scalar> axis_diag(N, Scalar(0));

  std::size_t next = 0;
  while (active.size() > 1) {
    const Scalar& t = targets[next];
    // Last active slot still at or above the target. The scan is total: the
    // majorization invariant keeps the largest slot >= the largest target.
    std::size_t j = 0;
    while (j + 1 < active.size() && active[j + 1].value >= t) ++j;
    if (active[j].value < t)
      fail(errc::infeasible_input, "active slots dropped below the next target");

    if (j + 1 == active.size()) {
      // Every slot clears the largest remaining target; equal sums force all
      // slots and all remaining targets to coincide, so the block is done.
      for (const ActiveSlot& slot : active) {
        m.set(slot.axis, slot.axis, targets[next].to_double());
        axis_diag[slot.axis] = targets[next];
        ++next;
      }
      active.clear();
      break;
    }

    ActiveSlot hi = active[j];
    ActiveSlot lo = active[j + 1];
    // c^2 hi + (1 - c^2) lo = t, with hi >= t > lo.
    Scalar c2 = (t - lo.value) / (hi.value - lo.value);
    double c = std::sqrt(c2.to_double());
    double s = std::sqrt((Scalar(1) - c2).to_double());
    apply_rotation(m, hi.axis, lo.axis, c, s);
    m.set(hi.axis, hi.axis, t.to_double());  // exact by construction
    axis_diag[hi.axis] = t;
    m.record_step(RotationStep{hi.axis, lo.axis, c, s, t});

    Scalar merged = hi.value + lo.value - t;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(j),
                 active.begin() + static_cast<std::ptrdiff_t>(j) + 2);
    auto pos = std::lower_bound(
        active.begin(), active.end(), merged,
        [](const ActiveSlot& a, const Scalar& v) { return a.value > v; });
    active.insert(pos, ActiveSlot{merged, lo.axis});
    ++next;
  }
  if (active.size() == 1) {
    // Equal totals pin the last slot to the last target.
    m.set(active[0].axis, active[0].axis, targets[next].to_double());
    axis_diag[active[0].axis] = targets[next];
  }

  // Conjugate by the permutation sending the requested order onto the axes
  // that carry those values; eigenvalues are untouched.
  std::vector<std::size_t> axis_of(N);
  std::vector<bool> used(N, false);
  for (std::size_t i = 0; i < N; ++i) {
    bool found = false;
    for (std::size_t a = 0; a < N; ++a) {
      if (!used[a] && axis_diag[a] == d[i]) {
        axis_of[i] = a;
        used[a] = true;
        found = true;
        break;
      }
    }
    if (!found) fail(errc::infeasible_input, "diagonal value lost during construction");
  }
  SymmetricMatrixWitness out(N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) out.set(i, j, m.at(axis_of[i], axis_of[j]));
  for (std::size_t i = 0; i < N; ++i) out.set(i, i, d[i].to_double());
  for (const RotationStep& step : m.provenance()) out.record_step(step);
  return out;
}

double validate_eigenvalues(const SymmetricMatrixWitness& witness,
                            const std::vector<Scalar>& lambda) {
  const std::size_t n = witness.dimension();
  if (lambda.size() != n) fail(errc::length_mismatch, "eigenvalue list size mismatch");
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i),
                                          static_cast<Eigen::Index>(j)) = witness.at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  std::vector<double> expected;
  expected.reserve(n);
  for (const Scalar& l : lambda) expected.push_back(l.to_double());
  std::sort(expected.begin(), expected.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    worst = std::max(worst,
                     std::abs(solver.eigenvalues()[static_cast<Eigen::Index>(i)] - expected[i]));
  return worst;
}

}  // namespace spectradiag
