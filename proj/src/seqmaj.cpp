#include "majent/seqmaj.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "majent/errors.hpp"

namespace majent {

namespace {

// Entries below this are treated as exact zeros by the entropy.
constexpr double kLogFloor = 1e-300;

}  // namespace

ProbVector::ProbVector(std::vector<double> entries, bool normalized)
    : entries_(std::move(entries)), normalized_(normalized) {
  if (entries_.empty()) throw InvalidArgument("ProbVector: length must be at least 1");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    double& x = entries_[i];
    if (!std::isfinite(x)) {
      std::ostringstream os;
      os << "ProbVector: entry " << i << " is not finite";
      throw InvalidArgument(os.str());
    }
    if (x < 0.0) {
      if (x < -kNegativeClamp) {
        std::ostringstream os;
        os << "ProbVector: entry " << i << " = " << x << " is negative";
        throw InvalidArgument(os.str());
      }
      x = 0.0;
    }
  }
  if (normalized_) {
    const double sum = total();
    if (std::abs(sum - 1.0) > kNormalizationTol) {
      std::ostringstream os;
      os.precision(17);
      os << "ProbVector: flagged normalized but sums to " << sum;
      throw InvalidArgument(os.str());
    }
  }
}

double ProbVector::total() const noexcept {
  return std::accumulate(entries_.begin(), entries_.end(), 0.0);
}

ProbVector sort_desc(const ProbVector& p) {
  std::vector<double> v(p.values());
  std::stable_sort(v.begin(), v.end(), std::greater<>());
  return ProbVector(std::move(v), p.normalized());
}

ProbVector zero_pad(const ProbVector& p, std::size_t n) {
  if (p.size() >= n) return p;
  std::vector<double> v(p.values());
  v.resize(n, 0.0);
  return ProbVector(std::move(v), p.normalized());
}

MajorizationVerdict is_majorized(const ProbVector& a, const ProbVector& b, double tol) {
  const std::size_t n = std::max(a.size(), b.size());
  const ProbVector as = sort_desc(zero_pad(a, n));
  const ProbVector bs = sort_desc(zero_pad(b, n));

  MajorizationVerdict verdict;
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    lhs += as[k];
    rhs += bs[k];
    if (!verdict.first_violation && lhs > rhs + tol) {
      verdict.first_violation = PrefixViolation{k + 1, lhs, rhs};
    }
  }
  verdict.sums_equal = std::abs(lhs - rhs) <= tol;
  verdict.holds = verdict.sums_equal && !verdict.first_violation;
  return verdict;
}

double shannon_entropy(const ProbVector& p) {
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p[i];
    if (p.normalized() && x > 1.0 + kNormalizationTol) {
      std::ostringstream os;
      os << "shannon_entropy: entry " << i << " = " << x << " exceeds 1";
      throw InvalidArgument(os.str());
    }
    if (x < kLogFloor) continue;
    h -= x * std::log2(x);
  }
  return h;
}

ProbVector tail_group(const ProbVector& c, std::size_t n) {
  if (n < 1 || n > c.size()) {
    std::ostringstream os;
    os << "tail_group: N = " << n << " outside [1, " << c.size() << "]";
    throw InvalidArgument(os.str());
  }
  std::vector<double> out(c.values().begin(), c.values().begin() + static_cast<std::ptrdiff_t>(n));
  out.push_back(std::accumulate(c.values().begin() + static_cast<std::ptrdiff_t>(n), c.values().end(), 0.0));
  return ProbVector(std::move(out), c.normalized());
}

ProbVector random_simplex(std::size_t d, Rng& rng) {
  if (d == 0) throw InvalidArgument("random_simplex: d must be at least 1");
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(d);
  for (double& x : v) x = expo(rng);
  const double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= sum;
  return ProbVector(std::move(v), true);
}

std::pair<ProbVector, ProbVector> random_majorized_pair(std::size_t d, Rng& rng) {
  if (d == 0) throw InvalidArgument("random_majorized_pair: d must be at least 1");
  if (d == 1) return {ProbVector({1.0}, true), ProbVector({1.0}, true)};

  ProbVector b = random_simplex(d, rng);
  std::uniform_int_distribution<std::size_t> count_dist(1, d + 1);
  const std::size_t terms = count_dist(rng);
  const ProbVector weights = random_simplex(terms, rng);

  std::vector<std::size_t> perm(d);
  std::vector<double> a(d, 0.0);
  for (std::size_t k = 0; k < terms; ++k) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < d; ++i) a[i] += weights[k] * b[perm[i]];
  }
  return {ProbVector(std::move(a), true), std::move(b)};
}

}  // namespace majent
