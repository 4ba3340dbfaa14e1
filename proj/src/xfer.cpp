#include "majent/xfer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "majent/errors.hpp"

namespace majent {

namespace {

// Coordinates closer than this are considered settled by the chain builder.
constexpr double kSettleEps = 4.0 * std::numeric_limits<double>::epsilon();

std::pair<ProbVector, ProbVector> sorted_padded(const ProbVector& a, const ProbVector& b) {
  const std::size_t n = std::max(a.size(), b.size());
  return {sort_desc(zero_pad(a, n)), sort_desc(zero_pad(b, n))};
}

void require_majorized(const ProbVector& a, const ProbVector& b, const char* who) {
  const MajorizationVerdict v = is_majorized(a, b, kDefaultMajorizationTol);
  if (v.holds) return;
  std::ostringstream os;
  os.precision(17);
  os << who << ": a is not majorized by b";
  if (v.first_violation) {
    os << " (prefix k=" << v.first_violation->k << ": " << v.first_violation->lhs << " > "
       << v.first_violation->rhs << ")";
    throw MajorizationFailed(os.str(), v.first_violation->k, v.first_violation->lhs,
                             v.first_violation->rhs);
  }
  os << " (totals " << a.total() << " vs " << b.total() << ")";
  throw MajorizationFailed(os.str(), 0, a.total(), b.total());
}

// Kuhn's augmenting-path matching on the bipartite graph rows -> columns.
// Each row's candidate columns are pre-sorted by decreasing weight, which
// steers the matching towards large entries.
class BipartiteMatcher {
 public:
  explicit BipartiteMatcher(const std::vector<std::vector<std::size_t>>& adjacency)
      : adj_(adjacency), col_owner_(adjacency.size(), kNone), seen_(adjacency.size()) {}

  bool perfect(Permutation& row_to_col) {
    const std::size_t n = adj_.size();
    for (std::size_t r = 0; r < n; ++r) {
      std::fill(seen_.begin(), seen_.end(), 0);
      if (!augment(r)) return false;
    }
    row_to_col.assign(n, kNone);
    for (std::size_t c = 0; c < n; ++c) row_to_col[col_owner_[c]] = c;
    return true;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool augment(std::size_t r) {
    for (std::size_t c : adj_[r]) {
      if (seen_[c]) continue;
      seen_[c] = 1;
      if (col_owner_[c] == kNone || augment(col_owner_[c])) {
        col_owner_[c] = r;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  std::vector<std::size_t> col_owner_;
  std::vector<char> seen_;
};

// Smallest entries are tried first so thin entries are retired while the
// residual still carries enough mass to match around them.
bool matching_above(const Eigen::MatrixXd& r, double threshold, Permutation& perm) {
  const auto n = static_cast<std::size_t>(r.rows());
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = adjacency[i];
    for (std::size_t c = 0; c < n; ++c) {
      if (r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) >= threshold) row.push_back(c);
    }
    std::stable_sort(row.begin(), row.end(), [&](std::size_t x, std::size_t y) {
      return r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(x)) <
             r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(y));
    });
  }
  return BipartiteMatcher(adjacency).perfect(perm);
}

void check_doubly_stochastic(const Eigen::MatrixXd& m, double sum_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "doubly stochastic matrix must be square and non-empty, got " << m.rows() << "x" << m.cols();
    throw NotDoublyStochastic(os.str());
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double x = m(i, j);
      if (!std::isfinite(x) || x < -kStochasticEntryTol || x > 1.0 + kStochasticEntryTol) {
        std::ostringstream os;
        os << "entry (" << i << "," << j << ") = " << x << " outside [0,1]";
        throw NotDoublyStochastic(os.str());
      }
    }
  }
  const Eigen::VectorXd rows = m.rowwise().sum();
  const Eigen::VectorXd cols = m.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (std::abs(rows(i) - 1.0) > sum_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "row " << i << " sums to " << rows(i);
      throw NotDoublyStochastic(os.str());
    }
    if (std::abs(cols(i) - 1.0) > sum_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "column " << i << " sums to " << cols(i);
      throw NotDoublyStochastic(os.str());
    }
  }
}

}  // namespace

TTransform::TTransform(std::size_t i_, std::size_t j_, double t_) : i(i_), j(j_), t(t_) {
  if (i == j) throw InvalidArgument("TTransform: indices must differ");
  if (!(t >= 0.0 && t <= 1.0)) {
    std::ostringstream os;
    os << "TTransform: t = " << t << " outside [0,1]";
    throw InvalidArgument(os.str());
  }
}

DoublyStochasticMatrix::DoublyStochasticMatrix(Eigen::MatrixXd entries, double sum_tol)
    : m_(std::move(entries)) {
  check_doubly_stochastic(m_, sum_tol);
}

ProbVector DoublyStochasticMatrix::operator*(const ProbVector& v) const {
  if (v.size() != dimension()) throw DimensionMismatch("DoublyStochasticMatrix * ProbVector: size mismatch");
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.values().data(), static_cast<Eigen::Index>(v.size()));
  const Eigen::VectorXd y = m_ * x;
  return ProbVector(std::vector<double>(y.data(), y.data() + y.size()));
}

OrthogonalMatrix::OrthogonalMatrix(Eigen::MatrixXd entries, double tol) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw NotOrthogonal("orthogonal matrix must be square and non-empty");
  const Eigen::MatrixXd gram = m_.transpose() * m_;
  const double dev = (gram - Eigen::MatrixXd::Identity(m_.rows(), m_.cols())).cwiseAbs().maxCoeff();
  if (!(dev <= tol)) {
    std::ostringstream os;
    os << "UᵀU deviates from identity by " << dev;
    throw NotOrthogonal(os.str());
  }
}

Eigen::MatrixXd permutation_matrix(const Permutation& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)])) = 1.0;
  return p;
}

Eigen::MatrixXd BirkhoffDecomposition::reconstruct() const {
  const auto n = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (const auto& term : terms) {
    for (Eigen::Index i = 0; i < n; ++i) q(i, static_cast<Eigen::Index>(term.perm[static_cast<std::size_t>(i)])) += term.weight;
  }
  return q;
}

TransferChain find_transfer_chain(const ProbVector& a_in, const ProbVector& b_in) {
  auto [a, b] = sorted_padded(a_in, b_in);
  require_majorized(a, b, "find_transfer_chain");

  const std::size_t d = a.size();
  TransferChain chain;
  chain.dimension = d;
  std::vector<double> x(b.values());
  const std::vector<double>& target = a.values();

  // Every step settles coordinate k or l exactly, and a settled coordinate is
  // never picked again, so at most d-1 steps are emitted.
  for (std::size_t guard = 0; guard < d; ++guard) {
    std::size_t k = 0;
    while (k < d && std::abs(x[k] - target[k]) <= kSettleEps) ++k;
    if (k == d || x[k] < target[k]) break;  // done, or a tolerance-level deficit
    std::size_t l = k + 1;
    while (l < d && !(x[l] < target[l] - kSettleEps)) ++l;
    if (l == d) break;

    const double surplus = x[k] - target[k];
    const double deficit = target[l] - x[l];
    const double delta = std::min(surplus, deficit);
    const double t = std::clamp(1.0 - delta / (x[k] - x[l]), 0.0, 1.0);
    chain.steps.emplace_back(k, l, t);
    if (surplus <= deficit) {
      x[k] = target[k];
      x[l] += delta;
    } else {
      x[l] = target[l];
      x[k] -= delta;
    }
  }
  return chain;
}

ProbVector apply_t_transform(const TTransform& step, const ProbVector& v) {
  if (step.i >= v.size() || step.j >= v.size()) {
    std::ostringstream os;
    os << "apply_t_transform: indices (" << step.i << "," << step.j << ") out of range for length " << v.size();
    throw InvalidArgument(os.str());
  }
  std::vector<double> out(v.values());
  const double vi = out[step.i];
  const double vj = out[step.j];
  out[step.i] = step.t * vi + (1.0 - step.t) * vj;
  out[step.j] = (1.0 - step.t) * vi + step.t * vj;
  return ProbVector(std::move(out), false);
}

ProbVector apply_chain(const TransferChain& chain, const ProbVector& v) {
  ProbVector out = v;
  for (const auto& step : chain.steps) out = apply_t_transform(step, out);
  return out;
}

DoublyStochasticMatrix chain_to_doubly_stochastic(const TransferChain& chain) {
  const auto n = static_cast<Eigen::Index>(chain.dimension);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  for (const auto& step : chain.steps) {
    if (step.i >= chain.dimension || step.j >= chain.dimension) {
      throw InvalidArgument("chain_to_doubly_stochastic: step index out of range");
    }
    const auto i = static_cast<Eigen::Index>(step.i);
    const auto j = static_cast<Eigen::Index>(step.j);
    const Eigen::RowVectorXd ri = q.row(i);
    const Eigen::RowVectorXd rj = q.row(j);
    q.row(i) = step.t * ri + (1.0 - step.t) * rj;
    q.row(j) = (1.0 - step.t) * ri + step.t * rj;
  }
  return DoublyStochasticMatrix(std::move(q));
}

BirkhoffDecomposition birkhoff_decompose(const Eigen::MatrixXd& q, double tol) {
  check_doubly_stochastic(q, tol);
  const auto n = static_cast<std::size_t>(q.rows());
  Eigen::MatrixXd residual = q;
  BirkhoffDecomposition out;
  Permutation perm;

  const std::size_t max_terms = (n - 1) * (n - 1) + 1;
  while (residual.maxCoeff() >= tol) {
    if (!matching_above(residual, tol, perm)) {
      // Entries retired below tol unbalance rows by up to (d-1)·tol, so the
      // tail can strand that much mass without a perfect matching.
      if (residual.maxCoeff() < static_cast<double>(std::max<std::size_t>(n, 10)) * tol) break;
      std::ostringstream os;
      os << "birkhoff_decompose: residual support admits no perfect matching (max residual "
         << residual.maxCoeff() << ", " << out.terms.size() << " terms so far)";
      throw MatchingFailed(os.str());
    }
    std::size_t argmin = 0;
    double weight = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < n; ++r) {
      const double v = residual(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(perm[r]));
      if (v < weight) {
        weight = v;
        argmin = r;
      }
    }
    // Matched entries that fall below tol leave the support for good; zero
    // them so the residual never carries dust the matching cannot see.
    for (std::size_t r = 0; r < n; ++r) {
      double& entry = residual(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(perm[r]));
      entry -= weight;
      if (entry < tol) entry = 0.0;
    }
    residual(static_cast<Eigen::Index>(argmin), static_cast<Eigen::Index>(perm[argmin])) = 0.0;
    out.terms.push_back({weight, perm});
    if (out.terms.size() > max_terms) {
      throw MatchingFailed("birkhoff_decompose: term count exceeded (d-1)^2+1");
    }
  }
  return out;
}

double birkhoff_error_bound(std::size_t d, double tol) {
  return static_cast<double>(std::max<std::size_t>(d, 10) + 1) * tol;
}

BirkhoffDecomposition birkhoff_decompose(const DoublyStochasticMatrix& q, double tol) {
  return birkhoff_decompose(q.matrix(), tol);
}

OrthogonalMatrix schur_horn_orthogonal(const ProbVector& a, const ProbVector& b) {
  const TransferChain chain = find_transfer_chain(a, b);
  const auto n = static_cast<Eigen::Index>(chain.dimension);
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(n, n);
  // Each rotation acts on a pair whose entry in the running conjugate
  // U·diag(b↓)·Uᵀ is zero, so the diagonal follows the T-transform exactly.
  for (const auto& step : chain.steps) {
    const double c = std::sqrt(step.t);
    const double s = std::sqrt(1.0 - step.t);
    const auto i = static_cast<Eigen::Index>(step.i);
    const auto j = static_cast<Eigen::Index>(step.j);
    const Eigen::RowVectorXd ri = u.row(i);
    const Eigen::RowVectorXd rj = u.row(j);
    u.row(i) = c * ri - s * rj;
    u.row(j) = s * ri + c * rj;
  }
  return OrthogonalMatrix(std::move(u));
}

DoublyStochasticMatrix orthostochastic_of(const OrthogonalMatrix& u) {
  return DoublyStochasticMatrix(u.matrix().cwiseAbs2());
}

DoublyStochasticMatrix orthostochastic_of(const Eigen::MatrixXd& u) {
  return orthostochastic_of(OrthogonalMatrix(u));
}

}  // namespace majent
