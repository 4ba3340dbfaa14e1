#pragma once

// Constructive certificates for a ≺ b: T-transform chains, the doubly
// stochastic matrix they compose to, Birkhoff permutation mixtures and the
// Givens-rotation (Schur–Horn) orthogonal matrix.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "majent/seqmaj.hpp"

namespace majent {

/// The doubly stochastic map t·id + (1-t)·swap acting on coordinates i and j.
struct TTransform {
  std::size_t i;
  std::size_t j;
  double t;

  TTransform(std::size_t i, std::size_t j, double t);
};

struct TransferChain {
  std::size_t dimension = 0;
  std::vector<TTransform> steps;
};

inline constexpr double kStochasticEntryTol = 1e-12;
inline constexpr double kStochasticSumTol = 1e-9;
inline constexpr double kOrthogonalTol = 1e-9;

class DoublyStochasticMatrix {
 public:
  /// Throws NotDoublyStochastic unless square, entries in [-1e-12, 1+1e-12]
  /// and all row/column sums within `sum_tol` of 1.
  explicit DoublyStochasticMatrix(Eigen::MatrixXd entries, double sum_tol = kStochasticSumTol);

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  Eigen::VectorXd operator*(const Eigen::VectorXd& v) const { return m_ * v; }
  ProbVector operator*(const ProbVector& v) const;

 private:
  Eigen::MatrixXd m_;
};

class OrthogonalMatrix {
 public:
  /// Throws NotOrthogonal unless UᵀU = I within `tol` entrywise.
  explicit OrthogonalMatrix(Eigen::MatrixXd entries, double tol = kOrthogonalTol);

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }

 private:
  Eigen::MatrixXd m_;
};

/// A permutation maps row index -> column index: P(π)_{i,π(i)} = 1.
using Permutation = std::vector<std::size_t>;

struct BirkhoffTerm {
  double weight;
  Permutation perm;
};

struct BirkhoffDecomposition {
  std::vector<BirkhoffTerm> terms;

  std::size_t dimension() const noexcept { return terms.empty() ? 0 : terms.front().perm.size(); }
  /// Σ t_i P(π_i).
  Eigen::MatrixXd reconstruct() const;
};

Eigen::MatrixXd permutation_matrix(const Permutation& perm);

/// HLP construction of a chain of at most d-1 T-transforms taking b↓ to a↓.
/// Inputs are sorted and zero-padded internally. Throws MajorizationFailed
/// when a ≺ b fails at tolerance 1e-9.
TransferChain find_transfer_chain(const ProbVector& a, const ProbVector& b);

ProbVector apply_t_transform(const TTransform& step, const ProbVector& v);
ProbVector apply_chain(const TransferChain& chain, const ProbVector& v);

/// Product of the elementary matrices, last step leftmost.
DoublyStochasticMatrix chain_to_doubly_stochastic(const TransferChain& chain);

/// Birkhoff–von Neumann decomposition by repeated perfect matching on the
/// support {R_ij >= tol} of the residual. Each weight is at least tol and the
/// reconstruction error is below (max(d, 10) + 1)·tol. Throws NotDoublyStochastic when
/// the raw matrix fails the check at `tol`, MatchingFailed when the residual
/// is still above tolerance but its support admits no perfect matching.
BirkhoffDecomposition birkhoff_decompose(const Eigen::MatrixXd& q, double tol);

/// The reconstruction bound above for a d×d input.
double birkhoff_error_bound(std::size_t d, double tol);
BirkhoffDecomposition birkhoff_decompose(const DoublyStochasticMatrix& q, double tol);

/// Real orthogonal U with diag(U·diag(b↓)·Uᵀ) = a↓, built from one Givens
/// rotation (cos²θ = t) per step of the transfer chain.
OrthogonalMatrix schur_horn_orthogonal(const ProbVector& a, const ProbVector& b);

/// Q_ij = U_ij².
DoublyStochasticMatrix orthostochastic_of(const OrthogonalMatrix& u);
DoublyStochasticMatrix orthostochastic_of(const Eigen::MatrixXd& u);

}  // namespace majent
