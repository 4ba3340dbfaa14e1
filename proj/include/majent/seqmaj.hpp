#pragma once

// Finite probability vectors, the majorization preorder and Shannon entropy.

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace majent {

using Rng = std::mt19937_64;

inline constexpr double kNegativeClamp = 1e-12;
inline constexpr double kNormalizationTol = 1e-9;
inline constexpr double kDefaultMajorizationTol = 1e-9;

/// A finite sequence of non-negative reals. Entries in [-1e-12, 0) are clamped
/// to zero; anything more negative, or non-finite, is rejected. When flagged
/// normalized the entries must sum to 1 within 1e-9.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> entries, bool normalized = false);

  std::span<const double> entries() const noexcept { return entries_; }
  const std::vector<double>& values() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  double operator[](std::size_t i) const { return entries_[i]; }
  bool normalized() const noexcept { return normalized_; }
  double total() const noexcept;

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> entries_;
  bool normalized_;
};

struct PrefixViolation {
  std::size_t k;  // 1-based prefix length
  double lhs;     // Σ_{i≤k} a↓_i
  double rhs;     // Σ_{i≤k} b↓_i
};

struct MajorizationVerdict {
  bool holds = false;
  std::optional<PrefixViolation> first_violation;
  bool sums_equal = false;
};

/// Non-increasing order, stable among ties.
ProbVector sort_desc(const ProbVector& p);

/// Tests a ≺ b. The shorter vector is zero-padded. A mismatch in totals is a
/// negative verdict with sums_equal = false, never an error.
MajorizationVerdict is_majorized(const ProbVector& a, const ProbVector& b,
                                 double tol = kDefaultMajorizationTol);

/// H(p) = -Σ p_i log2 p_i with 0 log 0 = 0. Throws InvalidArgument if p is
/// flagged normalized and some entry exceeds 1 + 1e-9.
double shannon_entropy(const ProbVector& p);

/// (c_1, ..., c_N, Σ_{i>N} c_i). Requires 1 <= N <= d.
ProbVector tail_group(const ProbVector& c, std::size_t n);

/// Samples b from the flat simplex and returns (Q b, b) for Q a random finite
/// mixture of permutation matrices, so a ≺ b by construction.
std::pair<ProbVector, ProbVector> random_majorized_pair(std::size_t d, Rng& rng);

/// Flat-simplex sample of length d (normalized exponentials).
ProbVector random_simplex(std::size_t d, Rng& rng);

/// Pads with zeros up to length n (no-op when already at least n long).
ProbVector zero_pad(const ProbVector& p, std::size_t n);

}  // namespace majent
