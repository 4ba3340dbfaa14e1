#pragma once

// Density matrices and the spectral quantities built on them.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>

#include "majent/seqmaj.hpp"

namespace majent {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kStateTol = 1e-9;
inline constexpr double kSpectrumDrift = 1e-8;
inline constexpr double kFullRankThreshold = 1e-9;

/// Hermitian, positive semidefinite, unit trace. Validation tolerances default
/// to 1e-9; channel outputs are admitted with a looser tolerance by the
/// callers that produce them. The stored matrix is the Hermitian part of the
/// input.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m, double tol = kStateTol);

  static DensityMatrix maximally_mixed(std::size_t d);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }

 private:
  ComplexMatrix m_;
};

/// Eigenvalues in non-increasing order, eigenvectors as the columns of a
/// unitary matrix. For a general Hermitian input eigenvalues may be negative.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  ComplexMatrix eigenvectors;

  ComplexMatrix reconstruct() const;
};

/// Max-entry Hermiticity deviation and the entry pair attaining it.
struct HermitianDeviation {
  double deviation = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
};
HermitianDeviation hermitian_deviation(const ComplexMatrix& m);

SpectralDecomposition eig_hermitian(const ComplexMatrix& h, double tol = kHermitianTol);

/// Clamped to [0,1], sorted descending. Throws InvalidState when clamping
/// shifts the total by more than 1e-8.
ProbVector spectrum(const DensityMatrix& rho);

/// S(ρ) = H(λ(ρ)) in bits.
double von_neumann_entropy(const DensityMatrix& rho);

MajorizationVerdict state_majorized(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                    double tol = kDefaultMajorizationTol);

/// ‖ρ₁ - ρ₂‖₁, the sum of absolute eigenvalues of the difference.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);
double trace_norm_hermitian(const ComplexMatrix& h);

/// Sum of the k largest eigenvalues of a Hermitian matrix.
double ky_fan_sum(const ComplexMatrix& a, std::size_t k);

/// Nonzero spectra (entries > tol) agree as sorted multisets within tol.
bool l1_equivalent(const DensityMatrix& rho1, const DensityMatrix& rho2, double tol = 1e-9);

/// x⊗x for a unit vector x.
DensityMatrix pure_state(const ComplexVector& x);

/// Smallest eigenvalue above 1e-9.
bool is_full_rank(const DensityMatrix& rho);

/// Haar-random unitary via QR of a complex Gaussian matrix with the phases of
/// R's diagonal removed.
ComplexMatrix random_unitary(std::size_t d, Rng& rng);
Eigen::MatrixXd random_orthogonal(std::size_t d, Rng& rng);
ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng);

/// Random state with the given spectrum (zero-padded to d), or a flat-simplex
/// spectrum when none is given. A uniform full-length spectrum yields exactly
/// the maximally mixed state.
DensityMatrix random_density(std::size_t d, Rng& rng, const std::optional<ProbVector>& spec = std::nullopt);

}  // namespace majent
