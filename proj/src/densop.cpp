#include "majent/densop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "majent/errors.hpp"

namespace majent {

namespace {

void require_square(const ComplexMatrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << who << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
}

void require_hermitian(const ComplexMatrix& m, double tol, const char* who) {
  const HermitianDeviation dev = hermitian_deviation(m);
  if (!(dev.deviation <= tol)) {
    std::ostringstream os;
    os << who << ": matrix is not Hermitian, worst entry pair (" << dev.row << "," << dev.col
       << ") deviates by " << dev.deviation;
    throw NotHermitian(os.str(), dev.row, dev.col, dev.deviation);
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Eigenvalues only, non-increasing.
Eigen::VectorXd eigenvalues_desc(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw DomainError("Hermitian eigensolver did not converge");
  return solver.eigenvalues().reverse();
}

}  // namespace

HermitianDeviation hermitian_deviation(const ComplexMatrix& m) {
  HermitianDeviation worst;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      const double dev = std::abs(m(i, j) - std::conj(m(j, i)));
      if (!std::isfinite(dev)) {
        return {std::numeric_limits<double>::infinity(), static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
      }
      if (dev > worst.deviation) worst = {dev, static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
    }
  }
  return worst;
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m, double tol) {
  require_square(m, "DensityMatrix");
  require_hermitian(m, tol, "DensityMatrix");
  m_ = hermitian_part(m);
  const double tr = m_.trace().real();
  if (!(std::abs(tr - 1.0) <= tol)) {
    std::ostringstream os;
    os.precision(17);
    os << "DensityMatrix: trace is " << tr << ", expected 1";
    throw InvalidState(os.str());
  }
  const double smallest = eigenvalues_desc(m_).minCoeff();
  if (!(smallest >= -tol)) {
    std::ostringstream os;
    os << "DensityMatrix: negative eigenvalue " << smallest;
    throw InvalidState(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(d));
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition eig_hermitian(const ComplexMatrix& h, double tol) {
  require_square(h, "eig_hermitian");
  require_hermitian(h, tol, "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) throw DomainError("eig_hermitian: eigensolver did not converge");
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

ProbVector spectrum(const DensityMatrix& rho) {
  const Eigen::VectorXd ev = eigenvalues_desc(rho.matrix());
  std::vector<double> lam(static_cast<std::size_t>(ev.size()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    lam[static_cast<std::size_t>(i)] = std::clamp(ev(i), 0.0, 1.0);
    total += lam[static_cast<std::size_t>(i)];
  }
  const double drift = std::abs(total - 1.0);
  if (drift > kSpectrumDrift) {
    std::ostringstream os;
    os << "spectrum: clamped eigenvalues sum to " << total;
    throw InvalidState(os.str());
  }
  std::stable_sort(lam.begin(), lam.end(), std::greater<>());
  return ProbVector(std::move(lam), drift <= kNormalizationTol);
}

double von_neumann_entropy(const DensityMatrix& rho) { return shannon_entropy(spectrum(rho)); }

MajorizationVerdict state_majorized(const DensityMatrix& rho1, const DensityMatrix& rho2, double tol) {
  return is_majorized(spectrum(rho1), spectrum(rho2), tol);
}

double trace_norm_hermitian(const ComplexMatrix& h) {
  require_square(h, "trace_norm_hermitian");
  return eigenvalues_desc(hermitian_part(h)).cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  if (rho1.dimension() != rho2.dimension()) {
    std::ostringstream os;
    os << "trace_distance: dimensions " << rho1.dimension() << " and " << rho2.dimension() << " differ";
    throw DimensionMismatch(os.str());
  }
  return trace_norm_hermitian(rho1.matrix() - rho2.matrix());
}

double ky_fan_sum(const ComplexMatrix& a, std::size_t k) {
  require_square(a, "ky_fan_sum");
  require_hermitian(a, kHermitianTol, "ky_fan_sum");
  const auto d = static_cast<std::size_t>(a.rows());
  if (k < 1 || k > d) {
    std::ostringstream os;
    os << "ky_fan_sum: k = " << k << " outside [1, " << d << "]";
    throw InvalidArgument(os.str());
  }
  return eigenvalues_desc(hermitian_part(a)).head(static_cast<Eigen::Index>(k)).sum();
}

bool l1_equivalent(const DensityMatrix& rho1, const DensityMatrix& rho2, double tol) {
  auto nonzero = [tol](const ProbVector& p) {
    std::vector<double> out;
    for (double x : p.values()) {
      if (x > tol) out.push_back(x);
    }
    return out;
  };
  const std::vector<double> s1 = nonzero(spectrum(rho1));
  const std::vector<double> s2 = nonzero(spectrum(rho2));
  if (s1.size() != s2.size()) return false;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (std::abs(s1[i] - s2[i]) > tol) return false;
  }
  return true;
}

DensityMatrix pure_state(const ComplexVector& x) {
  const double norm = x.norm();
  if (x.size() == 0 || !(std::abs(norm - 1.0) <= 1e-9)) {
    std::ostringstream os;
    os.precision(17);
    os << "pure_state: vector norm is " << norm;
    throw NotUnitVector(os.str());
  }
  return DensityMatrix(x * x.adjoint());
}

bool is_full_rank(const DensityMatrix& rho) {
  return eigenvalues_desc(rho.matrix()).minCoeff() > kFullRankThreshold;
}

ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix random_unitary(std::size_t d, Rng& rng) {
  if (d == 0) throw InvalidArgument("random_unitary: d must be at least 1");
  const ComplexMatrix g = random_gaussian(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return q;
}

Eigen::MatrixXd random_orthogonal(std::size_t d, Rng& rng) {
  if (d == 0) throw InvalidArgument("random_orthogonal: d must be at least 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

DensityMatrix random_density(std::size_t d, Rng& rng, const std::optional<ProbVector>& spec) {
  if (d == 0) throw InvalidArgument("random_density: d must be at least 1");
  ProbVector lam = spec ? *spec : random_simplex(d, rng);
  if (std::abs(lam.total() - 1.0) > kNormalizationTol || lam.size() > d) {
    throw InvalidArgument("random_density: spectrum must sum to 1 and have length <= d");
  }
  lam = zero_pad(lam, d);
  const auto& v = lam.values();
  if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
    return DensityMatrix::maximally_mixed(d);
  }
  const ComplexMatrix u = random_unitary(d, rng);
  Eigen::VectorXd diag(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) diag(static_cast<Eigen::Index>(i)) = v[i];
  const ComplexMatrix rho = u * diag.cast<Complex>().asDiagonal() * u.adjoint();
  return DensityMatrix(rho);
}

}  // namespace majent
