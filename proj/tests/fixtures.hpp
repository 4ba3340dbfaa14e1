#pragma once

// Channel and state generators shared by the qchan unit tests and the
// acceptance run.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "majent/densop.hpp"
#include "majent/qchan.hpp"

namespace fixture {

using majent::Complex;
using majent::ComplexMatrix;
using majent::KrausChannel;
using majent::Rng;

inline std::vector<double> random_weights(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = e(rng) + 1e-3);
  for (auto& x : w) x /= total;
  return w;
}

/// Σ w_k U_k ρ U_k* for `terms` Haar unitaries.
inline KrausChannel random_mixed_unitary(std::size_t d, std::size_t terms, Rng& rng) {
  const auto w = random_weights(terms, rng);
  std::vector<ComplexMatrix> kraus;
  for (double x : w) kraus.push_back(std::sqrt(x) * majent::random_unitary(d, rng));
  return KrausChannel(std::move(kraus));
}

/// (1-p)·ρ + p·diag(ρ).
inline KrausChannel dephasing(std::size_t d, double p) {
  std::vector<ComplexMatrix> kraus{std::sqrt(1.0 - p) * ComplexMatrix::Identity(d, d)};
  for (std::size_t i = 0; i < d; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(i, i) = std::sqrt(p);
    kraus.push_back(e);
  }
  return KrausChannel(std::move(kraus));
}

/// Clock-and-shift operators X^a Z^b, a, b < d.
inline std::vector<ComplexMatrix> weyl_operators(std::size_t d) {
  const double n = static_cast<double>(d);
  std::vector<ComplexMatrix> out;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      ComplexMatrix w = ComplexMatrix::Zero(d, d);
      for (std::size_t j = 0; j < d; ++j) {
        w((j + a) % d, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(b * j) / n);
      }
      out.push_back(w);
    }
  }
  return out;
}

/// (1-p)·ρ + p·I/d.
inline KrausChannel depolarizing(std::size_t d, double p) {
  const double n = static_cast<double>(d);
  std::vector<ComplexMatrix> kraus{std::sqrt(1.0 - p) * ComplexMatrix::Identity(d, d)};
  for (const auto& w : weyl_operators(d)) kraus.push_back(std::sqrt(p) / n * w);
  return KrausChannel(std::move(kraus));
}

inline ComplexMatrix random_isometry(std::size_t d_in, std::size_t d_out, Rng& rng) {
  return majent::random_unitary(d_out, rng).leftCols(static_cast<Eigen::Index>(d_in));
}

/// {c_k e^{iθ_k} V}: an isometric conjugation written with redundant terms.
inline KrausChannel phase_multiples(const ComplexMatrix& v, std::size_t terms, Rng& rng) {
  const auto w = random_weights(terms, rng);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<ComplexMatrix> kraus;
  for (double x : w) kraus.push_back(std::polar(std::sqrt(x), angle(rng)) * v);
  return KrausChannel(std::move(kraus));
}

/// Matrix S of X ↦ Σ A X A* acting on column-major vec(X).
inline ComplexMatrix superoperator(const KrausChannel& phi) {
  const auto n = static_cast<Eigen::Index>(phi.d_in());
  const auto m = static_cast<Eigen::Index>(phi.d_out());
  ComplexMatrix s = ComplexMatrix::Zero(m * m, n * n);
  for (const auto& a : phi.kraus()) {
    const ComplexMatrix ac = a.conjugate();
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        s.block(i * m, j * n, m, n) += ac(i, j) * a;
      }
    }
  }
  return s;
}

/// Hermitian basis of {X : Φ(X) = X}, from the numerical nullspace of S - I.
inline std::vector<ComplexMatrix> fixed_point_basis(const KrausChannel& phi, double cutoff = 1e-9) {
  const auto d = static_cast<Eigen::Index>(phi.d_in());
  const ComplexMatrix s = superoperator(phi) - ComplexMatrix::Identity(d * d, d * d);
  Eigen::JacobiSVD<ComplexMatrix> svd(s, Eigen::ComputeFullV);
  std::vector<ComplexMatrix> out;
  const auto& sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cutoff) continue;
    const ComplexMatrix x = Eigen::Map<const ComplexMatrix>(svd.matrixV().col(k).data(), d, d);
    // The fixed-point set of a Kraus map is closed under adjoints, so both
    // Hermitian parts are again fixed points.
    const ComplexMatrix re = 0.5 * (x + x.adjoint());
    const ComplexMatrix im = Complex(0.0, -0.5) * (x - x.adjoint());
    if (re.norm() > 1e-6) out.push_back(re / re.norm());
    if (im.norm() > 1e-6) out.push_back(im / im.norm());
  }
  return out;
}

}  // namespace fixture
