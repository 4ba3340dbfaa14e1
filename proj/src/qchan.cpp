#include "majent/qchan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "majent/errors.hpp"

namespace majent {

namespace {

// Channel outputs are admitted as states at this looser tolerance.
constexpr double kOutputStateTol = 1e-7;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_unitary(const ComplexMatrix& w, const char* who) {
  if (w.rows() != w.cols() || w.rows() == 0) {
    std::ostringstream os;
    os << who << ": basis must be square, got " << w.rows() << "x" << w.cols();
    throw NotUnitary(os.str());
  }
  const double dev = max_abs(w.adjoint() * w - ComplexMatrix::Identity(w.rows(), w.cols()));
  if (!(dev <= 1e-9)) {
    std::ostringstream os;
    os << who << ": basis deviates from unitary by " << dev;
    throw NotUnitary(os.str());
  }
}

void require_majorized_states(const DensityMatrix& rho1, const DensityMatrix& rho2, const char* who) {
  if (rho1.dimension() != rho2.dimension()) {
    std::ostringstream os;
    os << who << ": states have dimensions " << rho1.dimension() << " and " << rho2.dimension();
    throw DimensionMismatch(os.str());
  }
  const MajorizationVerdict v = state_majorized(rho1, rho2, kDefaultMajorizationTol);
  if (v.holds) return;
  std::ostringstream os;
  os << who << ": spectrum of rho1 is not majorized by spectrum of rho2";
  if (v.first_violation) {
    os << " (prefix k=" << v.first_violation->k << ")";
    throw MajorizationFailed(os.str(), v.first_violation->k, v.first_violation->lhs, v.first_violation->rhs);
  }
  throw MajorizationFailed(os.str(), 0, 0.0, 0.0);
}

// Clamped descending eigenvalues with the matching eigenvector columns.
struct StateEigensystem {
  ProbVector eigenvalues;
  ComplexMatrix eigenvectors;
};

StateEigensystem state_eigensystem(const DensityMatrix& rho) {
  SpectralDecomposition sd = eig_hermitian(rho.matrix());
  std::vector<double> lam(static_cast<std::size_t>(sd.eigenvalues.size()));
  double total = 0.0;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    lam[i] = std::clamp(sd.eigenvalues(idx(i)), 0.0, 1.0);
    total += lam[i];
  }
  if (std::abs(total - 1.0) > kSpectrumDrift) throw InvalidState("state eigenvalues drift from unit total");
  return {ProbVector(std::move(lam), std::abs(total - 1.0) <= kNormalizationTol), std::move(sd.eigenvectors)};
}

Complex root_of_unity(std::size_t power, std::size_t n) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(power % n) / static_cast<double>(n);
  return std::polar(1.0, angle);
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw InvalidArgument("KrausChannel: at least one Kraus operator is required");
  d_out_ = static_cast<std::size_t>(kraus_.front().rows());
  d_in_ = static_cast<std::size_t>(kraus_.front().cols());
  if (d_in_ == 0 || d_out_ == 0) throw DimensionMismatch("KrausChannel: empty Kraus operator");
  for (std::size_t i = 0; i < kraus_.size(); ++i) {
    const auto& a = kraus_[i];
    if (static_cast<std::size_t>(a.rows()) != d_out_ || static_cast<std::size_t>(a.cols()) != d_in_) {
      std::ostringstream os;
      os << "KrausChannel: operator " << i << " is " << a.rows() << "x" << a.cols() << ", expected " << d_out_
         << "x" << d_in_;
      throw DimensionMismatch(os.str());
    }
    if (!a.allFinite()) {
      std::ostringstream os;
      os << "KrausChannel: operator " << i << " has non-finite entries";
      throw InvalidArgument(os.str());
    }
  }
  flags_.trace_preserving = completeness_deviation() <= kChannelTol;
  flags_.unital = unitality_deviation() <= kChannelTol;
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> kraus, ChannelFlags declared)
    : KrausChannel(std::move(kraus)) {
  if (declared.trace_preserving && !flags_.trace_preserving) {
    std::ostringstream os;
    os << "KrausChannel: declared trace-preserving but Σ A*A deviates from I by " << completeness_deviation();
    throw NotTracePreserving(os.str());
  }
  if (declared.unital && !flags_.unital) {
    std::ostringstream os;
    os << "KrausChannel: declared unital but Σ AA* deviates from I by " << unitality_deviation();
    throw NotUnital(os.str());
  }
  flags_ = declared;
}

double KrausChannel::completeness_deviation() const {
  ComplexMatrix sum = ComplexMatrix::Zero(idx(d_in_), idx(d_in_));
  for (const auto& a : kraus_) sum.noalias() += a.adjoint() * a;
  return max_abs(sum - ComplexMatrix::Identity(idx(d_in_), idx(d_in_)));
}

double KrausChannel::unitality_deviation() const {
  if (d_in_ != d_out_) return std::numeric_limits<double>::infinity();
  ComplexMatrix sum = ComplexMatrix::Zero(idx(d_out_), idx(d_out_));
  for (const auto& a : kraus_) sum.noalias() += a * a.adjoint();
  return max_abs(sum - ComplexMatrix::Identity(idx(d_out_), idx(d_out_)));
}

LinearMap as_linear_map(const KrausChannel& phi) {
  return {phi.d_in(), phi.d_out(), [phi](const ComplexMatrix& x) { return apply_map(phi, x); }};
}

ComplexMatrix apply_map(const KrausChannel& phi, const ComplexMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != phi.d_in() || static_cast<std::size_t>(x.cols()) != phi.d_in()) {
    std::ostringstream os;
    os << "apply: input is " << x.rows() << "x" << x.cols() << ", channel expects " << phi.d_in() << "x"
       << phi.d_in();
    throw DimensionMismatch(os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(idx(phi.d_out()), idx(phi.d_out()));
  for (const auto& a : phi.kraus()) out.noalias() += a * x * a.adjoint();
  return out;
}

DensityMatrix apply(const KrausChannel& phi, const DensityMatrix& rho) {
  if (!phi.flags().trace_preserving) throw NotTracePreserving("apply: channel is not trace-preserving");
  return DensityMatrix(apply_map(phi, rho.matrix()), kOutputStateTol);
}

ComplexMatrix adjoint_apply(const KrausChannel& phi, const ComplexMatrix& x) {
  if (static_cast<std::size_t>(x.rows()) != phi.d_out() || static_cast<std::size_t>(x.cols()) != phi.d_out()) {
    std::ostringstream os;
    os << "adjoint_apply: input is " << x.rows() << "x" << x.cols() << ", channel output space is "
       << phi.d_out() << "x" << phi.d_out();
    throw DimensionMismatch(os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(idx(phi.d_in()), idx(phi.d_in()));
  for (const auto& a : phi.kraus()) out.noalias() += a.adjoint() * x * a;
  return out;
}

ComplexMatrix choi_matrix(const LinearMap& phi) {
  const auto din = idx(phi.d_in);
  const auto dout = idx(phi.d_out);
  ComplexMatrix choi = ComplexMatrix::Zero(din * dout, din * dout);
  ComplexMatrix unit = ComplexMatrix::Zero(din, din);
  for (Eigen::Index i = 0; i < din; ++i) {
    for (Eigen::Index j = 0; j < din; ++j) {
      unit(i, j) = 1.0;
      choi.block(i * dout, j * dout, dout, dout) = phi.map(unit);
      unit(i, j) = 0.0;
    }
  }
  return choi;
}

StructureReport structure_checks(const LinearMap& phi) {
  StructureReport report;
  const auto din = idx(phi.d_in);
  const ComplexMatrix choi = choi_matrix(phi);

  // tr Φ(E_ij) = δ_ij, read off the diagonal blocks' traces.
  const auto dout = idx(phi.d_out);
  double tp_dev = 0.0;
  for (Eigen::Index i = 0; i < din; ++i) {
    for (Eigen::Index j = 0; j < din; ++j) {
      const Complex tr = choi.block(i * dout, j * dout, dout, dout).trace();
      tp_dev = std::max(tp_dev, std::abs(tr - Complex(i == j ? 1.0 : 0.0)));
    }
  }
  report.trace_preserving_deviation = tp_dev;
  report.trace_preserving = tp_dev <= kChannelTol;

  if (phi.d_in == phi.d_out) {
    const ComplexMatrix id = ComplexMatrix::Identity(din, din);
    report.unital_deviation = max_abs(phi.map(id) - id);
  } else {
    report.unital_deviation = std::numeric_limits<double>::infinity();
  }
  report.unital = report.unital_deviation <= kChannelTol;

  const HermitianDeviation herm = hermitian_deviation(choi);
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(0.5 * (choi + choi.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
  report.min_choi_eigenvalue = ev.minCoeff();
  report.completely_positive = herm.deviation <= kChoiPsdTol && report.min_choi_eigenvalue >= -kChoiPsdTol;
  return report;
}

StructureReport structure_checks(const KrausChannel& phi) { return structure_checks(as_linear_map(phi)); }

KrausChannel pinching_channel(const ComplexMatrix& basis) {
  require_unitary(basis, "pinching_channel");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index i = 0; i < basis.cols(); ++i) kraus.emplace_back(basis.col(i) * basis.col(i).adjoint());
  return KrausChannel(std::move(kraus), {true, true});
}

KrausChannel phase_averaging_channel(std::size_t n, std::size_t d) {
  if (n < 1 || n > d) {
    std::ostringstream os;
    os << "phase_averaging_channel: n = " << n << " outside [1, " << d << "]";
    throw InvalidArgument(os.str());
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    ComplexMatrix uk = ComplexMatrix::Identity(idx(d), idx(d));
    // U = diag(ω, ω², ..., ωⁿ, 1, ..., 1), so (U^k)_jj = ω^{(j+1)k} for j < n.
    for (std::size_t j = 0; j < n; ++j) uk(idx(j), idx(j)) = root_of_unity((j + 1) * k, n);
    kraus.push_back(scale * uk);
  }
  return KrausChannel(std::move(kraus), {true, true});
}

KrausChannel phase_averaging_channel(std::size_t n, const ComplexMatrix& basis) {
  require_unitary(basis, "phase_averaging_channel");
  const KrausChannel diag = phase_averaging_channel(n, static_cast<std::size_t>(basis.rows()));
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(diag.kraus().size());
  for (const auto& a : diag.kraus()) kraus.emplace_back(basis * a * basis.adjoint());
  return KrausChannel(std::move(kraus), {true, true});
}

std::vector<ConvergenceRow> pinch_convergence_experiment(const DensityMatrix& rho2, const ComplexMatrix& basis) {
  require_unitary(basis, "pinch_convergence_experiment");
  if (static_cast<std::size_t>(basis.rows()) != rho2.dimension()) {
    throw DimensionMismatch("pinch_convergence_experiment: basis and state dimensions differ");
  }
  const std::size_t d = rho2.dimension();
  const KrausChannel pinch = pinching_channel(basis);
  const DensityMatrix pinched = apply(pinch, rho2);
  const ComplexMatrix in_basis = basis.adjoint() * rho2.matrix() * basis;

  std::vector<ConvergenceRow> table;
  table.reserve(d);
  for (std::size_t n = 1; n <= d; ++n) {
    const DensityMatrix averaged = apply(phase_averaging_channel(n, basis), rho2);
    double tail = 0.0;
    for (std::size_t i = n - 1; i < d; ++i) tail += in_basis(idx(i), idx(i)).real();
    table.push_back({n, trace_distance(averaged, pinched), 2.0 * tail});
  }
  return table;
}

KrausChannel uhlmann_channel(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require_majorized_states(rho1, rho2, "uhlmann_channel");
  const StateEigensystem target = state_eigensystem(rho1);
  const StateEigensystem source = state_eigensystem(rho2);
  const OrthogonalMatrix rot = schur_horn_orthogonal(target.eigenvalues, source.eigenvalues);

  // e_i = Y·(row i of O) so that <ρ₂ e_i, e_i> = Σ_j O_ij² λ_j(ρ₂) = λ_i(ρ₁).
  const ComplexMatrix rotated = source.eigenvectors * rot.matrix().transpose().cast<Complex>();
  const ComplexMatrix& f = target.eigenvectors;
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(rho1.dimension());
  for (Eigen::Index i = 0; i < rotated.cols(); ++i) kraus.emplace_back(f.col(i) * rotated.col(i).adjoint());
  return KrausChannel(std::move(kraus), {true, true});
}

ComplexMatrix MixedUnitary::apply(const ComplexMatrix& x) const {
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < weights.size(); ++i) out.noalias() += weights[i] * (unitaries[i] * x * unitaries[i].adjoint());
  return out;
}

KrausChannel MixedUnitary::to_channel() const {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) kraus.emplace_back(std::sqrt(weights[i]) * unitaries[i]);
  return KrausChannel(std::move(kraus));
}

MixedUnitary mixed_unitary_uhlmann(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  require_majorized_states(rho1, rho2, "mixed_unitary_uhlmann");
  const StateEigensystem target = state_eigensystem(rho1);
  const StateEigensystem source = state_eigensystem(rho2);
  const DoublyStochasticMatrix q = orthostochastic_of(schur_horn_orthogonal(target.eigenvalues, source.eigenvalues));
  const BirkhoffDecomposition birkhoff = birkhoff_decompose(q, 1e-12);

  MixedUnitary out;
  const ComplexMatrix y_adj = source.eigenvectors.adjoint();
  for (const auto& term : birkhoff.terms) {
    out.weights.push_back(term.weight);
    out.unitaries.push_back(target.eigenvectors * permutation_matrix(term.perm).cast<Complex>() * y_adj);
  }
  return out;
}

ComplexMatrix fix_global_phase(const ComplexMatrix& v) {
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double mag = std::abs(v(i, j));
      if (mag > 1e-8) return v * (std::conj(v(i, j)) / mag);
    }
  }
  return v;
}

IsometryReport detect_isometry(const KrausChannel& phi, double tol) {
  if (!phi.flags().trace_preserving) throw NotTracePreserving("detect_isometry: channel is not trace-preserving");
  const auto& kraus = phi.kraus();
  const std::size_t count = kraus.size();
  const auto din = idx(phi.d_in());
  const ComplexMatrix id = ComplexMatrix::Identity(din, din);

  IsometryReport report;
  ComplexMatrix gram(idx(count), idx(count));
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      const ComplexMatrix prod = kraus[j].adjoint() * kraus[i];
      const Complex lambda = prod.trace() / static_cast<double>(din);
      gram(idx(j), idx(i)) = lambda;
      const double dev = max_abs(prod - lambda * id);
      if (!(dev <= tol) && !report.failure_witness) report.failure_witness = IsometryWitness{i, j, dev};
    }
  }
  report.gram = gram;
  if (report.failure_witness) return report;

  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      const double lhs = std::norm(gram(idx(i), idx(j)));
      const double rhs = gram(idx(i), idx(i)).real() * gram(idx(j), idx(j)).real();
      const double dev = std::abs(lhs - rhs);
      if (!(dev <= tol)) {
        report.failure_witness = IsometryWitness{i, j, dev};
        return report;
      }
    }
  }
  const double trace = gram.diagonal().real().sum();
  if (!(std::abs(trace - 1.0) <= tol)) {
    report.failure_witness = IsometryWitness{0, 0, std::abs(trace - 1.0)};
    return report;
  }

  Eigen::Index k = 0;
  gram.diagonal().real().maxCoeff(&k);
  const double lkk = gram(k, k).real();
  const ComplexMatrix v = fix_global_phase(kraus[static_cast<std::size_t>(k)] / std::sqrt(lkk));
  const double iso_dev = max_abs(v.adjoint() * v - id);
  if (!(iso_dev <= tol)) {
    report.failure_witness = IsometryWitness{static_cast<std::size_t>(k), static_cast<std::size_t>(k), iso_dev};
    return report;
  }

  // Φ(E_ab) - V E_ab V* = Σ_i A_i[:,a] A_i[:,b]* - V[:,a] V[:,b]*.
  double residual = 0.0;
  for (Eigen::Index a = 0; a < din; ++a) {
    for (Eigen::Index b = 0; b < din; ++b) {
      ComplexMatrix diff = -(v.col(a) * v.col(b).adjoint());
      for (const auto& op : kraus) diff.noalias() += op.col(a) * op.col(b).adjoint();
      residual = std::max(residual, max_abs(diff));
    }
  }
  report.isometry = v;
  report.conjugation_residual = residual;
  if (!(residual <= 10.0 * tol)) {
    report.failure_witness = IsometryWitness{static_cast<std::size_t>(k), static_cast<std::size_t>(k), residual};
    return report;
  }
  report.is_isometric_conjugation = true;
  return report;
}

DensityMatrix probe_state(std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(d, rng);
}

ProbeResult entropy_probe(const KrausChannel& phi, std::size_t trials, std::size_t d, Rng& rng) {
  if (d != phi.d_in()) {
    std::ostringstream os;
    os << "entropy_probe: d = " << d << " but channel input dimension is " << phi.d_in();
    throw DimensionMismatch(os.str());
  }
  ProbeResult result;
  bool first = true;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = rng();
    const DensityMatrix rho = probe_state(d, seed);
    const double dev = std::abs(von_neumann_entropy(apply(phi, rho)) - von_neumann_entropy(rho));
    if (first || dev > result.max_deviation || (dev == result.max_deviation && seed < result.worst_seed)) {
      result = {dev, seed};
      first = false;
    }
  }
  return result;
}

FixedPointReport fixed_point_commutant_check(const KrausChannel& phi, const ComplexMatrix& b, double tol) {
  if (phi.d_in() != phi.d_out()) throw DimensionMismatch("fixed_point_commutant_check: channel must be square");
  const auto d = idx(phi.d_in());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix gap = id - adjoint_apply(phi, id);
  const double smallest =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(0.5 * (gap + gap.adjoint()), Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  if (smallest < -tol) {
    std::ostringstream os;
    os << "fixed_point_commutant_check: Φ†(I) <= I fails (min eigenvalue of I - Φ†(I) is " << smallest << ")";
    throw InvalidArgument(os.str());
  }

  FixedPointReport report;
  report.fixed_point_residual = max_abs(apply_map(phi, b) - b);
  report.is_fixed = report.fixed_point_residual <= tol;
  if (report.is_fixed) {
    for (const auto& a : phi.kraus()) {
      report.max_commutator_norm = std::max(report.max_commutator_norm, max_abs(a * b - b * a));
      const ComplexMatrix a_adj = a.adjoint();
      report.max_commutator_norm = std::max(report.max_commutator_norm, max_abs(a_adj * b - b * a_adj));
    }
  }
  return report;
}

KrausChannel compose(const KrausChannel& psi, const KrausChannel& phi) {
  if (psi.d_in() != phi.d_out()) throw DimensionMismatch("compose: inner output and outer input dimensions differ");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(psi.kraus().size() * phi.kraus().size());
  for (const auto& b : psi.kraus()) {
    for (const auto& a : phi.kraus()) kraus.emplace_back(b * a);
  }
  return KrausChannel(std::move(kraus));
}

}  // namespace majent
