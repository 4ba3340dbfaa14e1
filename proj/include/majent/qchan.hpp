#pragma once

// Quantum channels in Kraus form, the constructive channels that realize
// ρ₁ ≺ ρ₂, and the isometric-conjugation detector.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "majent/densop.hpp"
#include "majent/xfer.hpp"

namespace majent {

inline constexpr double kChannelTol = 1e-8;
inline constexpr double kDefaultIsometryTol = 1e-7;
inline constexpr double kChoiPsdTol = 1e-8;

struct ChannelFlags {
  bool trace_preserving = false;
  bool unital = false;
};

/// X ↦ Σ A_i X A_i*, each A_i a d_out×d_in matrix. Declared flags are
/// verified at 1e-8 on construction (NotTracePreserving / NotUnital).
class KrausChannel {
 public:
  /// Flags are detected from the operators.
  explicit KrausChannel(std::vector<ComplexMatrix> kraus);
  KrausChannel(std::vector<ComplexMatrix> kraus, ChannelFlags declared);

  std::size_t d_in() const noexcept { return d_in_; }
  std::size_t d_out() const noexcept { return d_out_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }
  const ChannelFlags& flags() const noexcept { return flags_; }
  bool bistochastic() const noexcept { return flags_.trace_preserving && flags_.unital; }

  /// max |Σ A_i*A_i - I| and max |Σ A_i A_i* - I| (the latter only when
  /// d_in == d_out; infinity otherwise).
  double completeness_deviation() const;
  double unitality_deviation() const;

 private:
  std::size_t d_in_;
  std::size_t d_out_;
  std::vector<ComplexMatrix> kraus_;
  ChannelFlags flags_;
};

/// A linear map between matrix spaces, for maps that are not given by Kraus
/// operators (e.g. the transpose).
struct LinearMap {
  std::size_t d_in;
  std::size_t d_out;
  std::function<ComplexMatrix(const ComplexMatrix&)> map;
};

LinearMap as_linear_map(const KrausChannel& phi);

/// Σ A_i ρ A_i*. Requires a trace-preserving channel.
DensityMatrix apply(const KrausChannel& phi, const DensityMatrix& rho);
/// The same action on an arbitrary d_in×d_in matrix.
ComplexMatrix apply_map(const KrausChannel& phi, const ComplexMatrix& x);
/// Σ A_i* X A_i.
ComplexMatrix adjoint_apply(const KrausChannel& phi, const ComplexMatrix& x);

struct StructureReport {
  bool trace_preserving = false;
  double trace_preserving_deviation = 0.0;
  bool unital = false;
  double unital_deviation = 0.0;
  bool completely_positive = false;
  double min_choi_eigenvalue = 0.0;
};

/// Choi matrix Σ_ij E_ij ⊗ Φ(E_ij), of size (d_in·d_out)².
ComplexMatrix choi_matrix(const LinearMap& phi);

StructureReport structure_checks(const LinearMap& phi);
StructureReport structure_checks(const KrausChannel& phi);

/// Kraus operators e_i e_i* for the columns of a unitary basis.
KrausChannel pinching_channel(const ComplexMatrix& basis);

/// (1/√n)·U^k, k = 1..n, with U = diag(ω, ω², ..., ωⁿ, 1, ..., 1) of size d
/// and ω = e^{2πi/n}. Optionally conjugated into another basis (W U^k W*).
KrausChannel phase_averaging_channel(std::size_t n, std::size_t d);
KrausChannel phase_averaging_channel(std::size_t n, const ComplexMatrix& basis);

struct ConvergenceRow {
  std::size_t n;
  double trace_distance;
  double bound;
};

/// For n = 1..d: ‖Φ_n(ρ₂) - Φ(ρ₂)‖₁ and 2·tr((I-P_n)ρ₂'(I-P_n)), with ρ₂' the
/// state written in `basis` and P_n the projection onto its first n-1
/// coordinates.
std::vector<ConvergenceRow> pinch_convergence_experiment(const DensityMatrix& rho2, const ComplexMatrix& basis);

/// Bistochastic channel with rank-one Kraus operators f_i e_i* mapping ρ₂ to
/// ρ₁, where {f_i} is the eigenbasis of ρ₁ and {e_i} the eigenbasis of ρ₂
/// rotated by the Schur–Horn orthogonal matrix. Throws MajorizationFailed.
KrausChannel uhlmann_channel(const DensityMatrix& rho1, const DensityMatrix& rho2);

struct MixedUnitary {
  std::vector<double> weights;
  std::vector<ComplexMatrix> unitaries;

  ComplexMatrix apply(const ComplexMatrix& x) const;
  KrausChannel to_channel() const;
};

/// Σ t_π U_π ρ₂ U_π* = ρ₁ with U_π = F·P(π)·Y* from a Birkhoff decomposition
/// of the orthostochastic matrix relating the spectra.
MixedUnitary mixed_unitary_uhlmann(const DensityMatrix& rho1, const DensityMatrix& rho2);

struct IsometryWitness {
  std::size_t i;  // 0-based Kraus indices
  std::size_t j;
  double deviation;
};

struct IsometryReport {
  bool is_isometric_conjugation = false;
  std::optional<ComplexMatrix> isometry;
  std::optional<ComplexMatrix> gram;
  std::optional<IsometryWitness> failure_witness;
  /// max over E_ij of ‖Φ(E_ij) - V E_ij V*‖_max, when V was recovered.
  std::optional<double> conjugation_residual;
};

/// Decides whether Φ(X) = V X V* for an isometry V: every A_j*A_i must be the
/// scalar λ_ji·I (λ_ji = tr(A_j*A_i)/d_in), the Gram matrix (λ_ij) must have
/// rank one (|λ_ij|² = λ_ii λ_jj) with unit trace, and V = A_k/√λ_kk must be
/// an isometry. V is taken from the largest λ_kk and phase-fixed so its first
/// entry of magnitude above 1e-8 (column-major) is real positive.
IsometryReport detect_isometry(const KrausChannel& phi, double tol = kDefaultIsometryTol);

/// Phase convention shared by the detector and its tests.
ComplexMatrix fix_global_phase(const ComplexMatrix& v);

struct ProbeResult {
  double max_deviation = 0.0;
  std::uint64_t worst_seed = 0;
};

/// Samples `trials` random full-rank states of dimension d (one seed drawn
/// from rng per trial) and reports max |S(Φ(ρ)) - S(ρ)|. Ties go to the
/// smallest seed.
ProbeResult entropy_probe(const KrausChannel& phi, std::size_t trials, std::size_t d, Rng& rng);

/// The state a probe trial with `seed` uses.
DensityMatrix probe_state(std::size_t d, std::uint64_t seed);

struct FixedPointReport {
  bool is_fixed = false;
  double fixed_point_residual = 0.0;
  double max_commutator_norm = 0.0;
};

/// Checks Φ(B) = B and, if so, reports max_i of ‖A_i B - B A_i‖ and
/// ‖A_i* B - B A_i*‖. Throws InvalidArgument when Φ†(I) ≤ I fails at tol.
FixedPointReport fixed_point_commutant_check(const KrausChannel& phi, const ComplexMatrix& b, double tol);

/// Composition ψ∘φ (apply φ first).
KrausChannel compose(const KrausChannel& psi, const KrausChannel& phi);

}  // namespace majent
