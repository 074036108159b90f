#pragma once

// Brute-force ground truth in a truncated two-mode Fock space.
//
// Basis states |n_a, n_b⟩ with 0 ≤ n_i ≤ n_max are flattened as
// index = n_a·(n_max+1) + n_b. Amplitudes are the exact amplitudes of the
// untruncated state restricted to the box, so the squared norm falls short of
// 1 by the truncation leakage.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "su11/bound.hpp"
#include "su11/gaussian.hpp"
#include "su11/parallel.hpp"

namespace su11::fock {

using Complex = std::complex<double>;

inline constexpr double kMaxLeakage = 1e-8;
inline constexpr double kMaxTraceDeficit = 1e-6;
inline constexpr double kSldEigenFloor = 1e-12;

struct FockVector {
  int n_max = 0;
  std::vector<Complex> amps;

  int dim_per_mode() const noexcept { return n_max + 1; }
  std::size_t index(int na, int nb) const noexcept {
    return static_cast<std::size_t>(na) * static_cast<std::size_t>(n_max + 1) +
           static_cast<std::size_t>(nb);
  }
  Complex at(int na, int nb) const { return amps[index(na, nb)]; }
  double norm_squared() const;
  double leakage() const { return 1.0 - norm_squared(); }
};

struct FockDensityMatrix {
  int n_max = 0;
  Eigen::MatrixXcd rho;

  int dim_per_mode() const noexcept { return n_max + 1; }
  double trace() const { return rho.diagonal().real().sum(); }
  double trace_deficit() const { return 1.0 - trace(); }
};

/// |n_a, n_b⟩.
FockVector number_state(int n_max, int na, int nb);

/// Two-mode squeezer applied to |α⟩⊗|0,ς⟩ via the disentangled form
/// exp(τK₊)·cosh(g)^{−(n_a+n_b+1)}·exp(−τ*K₋), τ = e^{iθ_p}tanh g.
/// No leakage check.
FockVector build_state_unchecked(const InputSpec& spec, const PumpSpec& pump, int n_max);

/// As above; throws TruncationOverflow when the leakage is ≥ 1e-8.
FockVector build_state(const InputSpec& spec, const PumpSpec& pump, int n_max);

/// Multiplies amps(n_a, n_b) by e^{i(φ_a n_a + φ_b n_b)}.
FockVector apply_phase(const FockVector& state, double phi_a, double phi_b);
FockDensityMatrix apply_phase(const FockDensityMatrix& state, double phi_a, double phi_b);

FockDensityMatrix to_density(const FockVector& state);

/// Beam-splitter loss, ρ → Σ Λ_{l_a l_b} ρ Λ†_{l_a l_b}. The parallel path
/// applies the two single-mode channels one after the other; the serial path
/// is the direct double Kraus sum and serves as the reference.
FockDensityMatrix loss_channel(const FockDensityMatrix& rho, double eta_a, double eta_b,
                               Execution exec = Execution::kParallel);

/// ρ_{(m_a,m_b),(n_a,n_b)} ·= exp(−β_a²(m_a−n_a)² − β_b²(m_b−n_b)²).
FockDensityMatrix dephase_channel(const FockDensityMatrix& rho, double beta_a, double beta_b,
                                  Execution exec = Execution::kParallel);

/// Single-arm dephasing factor exp(−β²Δn²) from the overlap of the mirror
/// coherent states |i√2βm⟩ and |i√2βn⟩.
double dephasing_factor(double beta, int delta_n);

/// Expectation values in the number basis, normalized by the norm / trace.
PhotonMoments exact_moments(const FockVector& state);
PhotonMoments exact_moments(const FockDensityMatrix& state);

/// Var(n_a + n_b) = 4·Var(K_z) of the normalized state.
double pure_qfi(const FockVector& state);

/// 8(1 − |⟨ψ|e^{iδK_z}|ψ⟩|)/δ², the fidelity route to the pure-state QFI.
double fidelity_qfi(const FockVector& state, double step = 1e-4);

/// Exact QFI for the phase sum φ (balanced split φ_a = φ_b = φ/2) via the
/// symmetric logarithmic derivative. Eigen-pairs with λ_i + λ_j ≤ 1e-12 are
/// dropped. The state is renormalized by its trace; throws IllConditioned
/// when the trace deficit exceeds 1e-6.
double mixed_qfi(const FockDensityMatrix& rho);

/// C_Q = 4(⟨H₁⟩ − ⟨H₂⟩²) by explicit sums over the loss Kraus operators
/// acting on the state, with the mirror environment in its ground state.
/// Throws TruncationOverflow when the state's leakage is ≥ 1e-8.
double kraus_cq_check(const FockVector& state, const NoiseParams& noise,
                      const VariationalParams& v);

/// |ψ⟩⟨ψ| → loss → dephasing, without renormalization.
FockDensityMatrix noisy_density(const FockVector& state, const NoiseParams& noise,
                                Execution exec = Execution::kParallel);

}  // namespace su11::fock
