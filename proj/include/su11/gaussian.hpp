#pragma once

// Two-mode Gaussian states for the input of the interferometer and the first
// nonlinear beam splitter.
//
// Conventions:
//   x = (a + a†)/√2, p = (a − a†)/(i√2), vacuum covariance ½·I.
//   Quadrature vector order is (x_a, p_a, x_b, p_b).
//   Squeezing phase 0 squeezes x: Var(x) = ½e^{−2r}.
//   The beam splitter maps a → cosh(g)a + e^{iθ_p} sinh(g) b†.

#include <array>

#include <Eigen/Dense>

namespace su11 {

/// Coherent amplitude on mode a, squeezed vacuum on mode b.
struct InputSpec {
  double alpha_mag = 0.0;
  double alpha_phase = 0.0;
  double squeeze_r = 0.0;
  double squeeze_phase = 0.0;
};

struct PumpSpec {
  double gain_g = 0.0;
  double pump_phase = 0.0;
};

/// Checks the domain and wraps phases into [0, 2π). Throws DomainError.
InputSpec validated(const InputSpec& spec);
PumpSpec validated(const PumpSpec& pump);

/// Input with |α|² = e^{2r}/4 and zero phases, the convention used for the
/// photon-number sweeps.
InputSpec alpha_locked_input(double squeeze_r);

struct GaussianState {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = 0.5 * Eigen::Matrix4d::Identity();
};

/// ⟨n̂_a⟩, ⟨n̂_b⟩, their variances and Cov[n̂_a, n̂_b].
struct PhotonMoments {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  double cov_ab = 0.0;

  double total() const noexcept { return mean_a + mean_b; }
};

GaussianState prepare_input(const InputSpec& spec);
GaussianState apply_nbs(const GaussianState& state, const PumpSpec& pump);

/// Exact fourth-order moments from mean and covariance (Wick expansion).
PhotonMoments photon_moments(const GaussianState& state);

/// prepare_input → apply_nbs → photon_moments.
PhotonMoments moments_after_nbs(const InputSpec& spec, const PumpSpec& pump);

/// The two symplectic eigenvalues of the covariance, ascending.
std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& cov);

/// Symmetric within `tol` and every symplectic eigenvalue ≥ ½ − tol.
bool is_physical(const GaussianState& state, double tol = 1e-9);

/// The 4×4 symplectic form Ω = ⊕ [[0, 1], [−1, 0]].
Eigen::Matrix4d symplectic_form();

}  // namespace su11
