#pragma once

// Variational upper bounds on the quantum Fisher information of the
// interferometer under photon loss and phase diffusion.
//
// The objective is
//   C_Q(γ′, λ) = (1+λ)²·Q(γ′) + λ²/(8β_a²) + λ²/(8β_b²)
// with Q the quadratic form in (γ′_a, γ′_b) built from PhotonMoments. Its
// minimum over γ′ is C̃_Q (loss only); the minimum over λ then gives C_φ.

#include <array>
#include <optional>

#include "su11/gaussian.hpp"

namespace su11 {

/// Per-arm transmission η ∈ (0, 1] and diffusion coefficient β ≥ 0.
struct NoiseParams {
  double eta_a = 1.0;
  double eta_b = 1.0;
  double beta_a = 0.0;
  double beta_b = 0.0;

  static NoiseParams symmetric(double eta, double beta) { return {eta, eta, beta, beta}; }
};

/// Throws DomainError on η ∉ (0, 1] or β < 0.
NoiseParams validated(const NoiseParams& noise);

/// γ′_i = 1 + γ_i (γ_i = 0: loss before the phase, −1: after) and the
/// purification rotation λ. Unrestricted reals.
struct VariationalParams {
  double gamma_prime_a = 0.0;
  double gamma_prime_b = 0.0;
  double lambda = 0.0;
};

struct GammaOptimum {
  std::array<double, 2> gamma_prime{};
  double c_tilde = 0.0;
};

/// The T_ij/K_ij/J closed forms taken literally, kept as a cross-check of the exact
/// stationary-point solve. ⟨Δn̂_i⟩ is read as sqrt(⟨Δ²n̂_i⟩).
struct LiteralClosedForm {
  double t_ab = 0.0, t_ba = 0.0;
  double k_ab = 0.0, k_ba = 0.0;
  std::array<double, 2> gamma_prime{};
  /// Cross term 2·T_ab²·T_ba²·Cov, read literally.
  double c_tilde_literal = 0.0;
  /// Cross term 2·T_ab·T_ba·Cov.
  double c_tilde_product = 0.0;
  double lambda_opt = 0.0;
  double c_phi = 0.0;
};

struct ClosedFormAgreement {
  bool gamma_prime = false;
  bool c_tilde_literal = false;
  bool c_tilde_product = false;
  bool c_phi = false;
  double max_rel_gamma = 0.0;
  double rel_c_tilde_literal = 0.0;
  double rel_c_tilde_product = 0.0;
};

struct BoundBreakdown {
  double f_q_lossless = 0.0;
  double c_tilde = 0.0;
  double c_phi = 0.0;
  double lambda_opt = 0.0;
  std::array<double, 2> gamma_opt{};
  double delta_phi = 0.0;
  double diffusion_floor = 0.0;

  // Intermediates: A_i = ⟨n̂_i⟩/⟨Δ²n̂_i⟩, B_i = (1−η_i)/η_i and the
  // correlation coefficient J. NaN where undefined (vacuum arm).
  double a_a = 0.0, a_b = 0.0;
  double b_a = 0.0, b_b = 0.0;
  double j = 0.0;

  std::optional<LiteralClosedForm> literal;
  std::optional<ClosedFormAgreement> agreement;
};

/// F_Q = ⟨Δ²n̂_a⟩ + ⟨Δ²n̂_b⟩ + 2Cov[n̂_a, n̂_b].
double qfi_lossless(const PhotonMoments& m);

/// The braced quadratic form Q(γ′), i.e. C_Q at λ = 0.
double loss_objective(const PhotonMoments& m, const NoiseParams& noise, double gamma_prime_a,
                      double gamma_prime_b);

/// Full C_Q. With β_i = 0 the λ²/(8β_i²) term is 0 at λ = 0 and +∞ otherwise.
double c_q_objective(const PhotonMoments& m, const NoiseParams& noise, const VariationalParams& v);

/// Exact minimizer of Q over γ′. Arms on which Q does not depend (η_i = 1, or
/// an empty arm) are pinned at γ′_i = 0. Throws DegenerateMoments if the
/// remaining Hessian is not positive definite.
GammaOptimum minimize_gamma(const PhotonMoments& m, const NoiseParams& noise);

/// 8β_a²β_b²/(β_a²+β_b²); 0 when either β is 0.
double diffusion_floor(const NoiseParams& noise);

/// λ_opt = −C̃/(C̃ + D) with D = 1/diffusion_floor (λ_opt = 0 when D = ∞).
double lambda_optimal(double c_tilde, const NoiseParams& noise);

/// C_φ = C̃·D/(C̃ + D).
double c_phi_from(double c_tilde, const NoiseParams& noise);

/// Evaluates the literal closed forms. Throws DegenerateMoments when a
/// variance is zero (A_i undefined).
LiteralClosedForm literal_closed_form(const PhotonMoments& m, const NoiseParams& noise);

/// Exact optimum (γ′_opt, λ_opt, C̃_Q, C_φ, Δφ) plus the literal closed forms
/// and a per-component agreement report (relative tolerance 1e-6). Throws
/// DegenerateMoments when a variance is zero.
BoundBreakdown gamma_lambda_closed_form(const PhotonMoments& m, const NoiseParams& noise);

/// Same as gamma_lambda_closed_form but never throws DegenerateMoments: on
/// degenerate moments the literal cross-check is omitted and C̃_Q comes from a
/// direct numeric minimization. Δφ is +∞ when C̃_Q = 0.
BoundBreakdown compute_bound(const PhotonMoments& m, const NoiseParams& noise);

/// sqrt(1/C̃_Q + diffusion_floor). Throws ZeroInformation when C̃_Q = 0.
double delta_phi_bound(const BoundBreakdown& report);

}  // namespace su11
