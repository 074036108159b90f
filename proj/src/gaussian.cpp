#include "su11/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "su11/errors.hpp"

namespace su11 {
namespace {

double wrap_phase(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

void require_finite(const char* key, double v) {
  if (!std::isfinite(v)) throw DomainError(key, "finite real", v);
}

// Projector-weighted quadratic forms: n̂_a = ½(x_a² + p_a²) − ½.
Eigen::Matrix4d number_form(int mode) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(2 * mode, 2 * mode) = 0.5;
  m(2 * mode + 1, 2 * mode + 1) = 0.5;
  return m;
}

}  // namespace

InputSpec validated(const InputSpec& spec) {
  require_finite("alpha", spec.alpha_mag);
  require_finite("alpha_phase", spec.alpha_phase);
  require_finite("r", spec.squeeze_r);
  require_finite("squeeze_phase", spec.squeeze_phase);
  if (spec.alpha_mag < 0.0) throw DomainError("alpha", "[0, inf)", spec.alpha_mag);
  if (spec.squeeze_r < 0.0) throw DomainError("r", "[0, inf)", spec.squeeze_r);
  InputSpec out = spec;
  out.alpha_phase = wrap_phase(spec.alpha_phase);
  out.squeeze_phase = wrap_phase(spec.squeeze_phase);
  return out;
}

PumpSpec validated(const PumpSpec& pump) {
  require_finite("g", pump.gain_g);
  require_finite("pump_phase", pump.pump_phase);
  if (pump.gain_g < 0.0) throw DomainError("g", "[0, inf)", pump.gain_g);
  return {pump.gain_g, wrap_phase(pump.pump_phase)};
}

InputSpec alpha_locked_input(double squeeze_r) {
  return validated(InputSpec{0.5 * std::exp(squeeze_r), 0.0, squeeze_r, 0.0});
}

Eigen::Matrix4d symplectic_form() {
  Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  return omega;
}

GaussianState prepare_input(const InputSpec& raw) {
  const InputSpec spec = validated(raw);
  GaussianState s;
  s.mean(0) = std::sqrt(2.0) * spec.alpha_mag * std::cos(spec.alpha_phase);
  s.mean(1) = std::sqrt(2.0) * spec.alpha_mag * std::sin(spec.alpha_phase);

  // S†bS = cosh r·b − e^{iθ} sinh r·b† acting on (x_b, p_b).
  const double ch = std::cosh(spec.squeeze_r);
  const double sh = std::sinh(spec.squeeze_r);
  const double c = std::cos(spec.squeeze_phase);
  const double sn = std::sin(spec.squeeze_phase);
  Eigen::Matrix2d m;
  m << ch - sh * c, -sh * sn,
       -sh * sn, ch + sh * c;
  s.cov.block<2, 2>(2, 2) = 0.5 * m * m.transpose();
  return s;
}

GaussianState apply_nbs(const GaussianState& state, const PumpSpec& raw) {
  const PumpSpec pump = validated(raw);
  const double ch = std::cosh(pump.gain_g);
  const double sh = std::sinh(pump.gain_g);
  const double c = std::cos(pump.pump_phase);
  const double sn = std::sin(pump.pump_phase);
  // e^{iθ}b† = (c·x_b + s·p_b)/√2 + i(s·x_b − c·p_b)/√2, likewise for a†.
  Eigen::Matrix4d sym;
  sym << ch, 0.0, sh * c, sh * sn,
         0.0, ch, sh * sn, -sh * c,
         sh * c, sh * sn, ch, 0.0,
         sh * sn, -sh * c, 0.0, ch;
  GaussianState out;
  out.mean = sym * state.mean;
  out.cov = sym * state.cov * sym.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

PhotonMoments photon_moments(const GaussianState& state) {
  const Eigen::Matrix4d& v = state.cov;
  const Eigen::Vector4d& d = state.mean;
  const Eigen::Matrix4d omega = symplectic_form();
  const Eigen::Matrix4d na = number_form(0);
  const Eigen::Matrix4d nb = number_form(1);

  auto mean = [&](const Eigen::Matrix4d& q) { return (q * v).trace() + d.dot(q * d) - 0.5; };
  // Symmetrized covariance of two quadratic forms qᵀXq, qᵀYq in a Gaussian
  // state; the Ω term is the commutator correction.
  auto cov = [&](const Eigen::Matrix4d& x, const Eigen::Matrix4d& y) {
    return 2.0 * (x * v * y * v).trace() + 0.5 * (x * omega * y * omega).trace() +
           4.0 * d.dot(x * v * y * d);
  };

  PhotonMoments m;
  m.mean_a = mean(na);
  m.mean_b = mean(nb);
  m.var_a = std::max(0.0, cov(na, na));
  m.var_b = std::max(0.0, cov(nb, nb));
  m.cov_ab = cov(na, nb);
  // Clamp roundoff below zero for vacuum-like arms.
  m.mean_a = std::max(0.0, m.mean_a);
  m.mean_b = std::max(0.0, m.mean_b);
  return m;
}

PhotonMoments moments_after_nbs(const InputSpec& spec, const PumpSpec& pump) {
  return photon_moments(apply_nbs(prepare_input(spec), pump));
}

std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& cov) {
  const Eigen::Matrix4d m = symplectic_form() * cov;
  Eigen::EigenSolver<Eigen::Matrix4d> es(m, false);
  std::array<double, 4> abs_eigs{};
  for (int i = 0; i < 4; ++i) abs_eigs[i] = std::abs(es.eigenvalues()(i));
  std::sort(abs_eigs.begin(), abs_eigs.end());
  // Eigenvalues come in ±iν pairs.
  return {0.5 * (abs_eigs[0] + abs_eigs[1]), 0.5 * (abs_eigs[2] + abs_eigs[3])};
}

bool is_physical(const GaussianState& state, double tol) {
  if ((state.cov - state.cov.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  const auto nu = symplectic_eigenvalues(state.cov);
  return nu[0] >= 0.5 - tol;
}

}  // namespace su11
