#include "oracle_check.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <fmt/format.h>

#include "su11/bound.hpp"
#include "su11/errors.hpp"
#include "su11/fock.hpp"
#include "su11/gaussian.hpp"

namespace su11::cli {
namespace {

double rel_err(double a, double ref) {
  return std::abs(a - ref) / std::max(std::abs(ref), 1e-300);
}

OracleCheck relative(std::string name, double value, double reference, double tol,
                     double abs_floor = 1e-9) {
  const double err = std::abs(reference) < abs_floor ? std::abs(value - reference)
                                                     : rel_err(value, reference);
  const double limit = std::abs(reference) < abs_floor ? abs_floor : tol;
  return {std::move(name), err <= limit, value, reference, limit - err};
}

// value ≤ reference·(1 + slack).
OracleCheck at_most(std::string name, double value, double reference, double slack) {
  const double margin = reference * (1.0 + slack) - value;
  return {std::move(name), margin >= 0.0, value, reference, margin};
}

struct Case {
  const char* label;
  InputSpec input;
  PumpSpec pump;
};

const Case kCases[] = {
    {"tmsv_g1", {0.0, 0.0, 0.0, 0.0}, {1.0, 0.0}},
    {"coh1_sq04_g06", {1.0, 0.0, 0.4, 0.0}, {0.6, 0.0}},
    {"coh12_sq03_g06_phased", {1.2, 0.7, 0.3, 1.9}, {0.6, 0.4}},
};

// E[e^{iφΔn}] for φ ~ N(0, 2β²) by composite Simpson quadrature.
double gaussian_phase_average(double beta, int delta_n) {
  const double sigma = std::sqrt(2.0) * beta;
  const int intervals = 4000;
  const double lo = -12.0 * sigma;
  const double h = 24.0 * sigma / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double pdf = std::exp(-0.5 * x * x / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    sum += w * pdf * std::cos(x * delta_n);
  }
  return sum * h / 3.0;
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(int n_max) {
  std::vector<OracleCheck> out;
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const Error& e) {
      out.push_back({name + " (" + e.what() + ")", false, 0.0, 0.0, -1.0});
    }
  };

  for (const auto& c : kCases) {
    guarded(fmt::format("{}/fock", c.label), [&] {
      const auto state = fock::build_state(c.input, c.pump, n_max);
      const PhotonMoments g = moments_after_nbs(c.input, c.pump);
      const PhotonMoments f = fock::exact_moments(state);
      const std::string p = c.label;
      out.push_back(relative(p + "/mean_a", g.mean_a, f.mean_a, 1e-6));
      out.push_back(relative(p + "/mean_b", g.mean_b, f.mean_b, 1e-6));
      out.push_back(relative(p + "/var_a", g.var_a, f.var_a, 1e-6));
      out.push_back(relative(p + "/var_b", g.var_b, f.var_b, 1e-6));
      out.push_back(relative(p + "/cov_ab", g.cov_ab, f.cov_ab, 1e-6));
      out.push_back(relative(p + "/pure_qfi_vs_F_Q", fock::pure_qfi(state), qfi_lossless(g), 1e-6));
      out.push_back(relative(p + "/fidelity_qfi", fock::fidelity_qfi(state), fock::pure_qfi(state), 1e-4));

      const VariationalParams vs[] = {{0.0, 0.0, 0.0}, {1.3, -0.4, -0.2}, {2.5, 0.8, 0.35}};
      const NoiseParams noise{0.8, 0.9, 0.02, 0.03};
      int k = 0;
      for (const auto& v : vs) {
        out.push_back(relative(fmt::format("{}/kraus_cq_{}", p, k++), fock::kraus_cq_check(state, noise, v),
                               c_q_objective(f, noise, v), 1e-8));
      }
    });
  }

  guarded("closed_form_product_reading", [&] {
    const PhotonMoments m = moments_after_nbs(alpha_locked_input(1.0), PumpSpec{2.0, 0.0});
    const auto b = gamma_lambda_closed_form(m, NoiseParams::symmetric(0.9, 0.01));
    out.push_back(relative("closed_form_c_tilde_product", b.literal->c_tilde_product, b.c_tilde, 1e-6));
  });

  for (int dn = 1; dn <= 3; ++dn) {
    out.push_back(relative(fmt::format("dephasing_factor_dn{}", dn), fock::dephasing_factor(0.1, dn),
                           gaussian_phase_average(0.1, dn), 1e-10));
  }

  guarded("channel_commutation", [&] {
    const int small = std::min(n_max, 12);
    const auto rho = fock::to_density(fock::build_state_unchecked({0.8, 0.3, 0.2, 0.0}, {0.5, 0.0}, small));
    const auto lhs = fock::dephase_channel(fock::loss_channel(rho, 0.7, 0.85), 0.1, 0.2);
    const auto rhs = fock::loss_channel(fock::dephase_channel(rho, 0.1, 0.2), 0.7, 0.85);
    const double diff = (lhs.rho - rhs.rho).cwiseAbs().maxCoeff();
    out.push_back({"channel_commutation", diff <= 1e-10, diff, 0.0, 1e-10 - diff});
  });

  guarded("bound_sandwich", [&] {
    const Case& c = kCases[1];
    const NoiseParams noise{0.9, 0.9, 0.05, 0.05};
    const auto state = fock::build_state(c.input, c.pump, n_max);
    const double exact = fock::mixed_qfi(fock::noisy_density(state, noise));
    const auto b = compute_bound(fock::exact_moments(state), noise);
    out.push_back(at_most("sandwich/mixed_qfi<=C_phi", exact, b.c_phi, 1e-6));
    out.push_back(at_most("sandwich/C_phi<=C_tilde", b.c_phi, b.c_tilde, 1e-6));
    out.push_back(at_most("sandwich/C_tilde<=F_Q", b.c_tilde, b.f_q_lossless, 1e-6));
  });
  return out;
}

}  // namespace su11::cli
