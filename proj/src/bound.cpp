#include "su11/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "su11/errors.hpp"

namespace su11 {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kAgreementTol = 1e-6;

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

struct ArmView {
  double mean, var, eta;
};

// Curvature of Q along γ′_i (up to the common factor 2).
double arm_curvature(const ArmView& arm) {
  const double s = 1.0 - arm.eta;
  return s * s * arm.var + arm.eta * s * arm.mean;
}

// Exact minimizer of Q along γ′_i with the other arm fixed.
double coordinate_minimizer(const ArmView& arm, double cov, double other_u) {
  const double s = 1.0 - arm.eta;
  const double h = arm_curvature(arm);
  if (h <= 0.0) return 0.0;
  return s * (arm.var + cov * other_u) / h;
}

GammaOptimum minimize_by_coordinate_descent(const PhotonMoments& m, const NoiseParams& noise) {
  const ArmView a{m.mean_a, m.var_a, noise.eta_a};
  const ArmView b{m.mean_b, m.var_b, noise.eta_b};
  double ga = 0.0, gb = 0.0;
  for (int it = 0; it < 500; ++it) {
    const double ga_new = coordinate_minimizer(a, m.cov_ab, 1.0 - gb * (1.0 - b.eta));
    const double gb_new = coordinate_minimizer(b, m.cov_ab, 1.0 - ga_new * (1.0 - a.eta));
    const bool done = rel_diff(ga, ga_new) < 1e-15 && rel_diff(gb, gb_new) < 1e-15;
    ga = ga_new;
    gb = gb_new;
    if (done) break;
  }
  return {{ga, gb}, std::max(0.0, loss_objective(m, noise, ga, gb))};
}

void fill_intermediates(BoundBreakdown& out, const PhotonMoments& m, const NoiseParams& noise) {
  out.a_a = m.var_a > 0.0 ? m.mean_a / m.var_a : kNaN;
  out.a_b = m.var_b > 0.0 ? m.mean_b / m.var_b : kNaN;
  out.b_a = (1.0 - noise.eta_a) / noise.eta_a;
  out.b_b = (1.0 - noise.eta_b) / noise.eta_b;
  out.j = (m.var_a > 0.0 && m.var_b > 0.0) ? m.cov_ab / std::sqrt(m.var_a * m.var_b) : kNaN;
}

BoundBreakdown exact_breakdown(const PhotonMoments& m, const NoiseParams& noise,
                               const GammaOptimum& opt) {
  BoundBreakdown out;
  out.f_q_lossless = qfi_lossless(m);
  out.c_tilde = opt.c_tilde;
  out.gamma_opt = opt.gamma_prime;
  out.diffusion_floor = diffusion_floor(noise);
  out.lambda_opt = lambda_optimal(opt.c_tilde, noise);
  out.c_phi = c_phi_from(opt.c_tilde, noise);
  out.delta_phi = opt.c_tilde > 0.0 ? std::sqrt(1.0 / opt.c_tilde + out.diffusion_floor) : kInf;
  fill_intermediates(out, m, noise);
  return out;
}

}  // namespace

NoiseParams validated(const NoiseParams& noise) {
  auto check_eta = [](const char* key, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw DomainError(key, "(0, 1]", eta);
  };
  auto check_beta = [](const char* key, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError(key, "[0, inf)", beta);
  };
  check_eta("eta_a", noise.eta_a);
  check_eta("eta_b", noise.eta_b);
  check_beta("beta_a", noise.beta_a);
  check_beta("beta_b", noise.beta_b);
  return noise;
}

double qfi_lossless(const PhotonMoments& m) {
  return std::max(0.0, m.var_a + m.var_b + 2.0 * m.cov_ab);
}

double loss_objective(const PhotonMoments& m, const NoiseParams& noise, double gamma_prime_a,
                      double gamma_prime_b) {
  const double sa = 1.0 - noise.eta_a;
  const double sb = 1.0 - noise.eta_b;
  const double ua = 1.0 - gamma_prime_a * sa;
  const double ub = 1.0 - gamma_prime_b * sb;
  return ua * ua * m.var_a + noise.eta_a * gamma_prime_a * gamma_prime_a * sa * m.mean_a +
         ub * ub * m.var_b + noise.eta_b * gamma_prime_b * gamma_prime_b * sb * m.mean_b +
         2.0 * ua * ub * m.cov_ab;
}

double c_q_objective(const PhotonMoments& m, const NoiseParams& raw, const VariationalParams& v) {
  const NoiseParams noise = validated(raw);
  const double lam2 = v.lambda * v.lambda;
  auto diffusion_term = [&](double beta) {
    if (lam2 == 0.0) return 0.0;
    if (beta == 0.0) return kInf;
    return lam2 / (8.0 * beta * beta);
  };
  const double braced = loss_objective(m, noise, v.gamma_prime_a, v.gamma_prime_b);
  return (1.0 + v.lambda) * (1.0 + v.lambda) * braced + diffusion_term(noise.beta_a) +
         diffusion_term(noise.beta_b);
}

GammaOptimum minimize_gamma(const PhotonMoments& m, const NoiseParams& raw) {
  const NoiseParams noise = validated(raw);
  const ArmView a{m.mean_a, m.var_a, noise.eta_a};
  const ArmView b{m.mean_b, m.var_b, noise.eta_b};
  const double haa = arm_curvature(a);
  const double hbb = arm_curvature(b);
  const bool active_a = haa > 0.0;
  const bool active_b = hbb > 0.0;

  GammaOptimum opt;
  if (active_a && active_b) {
    // Stationarity: H·γ′ = rhs with H_ab = s_a·s_b·Cov.
    const double sa = 1.0 - a.eta;
    const double sb = 1.0 - b.eta;
    const double hab = sa * sb * m.cov_ab;
    const double det = haa * hbb - hab * hab;
    if (!(det > 1e-14 * haa * hbb)) {
      throw DegenerateMoments("loss objective Hessian is singular for the given moments");
    }
    const double ra = sa * (a.var + m.cov_ab);
    const double rb = sb * (b.var + m.cov_ab);
    opt.gamma_prime = {(hbb * ra - hab * rb) / det, (haa * rb - hab * ra) / det};
  } else if (active_a) {
    opt.gamma_prime = {coordinate_minimizer(a, m.cov_ab, 1.0), 0.0};
  } else if (active_b) {
    opt.gamma_prime = {0.0, coordinate_minimizer(b, m.cov_ab, 1.0)};
  }
  if (!std::isfinite(opt.gamma_prime[0]) || !std::isfinite(opt.gamma_prime[1])) {
    throw DegenerateMoments("non-finite stationary point");
  }
  opt.c_tilde = std::max(0.0, loss_objective(m, noise, opt.gamma_prime[0], opt.gamma_prime[1]));
  return opt;
}

double diffusion_floor(const NoiseParams& noise) {
  if (noise.beta_a == 0.0 || noise.beta_b == 0.0) return 0.0;
  const double t = noise.beta_a * noise.beta_b / std::hypot(noise.beta_a, noise.beta_b);
  return 8.0 * t * t;
}

double lambda_optimal(double c_tilde, const NoiseParams& noise) {
  const double f = diffusion_floor(noise);
  return -c_tilde * f / (c_tilde * f + 1.0);
}

double c_phi_from(double c_tilde, const NoiseParams& noise) {
  const double f = diffusion_floor(noise);
  return c_tilde / (c_tilde * f + 1.0);
}

LiteralClosedForm literal_closed_form(const PhotonMoments& m, const NoiseParams& raw) {
  const NoiseParams noise = validated(raw);
  if (!(m.var_a > 0.0) || !(m.var_b > 0.0)) {
    throw DegenerateMoments("closed form needs nonzero photon-number variance in both arms");
  }
  const double n[2] = {m.mean_a, m.mean_b};
  const double var[2] = {m.var_a, m.var_b};
  const double sd[2] = {std::sqrt(m.var_a), std::sqrt(m.var_b)};
  const double eta[2] = {noise.eta_a, noise.eta_b};
  const double cov = m.cov_ab;
  double a[2], b[2];
  for (int i = 0; i < 2; ++i) {
    a[i] = n[i] / var[i];
    b[i] = (1.0 - eta[i]) / eta[i];
  }
  const double jj = cov / (sd[0] * sd[1]);

  double t[2], k[2], gp[2];
  for (int i = 0; i < 2; ++i) {
    const int o = 1 - i;
    const double wj = b[o] / (a[o] + b[o]);
    const double ratio = sd[o] / sd[i];
    const double denom = a[i] + b[i] * (1.0 - wj * jj * jj);
    t[i] = (a[i] - a[o] * b[i] / (a[o] + b[o]) * ratio * jj) / denom;
    k[i] = std::sqrt(b[i]) * (1.0 + a[o] / (a[o] + b[o]) * ratio * jj - wj * jj * jj) / denom;
    const double var_reduced = var[i] - wj * cov * cov / var[o];
    gp[i] = (var_reduced + wj * cov) / ((1.0 - eta[i]) * var_reduced + eta[i] * n[i]);
  }

  LiteralClosedForm p;
  p.t_ab = t[0];
  p.t_ba = t[1];
  p.k_ab = k[0];
  p.k_ba = k[1];
  p.gamma_prime = {gp[0], gp[1]};
  const double diag = t[0] * t[0] * var[0] + k[0] * k[0] * n[0] + t[1] * t[1] * var[1] +
                      k[1] * k[1] * n[1];
  p.c_tilde_literal = diag + 2.0 * t[0] * t[0] * t[1] * t[1] * cov;
  p.c_tilde_product = diag + 2.0 * t[0] * t[1] * cov;
  const double ba2 = noise.beta_a * noise.beta_a;
  const double bb2 = noise.beta_b * noise.beta_b;
  const double denom = 8.0 * p.c_tilde_literal * ba2 * bb2 + ba2 + bb2;
  // The literal λ_opt and C_φ are 0/0 at β_a = β_b = 0; use their limits.
  if (denom > 0.0) {
    p.lambda_opt = -8.0 * p.c_tilde_literal * ba2 * bb2 / denom;
    p.c_phi = p.c_tilde_literal * (ba2 + bb2) / denom;
  } else {
    p.lambda_opt = 0.0;
    p.c_phi = p.c_tilde_literal;
  }
  return p;
}

BoundBreakdown gamma_lambda_closed_form(const PhotonMoments& m, const NoiseParams& raw) {
  const NoiseParams noise = validated(raw);
  const LiteralClosedForm literal = literal_closed_form(m, noise);
  BoundBreakdown out = exact_breakdown(m, noise, minimize_gamma(m, noise));

  ClosedFormAgreement agree;
  // γ′ only matters on arms with loss; lossless arms are pinned at 0.
  const double eta[2] = {noise.eta_a, noise.eta_b};
  for (int i = 0; i < 2; ++i) {
    if (eta[i] < 1.0) {
      agree.max_rel_gamma =
          std::max(agree.max_rel_gamma, rel_diff(literal.gamma_prime[i], out.gamma_opt[i]));
    }
  }
  agree.gamma_prime = agree.max_rel_gamma <= kAgreementTol;
  agree.rel_c_tilde_literal = rel_diff(literal.c_tilde_literal, out.c_tilde);
  agree.rel_c_tilde_product = rel_diff(literal.c_tilde_product, out.c_tilde);
  agree.c_tilde_literal = agree.rel_c_tilde_literal <= kAgreementTol;
  agree.c_tilde_product = agree.rel_c_tilde_product <= kAgreementTol;
  agree.c_phi = rel_diff(literal.c_phi, out.c_phi) <= kAgreementTol;

  out.literal = literal;
  out.agreement = agree;
  return out;
}

BoundBreakdown compute_bound(const PhotonMoments& m, const NoiseParams& raw) {
  const NoiseParams noise = validated(raw);
  if (m.var_a > 0.0 && m.var_b > 0.0) {
    try {
      return gamma_lambda_closed_form(m, noise);
    } catch (const DegenerateMoments&) {
    }
  }
  GammaOptimum opt;
  try {
    opt = minimize_gamma(m, noise);
  } catch (const DegenerateMoments&) {
    opt = minimize_by_coordinate_descent(m, noise);
  }
  return exact_breakdown(m, noise, opt);
}

double delta_phi_bound(const BoundBreakdown& report) {
  if (!(report.c_tilde > 0.0)) {
    throw ZeroInformation("C̃_Q = 0: the state carries no phase information");
  }
  return std::sqrt(1.0 / report.c_tilde + report.diffusion_floor);
}

}  // namespace su11
