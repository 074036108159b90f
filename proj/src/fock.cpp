#include "su11/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <cblas.h>
#include <lapacke.h>

#include "su11/errors.hpp"

namespace su11::fock {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LogAmplitudes {
  std::vector<double> log_mag;  // −∞ where the amplitude is exactly zero
  std::vector<Complex> phase;
};

LogAmplitudes to_log(const std::vector<Complex>& c) {
  LogAmplitudes out{std::vector<double>(c.size()), std::vector<Complex>(c.size())};
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double mag = std::abs(c[i]);
    out.log_mag[i] = mag > 0.0 ? std::log(mag) : kNegInf;
    out.phase[i] = mag > 0.0 ? c[i] / mag : Complex{0.0, 0.0};
  }
  return out;
}

std::vector<Complex> coherent_amplitudes(double mag, double phase, int n_in) {
  std::vector<Complex> c(static_cast<std::size_t>(n_in) + 1);
  const Complex alpha = std::polar(mag, phase);
  c[0] = std::exp(-0.5 * mag * mag);
  for (int n = 1; n <= n_in; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

std::vector<Complex> squeezed_vacuum_amplitudes(double r, double theta, int n_in) {
  std::vector<Complex> c(static_cast<std::size_t>(n_in) + 1, Complex{0.0, 0.0});
  c[0] = 1.0 / std::sqrt(std::cosh(r));
  const Complex ratio = -std::polar(std::tanh(r), theta);
  for (int n = 2; n <= n_in; n += 2) {
    c[n] = c[n - 2] * ratio * std::sqrt((n - 1.0) / n);
  }
  return c;
}

std::vector<double> log_factorials(int n) {
  std::vector<double> lf(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) lf[i] = std::lgamma(i + 1.0);
  return lf;
}

// Matrix element ⟨m|Λ_l|m+l⟩ = sqrt(C(m+l, l)·η^m·(1−η)^l) of the single-mode
// loss Kraus operator, tabulated for m + l ≤ n_max.
std::vector<double> loss_kernel(double eta, int n_max) {
  const int d = n_max + 1;
  std::vector<double> k(static_cast<std::size_t>(d * d), 0.0);
  const auto lf = log_factorials(n_max);
  for (int m = 0; m <= n_max; ++m) {
    for (int l = 0; m + l <= n_max; ++l) {
      double value;
      if (l == 0) {
        value = std::pow(eta, 0.5 * m);
      } else if (eta >= 1.0) {
        value = 0.0;
      } else {
        const double log_binom = lf[m + l] - lf[m] - lf[l];
        value = std::exp(0.5 * (log_binom + m * std::log(eta) + l * std::log1p(-eta)));
      }
      k[static_cast<std::size_t>(m * d + l)] = value;
    }
  }
  return k;
}

void check_eta_beta(const NoiseParams& noise) { validated(noise); }

}  // namespace

double FockVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s;
}

FockVector number_state(int n_max, int na, int nb) {
  if (n_max < 1) throw DomainError("n_max", "[1, inf)", n_max);
  if (na < 0 || na > n_max) throw DomainError("n_a", "[0, n_max]", na);
  if (nb < 0 || nb > n_max) throw DomainError("n_b", "[0, n_max]", nb);
  FockVector v{n_max, std::vector<Complex>(static_cast<std::size_t>((n_max + 1) * (n_max + 1)))};
  v.amps[v.index(na, nb)] = 1.0;
  return v;
}

FockVector build_state_unchecked(const InputSpec& raw_spec, const PumpSpec& raw_pump, int n_max) {
  if (n_max < 1) throw DomainError("n_max", "[1, inf)", n_max);
  const InputSpec spec = validated(raw_spec);
  const PumpSpec pump = validated(raw_pump);
  const int d = n_max + 1;
  const int n_in = 2 * n_max + 60;

  const auto in_a = to_log(coherent_amplitudes(spec.alpha_mag, spec.alpha_phase, n_in));
  const auto in_b = to_log(squeezed_vacuum_amplitudes(spec.squeeze_r, spec.squeeze_phase, n_in));
  const auto lf = log_factorials(n_in);

  const double t = std::tanh(pump.gain_g);
  const double log_t = t > 0.0 ? std::log(t) : kNegInf;
  const Complex tau_phase = std::polar(1.0, pump.pump_phase);
  const double log_cosh = std::log(std::cosh(pump.gain_g));

  // exp(−τ*K₋) on the product input, then the diagonal cosh^{−(n+1)} factor.
  std::vector<Complex> mid(static_cast<std::size_t>(d * d));
  const auto count = static_cast<long long>(d) * d;
#pragma omp parallel for schedule(static)
  for (long long idx = 0; idx < count; ++idx) {
    const int ma = static_cast<int>(idx / d);
    const int mb = static_cast<int>(idx % d);
    Complex acc{0.0, 0.0};
    const int k_max = (t > 0.0) ? n_in - std::max(ma, mb) : 0;
    Complex sign_phase{1.0, 0.0};
    for (int k = 0; k <= k_max; ++k) {
      const double lpsi = in_a.log_mag[ma + k] + in_b.log_mag[mb + k];
      if (lpsi != kNegInf) {
        const double lw = (k == 0 ? 0.0 : k * log_t) - lf[k] +
                          0.5 * (lf[ma + k] - lf[ma] + lf[mb + k] - lf[mb]);
        acc += std::exp(lw + lpsi) * sign_phase * in_a.phase[ma + k] * in_b.phase[mb + k];
      }
      sign_phase *= -std::conj(tau_phase);
    }
    mid[static_cast<std::size_t>(idx)] = acc * std::exp(-(ma + mb + 1) * log_cosh);
  }

  // exp(τK₊): raise (n_a − k, n_b − k) → (n_a, n_b).
  FockVector out{n_max, std::vector<Complex>(static_cast<std::size_t>(d * d))};
#pragma omp parallel for schedule(static)
  for (long long idx = 0; idx < count; ++idx) {
    const int na = static_cast<int>(idx / d);
    const int nb = static_cast<int>(idx % d);
    Complex acc = mid[static_cast<std::size_t>(idx)];
    if (t > 0.0) {
      Complex phase = tau_phase;
      for (int k = 1; k <= std::min(na, nb); ++k) {
        const Complex m = mid[static_cast<std::size_t>((na - k) * d + (nb - k))];
        if (m != Complex{0.0, 0.0}) {
          const double lw =
              k * log_t - lf[k] + 0.5 * (lf[na] - lf[na - k] + lf[nb] - lf[nb - k]);
          acc += std::exp(lw) * phase * m;
        }
        phase *= tau_phase;
      }
    }
    out.amps[static_cast<std::size_t>(idx)] = acc;
  }
  return out;
}

FockVector build_state(const InputSpec& spec, const PumpSpec& pump, int n_max) {
  FockVector v = build_state_unchecked(spec, pump, n_max);
  const double leak = v.leakage();
  if (!(leak < kMaxLeakage)) throw TruncationOverflow(leak, n_max);
  return v;
}

FockVector apply_phase(const FockVector& state, double phi_a, double phi_b) {
  FockVector out = state;
  const int d = state.dim_per_mode();
  for (int na = 0; na < d; ++na) {
    for (int nb = 0; nb < d; ++nb) {
      out.amps[out.index(na, nb)] *= std::polar(1.0, phi_a * na + phi_b * nb);
    }
  }
  return out;
}

FockDensityMatrix apply_phase(const FockDensityMatrix& state, double phi_a, double phi_b) {
  const int d = state.dim_per_mode();
  Eigen::VectorXcd u(d * d);
  for (int na = 0; na < d; ++na) {
    for (int nb = 0; nb < d; ++nb) u(na * d + nb) = std::polar(1.0, phi_a * na + phi_b * nb);
  }
  FockDensityMatrix out{state.n_max, u.asDiagonal() * state.rho * u.conjugate().asDiagonal()};
  return out;
}

FockDensityMatrix to_density(const FockVector& state) {
  Eigen::Map<const Eigen::VectorXcd> v(state.amps.data(), static_cast<Eigen::Index>(state.amps.size()));
  return {state.n_max, v * v.adjoint()};
}

FockDensityMatrix loss_channel(const FockDensityMatrix& in, double eta_a, double eta_b,
                               Execution exec) {
  check_eta_beta(NoiseParams{eta_a, eta_b, 0.0, 0.0});
  const int n_max = in.n_max;
  const int d = n_max + 1;
  const auto ka = loss_kernel(eta_a, n_max);
  const auto kb = loss_kernel(eta_b, n_max);
  auto kernel = [d](const std::vector<double>& k, int m, int l) {
    return k[static_cast<std::size_t>(m * d + l)];
  };
  const auto dim = static_cast<long long>(d) * d;

  if (exec == Execution::kSerial) {
    FockDensityMatrix out{n_max, Eigen::MatrixXcd::Zero(dim, dim)};
    for (int ma = 0; ma < d; ++ma)
      for (int mb = 0; mb < d; ++mb)
        for (int na = 0; na < d; ++na)
          for (int nb = 0; nb < d; ++nb) {
            Complex acc{0.0, 0.0};
            for (int la = 0; la + std::max(ma, na) < d; ++la) {
              const double wa = kernel(ka, ma, la) * kernel(ka, na, la);
              for (int lb = 0; lb + std::max(mb, nb) < d; ++lb) {
                const double w = wa * kernel(kb, mb, lb) * kernel(kb, nb, lb);
                acc += w * in.rho((ma + la) * d + mb + lb, (na + la) * d + nb + lb);
              }
            }
            out.rho(ma * d + mb, na * d + nb) = acc;
          }
    return out;
  }

  // Mode a, then mode b; each output element depends only on the input.
  Eigen::MatrixXcd tmp(dim, dim);
#pragma omp parallel for schedule(static)
  for (long long row = 0; row < dim; ++row) {
    const int ma = static_cast<int>(row / d);
    const int mb = static_cast<int>(row % d);
    for (int na = 0; na < d; ++na)
      for (int nb = 0; nb < d; ++nb) {
        Complex acc{0.0, 0.0};
        for (int la = 0; la + std::max(ma, na) < d; ++la) {
          acc += kernel(ka, ma, la) * kernel(ka, na, la) * in.rho((ma + la) * d + mb, (na + la) * d + nb);
        }
        tmp(row, na * d + nb) = acc;
      }
  }
  FockDensityMatrix out{n_max, Eigen::MatrixXcd(dim, dim)};
#pragma omp parallel for schedule(static)
  for (long long row = 0; row < dim; ++row) {
    const int ma = static_cast<int>(row / d);
    const int mb = static_cast<int>(row % d);
    for (int na = 0; na < d; ++na)
      for (int nb = 0; nb < d; ++nb) {
        Complex acc{0.0, 0.0};
        for (int lb = 0; lb + std::max(mb, nb) < d; ++lb) {
          acc += kernel(kb, mb, lb) * kernel(kb, nb, lb) * tmp(ma * d + mb + lb, na * d + nb + lb);
        }
        out.rho(row, na * d + nb) = acc;
      }
  }
  return out;
}

double dephasing_factor(double beta, int delta_n) {
  return std::exp(-beta * beta * static_cast<double>(delta_n) * delta_n);
}

FockDensityMatrix dephase_channel(const FockDensityMatrix& in, double beta_a, double beta_b,
                                  Execution exec) {
  check_eta_beta(NoiseParams{1.0, 1.0, beta_a, beta_b});
  const int d = in.dim_per_mode();
  const auto dim = static_cast<long long>(d) * d;
  std::vector<double> fa(static_cast<std::size_t>(d)), fb(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    fa[k] = dephasing_factor(beta_a, k);
    fb[k] = dephasing_factor(beta_b, k);
  }
  FockDensityMatrix out{in.n_max, Eigen::MatrixXcd(dim, dim)};
  auto fill_row = [&](long long row) {
    const int ma = static_cast<int>(row / d);
    const int mb = static_cast<int>(row % d);
    for (int na = 0; na < d; ++na)
      for (int nb = 0; nb < d; ++nb) {
        const long long col = static_cast<long long>(na) * d + nb;
        out.rho(row, col) = in.rho(row, col) * (fa[std::abs(ma - na)] * fb[std::abs(mb - nb)]);
      }
  };
  if (exec == Execution::kSerial) {
    for (long long row = 0; row < dim; ++row) fill_row(row);
  } else {
#pragma omp parallel for schedule(static)
    for (long long row = 0; row < dim; ++row) fill_row(row);
  }
  return out;
}

namespace {

PhotonMoments moments_from_populations(int d, const auto& population) {
  double total = 0.0, sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  for (int na = 0; na < d; ++na) {
    for (int nb = 0; nb < d; ++nb) {
      const double p = population(na, nb);
      total += p;
      sa += p * na;
      sb += p * nb;
      saa += p * na * na;
      sbb += p * nb * nb;
      sab += p * na * nb;
    }
  }
  PhotonMoments m;
  m.mean_a = sa / total;
  m.mean_b = sb / total;
  m.var_a = std::max(0.0, saa / total - m.mean_a * m.mean_a);
  m.var_b = std::max(0.0, sbb / total - m.mean_b * m.mean_b);
  m.cov_ab = sab / total - m.mean_a * m.mean_b;
  return m;
}

}  // namespace

PhotonMoments exact_moments(const FockVector& state) {
  return moments_from_populations(state.dim_per_mode(), [&](int na, int nb) {
    return std::norm(state.at(na, nb));
  });
}

PhotonMoments exact_moments(const FockDensityMatrix& state) {
  const int d = state.dim_per_mode();
  return moments_from_populations(d, [&](int na, int nb) {
    return state.rho(na * d + nb, na * d + nb).real();
  });
}

double pure_qfi(const FockVector& state) {
  // Var(n_a + n_b) in the normalized state, with a shifted mean for accuracy.
  const int d = state.dim_per_mode();
  double total = 0.0, s1 = 0.0;
  for (int na = 0; na < d; ++na)
    for (int nb = 0; nb < d; ++nb) {
      const double p = std::norm(state.at(na, nb));
      total += p;
      s1 += p * (na + nb);
    }
  const double mean = s1 / total;
  double s2 = 0.0;
  for (int na = 0; na < d; ++na)
    for (int nb = 0; nb < d; ++nb) {
      const double dev = na + nb - mean;
      s2 += std::norm(state.at(na, nb)) * dev * dev;
    }
  return s2 / total;
}

double fidelity_qfi(const FockVector& state, double step) {
  // ⟨ψ|e^{iδN/2}|ψ⟩ = 1 − A + iB with A = Σ 2p·sin²(δN/4), B = Σ p·sin(δN/2).
  const int d = state.dim_per_mode();
  double total = 0.0, a = 0.0, b = 0.0;
  for (int na = 0; na < d; ++na)
    for (int nb = 0; nb < d; ++nb) {
      const double p = std::norm(state.at(na, nb));
      const double theta = 0.5 * step * (na + nb);
      const double s = std::sin(0.5 * theta);
      total += p;
      a += 2.0 * p * s * s;
      b += p * std::sin(theta);
    }
  a /= total;
  b /= total;
  const double fid = std::hypot(1.0 - a, b);
  const double one_minus_fid = (2.0 * a - a * a - b * b) / (1.0 + fid);
  return 8.0 * one_minus_fid / (step * step);
}

double mixed_qfi(const FockDensityMatrix& state) {
  const double tr = state.trace();
  if (!(1.0 - tr <= kMaxTraceDeficit)) {
    throw IllConditioned("density-matrix trace deficit " + std::to_string(1.0 - tr) +
                         " exceeds 1e-6; raise n_max");
  }
  const int d = state.dim_per_mode();
  const int dim = d * d;
  Eigen::MatrixXcd a = state.rho / tr;
  Eigen::MatrixXcd w(dim, dim);
  Eigen::VectorXd lambda(dim);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(dim));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_zheevr(
      LAPACK_COL_MAJOR, 'V', 'A', 'L', dim, reinterpret_cast<lapack_complex_double*>(a.data()), dim,
      0.0, 0.0, 0, 0, 0.0, &found, lambda.data(), reinterpret_cast<lapack_complex_double*>(w.data()),
      dim, support.data());
  if (info != 0 || found != dim)
    throw IllConditioned("eigendecomposition failed, info = " + std::to_string(info));

  Eigen::VectorXd total_number(dim);
  for (int na = 0; na < d; ++na)
    for (int nb = 0; nb < d; ++nb) total_number(na * d + nb) = na + nb;

  // ⟨i|∂ρ|j⟩ = (i/2)(λ_j − λ_i)⟨i|N|j⟩ for ρ(φ) = e^{iφN/2} ρ e^{−iφN/2}.
  const Eigen::MatrixXcd nw = total_number.asDiagonal() * w;
  Eigen::MatrixXcd n_eig(dim, dim);
  const Complex one{1.0, 0.0};
  const Complex zero{0.0, 0.0};
  cblas_zgemm(CblasColMajor, CblasConjTrans, CblasNoTrans, dim, dim, dim, &one, w.data(), dim,
              nw.data(), dim, &zero, n_eig.data(), dim);
  double f = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      const double sum = lambda(i) + lambda(j);
      if (sum <= kSldEigenFloor) continue;
      const double diff = lambda(i) - lambda(j);
      f += 0.5 * diff * diff / sum * std::norm(n_eig(i, j));
    }
  }
  return f;
}

double kraus_cq_check(const FockVector& state, const NoiseParams& raw, const VariationalParams& v) {
  const NoiseParams noise = validated(raw);
  if (!(state.leakage() < kMaxLeakage)) throw TruncationOverflow(state.leakage(), state.n_max);
  const int n_max = state.n_max;
  const int d = n_max + 1;
  const auto ka = loss_kernel(noise.eta_a, n_max);
  const auto kb = loss_kernel(noise.eta_b, n_max);
  const double gamma_a = v.gamma_prime_a - 1.0;
  const double gamma_b = v.gamma_prime_b - 1.0;
  const double scale = 0.5 * (1.0 + v.lambda);
  const double norm = state.norm_squared();

  // Per Kraus index l: dΠ_l/dφ|ψ⟩ = i·G_l·Λ_l|ψ⟩ with the number-diagonal
  // generator G_l = (1+λ)(n_a + n_b − γ_a l_a − γ_b l_b)/2 on the system.
  // ⟨H₁⟩ − ⟨H₂⟩² is accumulated as a centered second moment (two passes).
  auto for_each_term = [&](auto&& visit) {
    for (int la = 0; la < d; ++la) {
      for (int lb = 0; lb < d; ++lb) {
        for (int ma = 0; ma + la < d; ++ma) {
          const double wa = ka[static_cast<std::size_t>(ma * d + la)];
          if (wa == 0.0) continue;
          for (int mb = 0; mb + lb < d; ++mb) {
            const double wb = kb[static_cast<std::size_t>(mb * d + lb)];
            const double p = std::norm(wa * wb * state.at(ma + la, mb + lb));
            if (p == 0.0) continue;
            visit(scale * (ma + mb - gamma_a * la - gamma_b * lb), p / norm);
          }
        }
      }
    }
  };
  double h2 = 0.0;
  for_each_term([&](double g, double p) { h2 += g * p; });
  double h1_centered = 0.0;
  for_each_term([&](double g, double p) { h1_centered += (g - h2) * (g - h2) * p; });

  // Mirror environment in its ground state: ⟨p_E⟩ = 0 and ⟨p_E²⟩ = ½, so the
  // λ(p_Ea/4β_a + p_Eb/4β_b) part adds λ²⟨P²⟩ to ⟨H₁⟩ and nothing to ⟨H₂⟩.
  auto env_variance = [&](double beta) {
    if (v.lambda == 0.0) return 0.0;
    if (beta == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 / (16.0 * beta * beta);
  };
  const double env = v.lambda * v.lambda * (env_variance(noise.beta_a) + env_variance(noise.beta_b));
  return 4.0 * (h1_centered + env);
}

FockDensityMatrix noisy_density(const FockVector& state, const NoiseParams& raw, Execution exec) {
  const NoiseParams noise = validated(raw);
  auto rho = to_density(state);
  rho = loss_channel(rho, noise.eta_a, noise.eta_b, exec);
  return dephase_channel(rho, noise.beta_a, noise.beta_b, exec);
}

}  // namespace su11::fock
