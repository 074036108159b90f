#pragma once

// Photon-number references, critical noise levels and sweep tables.

#include <array>
#include <string>
#include <vector>

#include "su11/bound.hpp"
#include "su11/gaussian.hpp"
#include "su11/parallel.hpp"

namespace su11 {

/// Inclusive linear grid start..stop with `count` points.
struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  std::vector<double> values() const;
  /// Parses "start:stop:count". Throws DomainError.
  static Grid parse(const std::string& text, const std::string& key = "grid");
};

enum class InputRule {
  kAlphaLocked,  // |α|² = e^{2r}/4, r taken from r_grid
  kExplicit,     // explicit_inputs as given
};

struct SweepConfig {
  double gain_g = 2.0;
  double pump_phase = 0.0;
  InputRule input_rule = InputRule::kAlphaLocked;
  Grid r_grid{0.0, 4.0, 41};
  std::vector<InputSpec> explicit_inputs;
  std::vector<double> eta_values{1.0};
  std::vector<double> beta_values{0.0};
};

/// Throws DomainError: fewer than 2 input points, or noise values outside
/// their domains.
void validate(const SweepConfig& cfg);

/// The input points of a sweep in order.
std::vector<InputSpec> sweep_inputs(const SweepConfig& cfg);

/// ⟨n̂_a⟩ + ⟨n̂_b⟩ after the first beam splitter.
double n_total(const PhotonMoments& m);

/// 1/sqrt(N). Throws NonPositivePhotonNumber for N ≤ 0.
double sql(double n_tot);
/// 1/N. Throws NonPositivePhotonNumber for N ≤ 0.
double hl(double n_tot);

/// Δφ bound for the given moments and noise.
double delta_phi(const PhotonMoments& m, const NoiseParams& noise);

enum class ThresholdStatus { kFound, kNoCrossingAlwaysBeats, kNoCrossingNeverBeats };

std::string to_string(ThresholdStatus status);

struct ThresholdResult {
  double n_tot = 0.0;
  double critical_value = 0.0;
  std::array<double, 2> bracket{};
  int iterations = 0;
  ThresholdStatus status = ThresholdStatus::kFound;
};

inline constexpr double kThresholdTol = 1e-10;
inline constexpr int kMaxBisections = 200;
inline constexpr double kEtaFloor = 1e-6;

/// β_cri at η = 1 with β_a = β_b: Δφ(β) crosses SQL. Bisection on [0, β_hi],
/// β_hi doubled from 0.1 until Δφ(β_hi) > SQL. Throws BracketFailure if Δφ is
/// not monotone along the bisection.
ThresholdResult beta_critical(const PhotonMoments& m);
ThresholdResult beta_critical(const InputSpec& input, const PumpSpec& pump);

/// η_cri at β = 0 with η_a = η_b, bisection on [1e-6, 1].
ThresholdResult eta_critical(const PhotonMoments& m);
ThresholdResult eta_critical(const InputSpec& input, const PumpSpec& pump);

/// One evaluated (input, noise) point.
struct SweepRow {
  InputSpec input;
  PumpSpec pump;
  NoiseParams noise;
  PhotonMoments moments;
  BoundBreakdown bound;
  double n_tot = 0.0;
  double sql = 0.0;
  double hl = 0.0;
  bool beats_sql = false;
};

struct PointSpec {
  InputSpec input;
  PumpSpec pump;
  NoiseParams noise;
};

SweepRow evaluate_point(const PointSpec& point);

/// Evaluates every point; the parallel path fans out over OpenMP threads,
/// the serial path is the reference. Row order follows `points`.
std::vector<SweepRow> evaluate_points(const std::vector<PointSpec>& points,
                                      Execution exec = Execution::kParallel);

/// Grid of (η, β) rows with η_a = η_b = η and β_a = β_b = β for the first
/// input of the sweep; row-major over η, then β.
std::vector<SweepRow> sensitivity_surface(const SweepConfig& cfg,
                                          Execution exec = Execution::kParallel);
std::vector<SweepRow> sensitivity_surface(const InputSpec& input, const PumpSpec& pump,
                                          const std::vector<double>& eta_values,
                                          const std::vector<double>& beta_values,
                                          Execution exec = Execution::kParallel);

/// Δφ vs N_Tot: every input × every β (η from eta_values, first entry), ordered
/// β-major then input.
std::vector<SweepRow> beta_sweep(const SweepConfig& cfg, Execution exec = Execution::kParallel);

struct CriticalRow {
  InputSpec input;
  PhotonMoments moments;
  double n_tot = 0.0;
  ThresholdResult beta;
  ThresholdResult eta;
};

/// β_cri and η_cri for every input of the sweep.
std::vector<CriticalRow> critical_curve(const SweepConfig& cfg,
                                        Execution exec = Execution::kParallel);

}  // namespace su11
