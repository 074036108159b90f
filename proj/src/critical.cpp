#include "su11/critical.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "su11/errors.hpp"

namespace su11 {
namespace {

// Δφ is allowed to wobble by this much relative before monotonicity is
// considered violated.
constexpr double kMonotoneSlack = 1e-12;

double parse_number(const std::string& text, const std::string& key) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw DomainError(key, "start:stop:count with real start/stop",
                      std::numeric_limits<double>::quiet_NaN());
  }
  return v;
}

// Bisection for the sign change of f(x) = Δφ(x) − SQL on [lo, hi] where
// f(lo) and f(hi) have opposite signs. `increasing` states the direction in
// which Δφ must move; a violation throws BracketFailure.
template <typename DeltaPhi>
ThresholdResult bisect(DeltaPhi&& dphi, double target, double lo, double hi, bool increasing,
                       double n_tot) {
  double d_lo = dphi(lo);
  double d_hi = dphi(hi);
  auto ordered = [&](double a, double b) {
    // a at the smaller abscissa, b at the larger one.
    const double slack = kMonotoneSlack * std::max(std::abs(a), std::abs(b));
    return increasing ? a <= b + slack : a + slack >= b;
  };
  if (!ordered(d_lo, d_hi)) throw BracketFailure("Δφ is not monotone across the bracket");

  ThresholdResult res;
  res.n_tot = n_tot;
  int it = 0;
  double best_x = lo, best_f = d_lo - target;
  auto consider = [&](double x, double f) {
    if (std::abs(f) < std::abs(best_f)) {
      best_x = x;
      best_f = f;
    }
  };
  consider(hi, d_hi - target);
  while (it < kMaxBisections) {
    const double width = hi - lo;
    const bool narrow = width <= kThresholdTol;
    const bool precise = std::abs(best_f) <= kThresholdTol * target;
    if ((narrow && precise) || width <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    const double mid = lo + 0.5 * width;
    const double d_mid = dphi(mid);
    ++it;
    if (!ordered(d_lo, d_mid) || !ordered(d_mid, d_hi)) {
      throw BracketFailure("Δφ is not monotone inside the bracket");
    }
    const double f_mid = d_mid - target;
    consider(mid, f_mid);
    const bool mid_above = f_mid > 0.0;
    const bool lo_above = d_lo - target > 0.0;
    if (mid_above == lo_above) {
      lo = mid;
      d_lo = d_mid;
    } else {
      hi = mid;
      d_hi = d_mid;
    }
  }
  res.critical_value = best_x;
  res.bracket = {lo, hi};
  res.iterations = it;
  res.status = ThresholdStatus::kFound;
  return res;
}

}  // namespace

std::vector<double> Grid::values() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = start;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    // Endpoints exact.
    out[i] = i == count - 1 ? stop : start + (stop - start) * static_cast<double>(i) / (count - 1);
  }
  return out;
}

Grid Grid::parse(const std::string& text, const std::string& key) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) {
    throw DomainError(key, "start:stop:count", std::numeric_limits<double>::quiet_NaN());
  }
  Grid g;
  g.start = parse_number(text.substr(0, c1), key);
  g.stop = parse_number(text.substr(c1 + 1, c2 - c1 - 1), key);
  const double count = parse_number(text.substr(c2 + 1), key);
  if (!(count >= 1.0) || count != std::floor(count) || count > 1e6) {
    throw DomainError(key + ".count", "integer in [1, 1e6]", count);
  }
  g.count = static_cast<int>(count);
  return g;
}

void validate(const SweepConfig& cfg) {
  validated(PumpSpec{cfg.gain_g, cfg.pump_phase});
  if (cfg.input_rule == InputRule::kAlphaLocked) {
    if (cfg.r_grid.count < 2) throw DomainError("n_points", "[2, inf)", cfg.r_grid.count);
    for (double r : cfg.r_grid.values()) validated(alpha_locked_input(r));
  } else {
    if (cfg.explicit_inputs.size() < 2) {
      throw DomainError("n_points", "[2, inf)", static_cast<double>(cfg.explicit_inputs.size()));
    }
    for (const auto& in : cfg.explicit_inputs) validated(in);
  }
  for (double eta : cfg.eta_values) validated(NoiseParams::symmetric(eta, 0.0));
  for (double beta : cfg.beta_values) validated(NoiseParams::symmetric(1.0, beta));
}

std::vector<InputSpec> sweep_inputs(const SweepConfig& cfg) {
  if (cfg.input_rule == InputRule::kExplicit) return cfg.explicit_inputs;
  std::vector<InputSpec> out;
  for (double r : cfg.r_grid.values()) out.push_back(alpha_locked_input(r));
  return out;
}

double n_total(const PhotonMoments& m) { return m.mean_a + m.mean_b; }

double sql(double n_tot) {
  if (!(n_tot > 0.0)) throw NonPositivePhotonNumber("SQL needs a positive photon number");
  return 1.0 / std::sqrt(n_tot);
}

double hl(double n_tot) {
  if (!(n_tot > 0.0)) throw NonPositivePhotonNumber("HL needs a positive photon number");
  return 1.0 / n_tot;
}

double delta_phi(const PhotonMoments& m, const NoiseParams& noise) {
  return compute_bound(m, noise).delta_phi;
}

std::string to_string(ThresholdStatus status) {
  switch (status) {
    case ThresholdStatus::kFound:
      return "FOUND";
    case ThresholdStatus::kNoCrossingAlwaysBeats:
      return "NO_CROSSING_ALWAYS_BEATS";
    case ThresholdStatus::kNoCrossingNeverBeats:
      return "NO_CROSSING_NEVER_BEATS";
  }
  return "UNKNOWN";
}

ThresholdResult beta_critical(const PhotonMoments& m) {
  const double n_tot = n_total(m);
  const double target = sql(n_tot);
  auto dphi = [&](double beta) { return delta_phi(m, NoiseParams::symmetric(1.0, beta)); };

  const double at_zero = dphi(0.0);
  if (at_zero >= target) {
    ThresholdResult r;
    r.n_tot = n_tot;
    r.status = ThresholdStatus::kNoCrossingNeverBeats;
    return r;
  }
  // Δφ ≥ 2β, so the doubling terminates once β_hi > SQL/2.
  double hi = 0.1;
  while (dphi(hi) <= target) {
    hi *= 2.0;
    if (hi > 1e6) throw BracketFailure("no upper bracket for β_cri");
  }
  return bisect(dphi, target, 0.0, hi, /*increasing=*/true, n_tot);
}

ThresholdResult beta_critical(const InputSpec& input, const PumpSpec& pump) {
  return beta_critical(moments_after_nbs(input, pump));
}

ThresholdResult eta_critical(const PhotonMoments& m) {
  const double n_tot = n_total(m);
  const double target = sql(n_tot);
  auto dphi = [&](double eta) { return delta_phi(m, NoiseParams::symmetric(eta, 0.0)); };

  ThresholdResult r;
  r.n_tot = n_tot;
  if (dphi(1.0) >= target) {
    r.status = ThresholdStatus::kNoCrossingNeverBeats;
    r.critical_value = 1.0;
    return r;
  }
  if (dphi(kEtaFloor) < target) {
    r.status = ThresholdStatus::kNoCrossingAlwaysBeats;
    r.critical_value = kEtaFloor;
    return r;
  }
  return bisect(dphi, target, kEtaFloor, 1.0, /*increasing=*/false, n_tot);
}

ThresholdResult eta_critical(const InputSpec& input, const PumpSpec& pump) {
  return eta_critical(moments_after_nbs(input, pump));
}

SweepRow evaluate_point(const PointSpec& point) {
  SweepRow row;
  row.input = validated(point.input);
  row.pump = validated(point.pump);
  row.noise = validated(point.noise);
  row.moments = moments_after_nbs(row.input, row.pump);
  row.bound = compute_bound(row.moments, row.noise);
  row.n_tot = n_total(row.moments);
  row.sql = sql(row.n_tot);
  row.hl = hl(row.n_tot);
  row.beats_sql = row.bound.delta_phi < row.sql;
  return row;
}

std::vector<SweepRow> evaluate_points(const std::vector<PointSpec>& points, Execution exec) {
  return map_indices<SweepRow>(
      points.size(), [&](std::size_t i) { return evaluate_point(points[i]); }, exec);
}

std::vector<SweepRow> sensitivity_surface(const InputSpec& input, const PumpSpec& pump,
                                          const std::vector<double>& eta_values,
                                          const std::vector<double>& beta_values,
                                          Execution exec) {
  std::vector<PointSpec> points;
  points.reserve(eta_values.size() * beta_values.size());
  for (double eta : eta_values) {
    for (double beta : beta_values) {
      points.push_back({input, pump, validated(NoiseParams::symmetric(eta, beta))});
    }
  }
  return evaluate_points(points, exec);
}

std::vector<SweepRow> sensitivity_surface(const SweepConfig& cfg, Execution exec) {
  validate(cfg);
  return sensitivity_surface(sweep_inputs(cfg).front(), PumpSpec{cfg.gain_g, cfg.pump_phase},
                             cfg.eta_values, cfg.beta_values, exec);
}

std::vector<SweepRow> beta_sweep(const SweepConfig& cfg, Execution exec) {
  validate(cfg);
  const auto inputs = sweep_inputs(cfg);
  const PumpSpec pump{cfg.gain_g, cfg.pump_phase};
  const double eta = cfg.eta_values.front();
  std::vector<PointSpec> points;
  for (double beta : cfg.beta_values) {
    for (const auto& in : inputs) points.push_back({in, pump, NoiseParams::symmetric(eta, beta)});
  }
  return evaluate_points(points, exec);
}

std::vector<CriticalRow> critical_curve(const SweepConfig& cfg, Execution exec) {
  validate(cfg);
  const auto inputs = sweep_inputs(cfg);
  const PumpSpec pump{cfg.gain_g, cfg.pump_phase};
  return map_indices<CriticalRow>(
      inputs.size(),
      [&](std::size_t i) {
        CriticalRow row;
        row.input = inputs[i];
        row.moments = moments_after_nbs(inputs[i], pump);
        row.n_tot = n_total(row.moments);
        row.beta = beta_critical(row.moments);
        row.eta = eta_critical(row.moments);
        return row;
      },
      exec);
}

}  // namespace su11
