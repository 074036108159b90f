#include "su11/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "su11/bound.hpp"
#include "su11/critical.hpp"
#include "su11/errors.hpp"
#include "su11/gaussian.hpp"
#include "oracle_check.hpp"

namespace su11::cli {
namespace {

constexpr std::pair<Subcommand, const char*> kNames[] = {
    {Subcommand::kMoments, "moments"},       {Subcommand::kBound, "bound"},
    {Subcommand::kSweepBeta, "sweep-beta"},  {Subcommand::kSweepEta, "sweep-eta"},
    {Subcommand::kSurface, "surface"},       {Subcommand::kCritical, "critical"},
    {Subcommand::kOracleCheck, "oracle-check"},
};

const std::vector<std::string> kInputKeys = {"g",  "alpha", "alpha-phase", "r", "squeeze-phase",
                                             "pump-phase"};
const std::vector<std::string> kNoiseKeys = {"eta-a", "eta-b", "beta-a", "beta-b"};
const std::vector<std::string> kCommonKeys = {"out", "seed", "threads"};

std::string num(double v) { return fmt::format("{:.16e}", v == 0.0 ? 0.0 : v); }

// Typed view over the flat parameter map with defaults.
class Params {
 public:
  explicit Params(const std::map<std::string, std::string>& raw) : raw_(raw) {}

  bool has(const std::string& key) const { return raw_.count(key) != 0; }

  double real(const std::string& key, double fallback) const {
    const auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    return parse_real(key, it->second);
  }

  int integer(const std::string& key, int fallback) const {
    const double v = real(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw DomainError(key, "integer", v);
    return static_cast<int>(v);
  }

  Grid grid(const std::string& key, const Grid& fallback) const {
    const auto it = raw_.find(key);
    return it == raw_.end() ? fallback : Grid::parse(it->second, key);
  }

  std::vector<double> list(const std::string& key, std::vector<double> fallback) const {
    const auto it = raw_.find(key);
    if (it == raw_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
    if (out.empty()) throw DomainError(key, "comma-separated list of reals", std::nan(""));
    return out;
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second;
  }

 private:
  static double parse_real(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &pos);
    } catch (const std::exception&) {
      throw DomainError(key, "real number", std::nan(""));
    }
    if (pos != text.size()) throw DomainError(key, "real number", std::nan(""));
    return v;
  }

  const std::map<std::string, std::string>& raw_;
};

PumpSpec pump_from(const Params& p) { return {p.real("g", 2.0), p.real("pump-phase", 0.0)}; }

// `alpha` defaults to 0 for point evaluations; sweep-eta and surface default to
// the locked amplitude |α| = e^r/2 at r = 1.
InputSpec input_from(const Params& p, bool lock_alpha_by_default) {
  const double r = p.real("r", lock_alpha_by_default ? 1.0 : 0.0);
  const double alpha_default = lock_alpha_by_default ? 0.5 * std::exp(r) : 0.0;
  return validated(InputSpec{p.real("alpha", alpha_default), p.real("alpha-phase", 0.0), r,
                             p.real("squeeze-phase", 0.0)});
}

NoiseParams noise_from(const Params& p) {
  return validated(NoiseParams{p.real("eta-a", 1.0), p.real("eta-b", 1.0), p.real("beta-a", 0.0),
                               p.real("beta-b", 0.0)});
}

void write_metadata(std::ostream& os, const RunConfig& cfg,
                    const std::vector<std::pair<std::string, std::string>>& resolved) {
  fmt::print(os, "# tool: {} {}\n", kToolName, kToolVersion);
  fmt::print(os, "# subcommand: {}\n", to_string(cfg.subcommand));
  for (const auto& [k, v] : resolved) fmt::print(os, "# param {}: {}\n", k, v);
  os << "# convention: quadratures x=(a+a^dag)/sqrt(2), vacuum covariance I/2\n"
        "# convention: squeeze-phase 0 squeezes x; phases default to 0\n"
        "# convention: NBS a -> cosh(g) a + exp(i pump-phase) sinh(g) b^dag\n"
        "# convention: N_Tot = <n_a> + <n_b> after the first NBS; SQL = 1/sqrt(N_Tot); HL = 1/N_Tot\n"
        "# convention: C_tilde = exact minimum over gamma'; delta_phi = sqrt(1/C_tilde + "
        "8 beta_a^2 beta_b^2/(beta_a^2 + beta_b^2))\n"
        "# seed: reserved, unused (all computation deterministic)\n";
}

std::vector<std::pair<std::string, std::string>> resolved_input(const InputSpec& in,
                                                                const PumpSpec& pump) {
  return {{"g", num(pump.gain_g)},
          {"pump-phase", num(pump.pump_phase)},
          {"alpha", num(in.alpha_mag)},
          {"alpha-phase", num(in.alpha_phase)},
          {"r", num(in.squeeze_r)},
          {"squeeze-phase", num(in.squeeze_phase)}};
}

const char* kMetricHeader = "N_Tot,F_Q,C_tilde,C_phi,delta_phi,SQL,HL,beats_sql";

std::string metric_cells(const SweepRow& row) {
  return fmt::format("{},{},{},{},{},{},{},{}", num(row.n_tot), num(row.bound.f_q_lossless),
                     num(row.bound.c_tilde), num(row.bound.c_phi), num(row.bound.delta_phi),
                     num(row.sql), num(row.hl), row.beats_sql ? "true" : "false");
}

std::string grid_text(const Grid& g) { return fmt::format("{}:{}:{}", num(g.start), num(g.stop), g.count); }

void emit_moments(const RunConfig& cfg, const Params& p, std::ostream& os) {
  const InputSpec in = input_from(p, false);
  const PumpSpec pump = validated(pump_from(p));
  const PhotonMoments m = moments_after_nbs(in, pump);
  write_metadata(os, cfg, resolved_input(in, pump));
  os << "g,alpha,r,mean_a,mean_b,var_a,var_b,cov_ab,N_Tot,F_Q\n";
  fmt::print(os, "{},{},{},{},{},{},{},{},{},{}\n", num(pump.gain_g), num(in.alpha_mag),
             num(in.squeeze_r), num(m.mean_a), num(m.mean_b), num(m.var_a), num(m.var_b),
             num(m.cov_ab), num(n_total(m)), num(qfi_lossless(m)));
}

void emit_bound(const RunConfig& cfg, const Params& p, std::ostream& os) {
  const InputSpec in = input_from(p, false);
  const PumpSpec pump = validated(pump_from(p));
  const NoiseParams noise = noise_from(p);
  const SweepRow row = evaluate_point({in, pump, noise});
  auto meta = resolved_input(in, pump);
  meta.insert(meta.end(), {{"eta-a", num(noise.eta_a)},
                           {"eta-b", num(noise.eta_b)},
                           {"beta-a", num(noise.beta_a)},
                           {"beta-b", num(noise.beta_b)}});
  write_metadata(os, cfg, meta);
  fmt::print(os, "g,alpha,r,eta_a,eta_b,beta_a,beta_b,{},lambda_opt,gamma_opt_a,gamma_opt_b\n",
             kMetricHeader);
  fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{}\n", num(pump.gain_g), num(in.alpha_mag),
             num(in.squeeze_r), num(noise.eta_a), num(noise.eta_b), num(noise.beta_a),
             num(noise.beta_b), metric_cells(row), num(row.bound.lambda_opt),
             num(row.bound.gamma_opt[0]), num(row.bound.gamma_opt[1]));
}

void emit_sweep_beta(const RunConfig& cfg, const Params& p, std::ostream& os) {
  SweepConfig sc;
  const PumpSpec pump = validated(pump_from(p));
  sc.gain_g = pump.gain_g;
  sc.pump_phase = pump.pump_phase;
  sc.input_rule = InputRule::kAlphaLocked;
  sc.r_grid = p.grid("grid", Grid{0.0, 4.0, 41});
  sc.beta_values = p.list("betas", {0.01, 0.003});
  const NoiseParams base = noise_from(p);
  if (base.eta_a != base.eta_b) throw DomainError("eta-b", "equal to eta-a for sweeps", base.eta_b);
  sc.eta_values = {base.eta_a};
  const auto rows = beta_sweep(sc);

  std::string betas;
  for (double b : sc.beta_values) betas += (betas.empty() ? "" : ",") + num(b);
  write_metadata(os, cfg,
                 {{"g", num(sc.gain_g)},
                  {"pump-phase", num(sc.pump_phase)},
                  {"input-rule", "ALPHA_LOCKED |alpha|^2 = exp(2r)/4"},
                  {"grid (r)", grid_text(sc.r_grid)},
                  {"betas", betas},
                  {"eta", num(base.eta_a)}});
  fmt::print(os, "beta,r,alpha,{}\n", kMetricHeader);
  for (const auto& row : rows) {
    fmt::print(os, "{},{},{},{}\n", num(row.noise.beta_a), num(row.input.squeeze_r),
               num(row.input.alpha_mag), metric_cells(row));
  }
}

void emit_sweep_eta(const RunConfig& cfg, const Params& p, std::ostream& os) {
  const InputSpec in = input_from(p, true);
  const PumpSpec pump = validated(pump_from(p));
  const Grid grid = p.grid("grid", Grid{0.5, 1.0, 11});
  const double beta_a = p.real("beta-a", 0.0);
  const double beta_b = p.real("beta-b", 0.0);
  std::vector<PointSpec> points;
  for (double ea : grid.values()) {
    for (double eb : grid.values()) points.push_back({in, pump, validated(NoiseParams{ea, eb, beta_a, beta_b})});
  }
  const auto rows = evaluate_points(points);
  auto meta = resolved_input(in, pump);
  meta.insert(meta.end(), {{"grid (eta_a, eta_b)", grid_text(grid)},
                           {"beta-a", num(beta_a)},
                           {"beta-b", num(beta_b)}});
  write_metadata(os, cfg, meta);
  fmt::print(os, "eta_a,eta_b,{}\n", kMetricHeader);
  for (const auto& row : rows) {
    fmt::print(os, "{},{},{}\n", num(row.noise.eta_a), num(row.noise.eta_b), metric_cells(row));
  }
}

void emit_surface(const RunConfig& cfg, const Params& p, std::ostream& os) {
  const InputSpec in = input_from(p, true);
  const PumpSpec pump = validated(pump_from(p));
  const Grid eta_grid = p.grid("grid", Grid{0.5, 1.0, 11});
  const Grid beta_grid = p.grid("beta-grid", Grid{0.0, 0.1, 11});
  const auto rows = sensitivity_surface(in, pump, eta_grid.values(), beta_grid.values());
  auto meta = resolved_input(in, pump);
  meta.insert(meta.end(), {{"grid (eta)", grid_text(eta_grid)}, {"beta-grid", grid_text(beta_grid)}});
  write_metadata(os, cfg, meta);
  fmt::print(os, "eta,beta,{}\n", kMetricHeader);
  for (const auto& row : rows) {
    fmt::print(os, "{},{},{}\n", num(row.noise.eta_a), num(row.noise.beta_a), metric_cells(row));
  }
}

void emit_critical(const RunConfig& cfg, const Params& p, std::ostream& os) {
  SweepConfig sc;
  const PumpSpec pump = validated(pump_from(p));
  sc.gain_g = pump.gain_g;
  sc.pump_phase = pump.pump_phase;
  sc.r_grid = p.grid("grid", Grid{0.0, 4.0, 41});
  const auto rows = critical_curve(sc);
  write_metadata(os, cfg,
                 {{"g", num(sc.gain_g)},
                  {"pump-phase", num(sc.pump_phase)},
                  {"input-rule", "ALPHA_LOCKED |alpha|^2 = exp(2r)/4"},
                  {"grid (r)", grid_text(sc.r_grid)},
                  {"beta_cri", "eta = 1, beta_a = beta_b"},
                  {"eta_cri", "beta = 0, eta_a = eta_b"}});
  os << "r,alpha,N_Tot,F_Q,SQL,HL,beta_cri,beta_status,beta_iterations,eta_cri,eta_status,"
        "eta_iterations\n";
  for (const auto& row : rows) {
    fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{}\n", num(row.input.squeeze_r),
               num(row.input.alpha_mag), num(row.n_tot), num(qfi_lossless(row.moments)),
               num(sql(row.n_tot)), num(hl(row.n_tot)), num(row.beta.critical_value),
               su11::to_string(row.beta.status), row.beta.iterations, num(row.eta.critical_value),
               su11::to_string(row.eta.status), row.eta.iterations);
  }
}

int emit_oracle_check(const RunConfig& cfg, const Params& p, std::ostream& os) {
  const int n_max = p.integer("n-max", 40);
  if (n_max < 10) throw DomainError("n-max", "[10, inf)", n_max);
  const auto report = run_oracle_suite(n_max);
  write_metadata(os, cfg, {{"n-max", std::to_string(n_max)}});
  os << "check,status,value,reference,margin\n";
  bool ok = true;
  for (const auto& c : report) {
    ok = ok && c.passed;
    fmt::print(os, "{},{},{},{},{}\n", c.name, c.passed ? "PASS" : "FAIL", num(c.value),
               num(c.reference), num(c.margin));
  }
  return ok ? kOk : kOracleFailure;
}

}  // namespace

std::string to_string(Subcommand sub) {
  for (const auto& [s, name] : kNames) {
    if (s == sub) return name;
  }
  return "unknown";
}

std::optional<Subcommand> subcommand_from_string(const std::string& name) {
  for (const auto& [s, n] : kNames) {
    if (name == n) return s;
  }
  return std::nullopt;
}

std::vector<std::string> allowed_keys(Subcommand sub) {
  std::vector<std::string> keys = kCommonKeys;
  auto add = [&](const std::vector<std::string>& more) { keys.insert(keys.end(), more.begin(), more.end()); };
  switch (sub) {
    case Subcommand::kMoments:
      add(kInputKeys);
      break;
    case Subcommand::kBound:
      add(kInputKeys);
      add(kNoiseKeys);
      break;
    case Subcommand::kSweepBeta:
      add({"g", "pump-phase", "eta-a", "eta-b", "grid", "betas"});
      break;
    case Subcommand::kSweepEta:
      add(kInputKeys);
      add({"beta-a", "beta-b", "grid"});
      break;
    case Subcommand::kSurface:
      add(kInputKeys);
      add({"grid", "beta-grid"});
      break;
    case Subcommand::kCritical:
      add({"g", "pump-phase", "grid"});
      break;
    case Subcommand::kOracleCheck:
      add({"n-max"});
      break;
  }
  return keys;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto keys = allowed_keys(config.subcommand);
  for (const auto& [k, v] : config.parameters) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      fmt::print(err, "error: unknown key '{}' for subcommand {}\n", k, to_string(config.subcommand));
      return kDomainError;
    }
  }
  const Params p(config.parameters);
  try {
    if (p.has("threads")) {
      const int threads = p.integer("threads", 1);
      if (threads < 1) throw DomainError("threads", "[1, inf)", threads);
#ifdef _OPENMP
      omp_set_num_threads(threads);
#endif
    }
    // Render to a buffer first so a failed run never leaves a partial file.
    std::ostringstream buffer;
    int code = kOk;
    switch (config.subcommand) {
      case Subcommand::kMoments:
        emit_moments(config, p, buffer);
        break;
      case Subcommand::kBound:
        emit_bound(config, p, buffer);
        break;
      case Subcommand::kSweepBeta:
        emit_sweep_beta(config, p, buffer);
        break;
      case Subcommand::kSweepEta:
        emit_sweep_eta(config, p, buffer);
        break;
      case Subcommand::kSurface:
        emit_surface(config, p, buffer);
        break;
      case Subcommand::kCritical:
        emit_critical(config, p, buffer);
        break;
      case Subcommand::kOracleCheck:
        code = emit_oracle_check(config, p, buffer);
        break;
    }
    if (p.has("out")) {
      std::ofstream file(p.text("out", ""), std::ios::binary);
      if (!file) {
        fmt::print(err, "error: cannot open output file '{}'\n", p.text("out", ""));
        return kDomainError;
      }
      file << buffer.str();
    } else {
      out << buffer.str();
    }
    return code;
  } catch (const DomainError& e) {
    std::string key = e.key();
    std::replace(key.begin(), key.end(), '_', '-');
    fmt::print(err, "error: {} (key '{}', accepted {})\n", e.what(), key, e.accepted());
    return kDomainError;
  } catch (const Error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kDomainError;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Phase-sensitivity bounds for an SU(1,1) interferometer with loss and diffusion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  RunConfig config;
  std::map<Subcommand, CLI::App*> subs;
  const std::map<Subcommand, std::string> descriptions = {
      {Subcommand::kMoments, "photon-number moments after the first NBS"},
      {Subcommand::kBound, "bound breakdown for one parameter set"},
      {Subcommand::kSweepBeta, "delta_phi vs N_Tot for a list of beta values (grid over r)"},
      {Subcommand::kSweepEta, "delta_phi over an (eta_a, eta_b) grid"},
      {Subcommand::kSurface, "delta_phi over an (eta, beta) grid"},
      {Subcommand::kCritical, "beta_cri and eta_cri vs N_Tot (grid over r)"},
      {Subcommand::kOracleCheck, "dual-route verification against the Fock-space oracle"},
  };
  for (const auto& [sub, name] : kNames) {
    CLI::App* s = app.add_subcommand(name, descriptions.at(sub));
    for (const auto& key : allowed_keys(sub)) {
      s->add_option_function<std::string>(
          "--" + key, [&config, key](const std::string& v) { config.parameters[key] = v; },
          key == "grid" || key == "beta-grid" ? "start:stop:count" : "");
    }
    subs[sub] = s;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kDomainError;
  }
  for (const auto& [sub, s] : subs) {
    if (s->parsed()) config.subcommand = sub;
  }
  return run(config, std::cout, std::cerr);
}

}  // namespace su11::cli
