#include <cmath>
#include <functional>

#include <doctest.h>

#include "su11/critical.hpp"
#include "su11/errors.hpp"
#include "su11/fock.hpp"
#include "test_helpers.hpp"

using namespace su11;
using su11::testing::close;
using su11::testing::rel_err;

namespace {

const PumpSpec kPump2{2.0, 0.0};

void check_certified(const ThresholdResult& r, const std::function<double(double)>& dphi) {
  REQUIRE(r.status == ThresholdStatus::kFound);
  const double target = sql(r.n_tot);
  CHECK(std::abs(dphi(r.critical_value) - target) <= 1e-9 * target);
  const double below = dphi(r.critical_value - 1e-8) - target;
  const double above = dphi(r.critical_value + 1e-8) - target;
  CHECK((below > 0.0) != (above > 0.0));
  CHECK(r.iterations <= kMaxBisections);
  CHECK(r.bracket[1] - r.bracket[0] <= kThresholdTol);
}

}  // namespace

TEST_CASE("n_total, SQL and HL") {
  const auto tm = moments_after_nbs({}, kPump2);
  CHECK(n_total(tm) == doctest::Approx(2.0 * std::pow(std::sinh(2.0), 2)).epsilon(1e-13));
  CHECK(n_total(tm) == doctest::Approx(26.31).epsilon(1e-3));
  CHECK(close(n_total(fock::exact_moments(fock::build_state({}, kPump2, 300))), n_total(tm), 1e-6));
  CHECK(n_total(moments_after_nbs({2.0, 0.0, 0.0, 0.0}, {0.0, 0.0})) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(n_total(moments_after_nbs({}, {0.0, 0.0})) == 0.0);

  CHECK(sql(100.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(hl(100.0) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(sql(1.0) == 1.0);
  CHECK(hl(1.0) == 1.0);
  CHECK(sql(n_total(tm)) == doctest::Approx(0.1950).epsilon(1e-3));
  CHECK_THROWS_AS(sql(0.0), NonPositivePhotonNumber);
  CHECK_THROWS_AS(hl(-1.0), NonPositivePhotonNumber);
  for (double n : {1.0, 2.5, 1e4}) CHECK(hl(n) <= sql(n));
}

TEST_CASE("Grid parsing and values") {
  const auto g = Grid::parse("0.5:1:11");
  CHECK(g.start == 0.5);
  CHECK(g.stop == 1.0);
  CHECK(g.count == 11);
  const auto v = g.values();
  CHECK(v.front() == 0.5);
  CHECK(v.back() == 1.0);
  CHECK(v[5] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(Grid::parse("2:2:1").values().size() == 1);
  CHECK_THROWS_AS(Grid::parse("0:1"), DomainError);
  CHECK_THROWS_AS(Grid::parse("0:x:3"), DomainError);
  CHECK_THROWS_AS(Grid::parse("0:1:2.5"), DomainError);
  CHECK_THROWS_AS(Grid::parse("0:1:0"), DomainError);
}

TEST_CASE("SweepConfig validation") {
  SweepConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  CHECK(sweep_inputs(cfg).size() == 41);
  CHECK(sweep_inputs(cfg)[10].alpha_mag == doctest::Approx(std::exp(1.0) / 2.0).epsilon(1e-15));
  cfg.r_grid.count = 1;
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg = SweepConfig{};
  cfg.input_rule = InputRule::kExplicit;
  cfg.explicit_inputs = {InputSpec{}};
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg.explicit_inputs.push_back(InputSpec{1.0, 0.0, 0.0, 0.0});
  CHECK_NOTHROW(validate(cfg));
  cfg.eta_values = {1.2};
  CHECK_THROWS_AS(validate(cfg), DomainError);
  cfg.eta_values = {1.0};
  cfg.beta_values = {-0.1};
  CHECK_THROWS_AS(validate(cfg), DomainError);
}

TEST_CASE("beta_critical: analytic crossing and certification") {
  for (double r : {0.0, 1.0, 2.5}) {
    const auto m = moments_after_nbs(alpha_locked_input(r), kPump2);
    const auto res = beta_critical(m);
    // At η = 1 the crossing solves 1/F_Q + 4β² = 1/N_Tot.
    const double expect = 0.5 * std::sqrt(1.0 / n_total(m) - 1.0 / qfi_lossless(m));
    CHECK(std::abs(res.critical_value - expect) <= 1e-10);
    check_certified(res, [&](double b) { return delta_phi(m, NoiseParams::symmetric(1.0, b)); });
  }
}

TEST_CASE("beta_critical and eta_critical: never-beats status") {
  // Sub-Poissonian moments: F_Q < N_Tot.
  PhotonMoments m;
  m.mean_a = 10.0;
  m.var_a = 5.0;
  CHECK(beta_critical(m).status == ThresholdStatus::kNoCrossingNeverBeats);
  CHECK(eta_critical(m).status == ThresholdStatus::kNoCrossingNeverBeats);
  CHECK(to_string(ThresholdStatus::kNoCrossingNeverBeats) == "NO_CROSSING_NEVER_BEATS");
  CHECK(to_string(ThresholdStatus::kFound) == "FOUND");
  CHECK(to_string(ThresholdStatus::kNoCrossingAlwaysBeats) == "NO_CROSSING_ALWAYS_BEATS");
}

TEST_CASE("eta_critical: g = 2, r = 1 locked point, certified and confirmed by a dense scan") {
  const auto m = moments_after_nbs(alpha_locked_input(1.0), kPump2);
  const auto res = eta_critical(m);
  auto dphi = [&](double eta) { return delta_phi(m, NoiseParams::symmetric(eta, 0.0)); };
  check_certified(res, dphi);
  CHECK(res.critical_value > 0.0);
  CHECK(res.critical_value < 1.0);
  // Oracle: first grid point at 1e-3 resolution that beats the SQL.
  const double target = sql(n_total(m));
  double first = -1.0;
  for (int i = 1; i <= 1000; ++i) {
    if (dphi(i * 1e-3) < target) { first = i * 1e-3; break; }
  }
  REQUIRE(first > 0.0);
  CHECK(res.critical_value <= first);
  CHECK(res.critical_value > first - 1e-3);
}

TEST_CASE("eta_critical respects the symmetric-loss ceiling") {
  // C̃_Q ≤ ηN/(1−η) < N_Tot for η < 1/2, so the SQL cannot be beaten there.
  SweepConfig cfg;
  cfg.r_grid = {0.0, 4.0, 9};
  for (const auto& row : critical_curve(cfg, Execution::kSerial)) {
    REQUIRE(row.eta.status == ThresholdStatus::kFound);
    CHECK(row.eta.critical_value >= 0.5);
  }
}

TEST_CASE("beta_cri is non-increasing in N_Tot along the alpha-locked sweep") {
  const auto rows = critical_curve(SweepConfig{});
  REQUIRE(rows.size() == 41);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].n_tot > rows[i - 1].n_tot);
    REQUIRE(rows[i].beta.status == ThresholdStatus::kFound);
    CHECK(rows[i].beta.critical_value <= rows[i - 1].beta.critical_value);
  }
}

TEST_CASE("sensitivity_surface: ordering, corner and monotonicity") {
  SweepConfig cfg;
  cfg.r_grid = {1.0, 1.5, 2};
  cfg.eta_values = Grid{0.5, 1.0, 11}.values();
  cfg.beta_values = Grid{0.0, 0.1, 11}.values();
  const auto rows = sensitivity_surface(cfg);
  REQUIRE(rows.size() == 121);
  const auto m = moments_after_nbs(alpha_locked_input(1.0), kPump2);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].noise.eta_a == cfg.eta_values[k / 11]);
    CHECK(rows[k].noise.beta_a == cfg.beta_values[k % 11]);
  }
  const auto& corner = rows[10 * 11 + 0];
  CHECK(rel_err(corner.bound.delta_phi, 1.0 / std::sqrt(qfi_lossless(m))) < 1e-14);
  for (int b = 0; b < 11; ++b) {
    for (int e = 1; e < 11; ++e) CHECK(rows[(e - 1) * 11 + b].bound.delta_phi >= rows[e * 11 + b].bound.delta_phi);
  }
  // Loss tolerance: η 1 → 0.9 costs less than β 0 → 0.1.
  const double base = corner.bound.delta_phi;
  const double lossy = rows[9 * 11 + 0].bound.delta_phi;
  const double diffused = rows[10 * 11 + 10].bound.delta_phi;
  CHECK(lossy - base < diffused - base);
}

TEST_CASE("beta_sweep ordering and saturation") {
  SweepConfig cfg;
  cfg.beta_values = {0.01, 0.003};
  const auto rows = beta_sweep(cfg);
  REQUIRE(rows.size() == 82);
  for (std::size_t i = 0; i < 41; ++i) {
    CHECK(rows[i].noise.beta_a == 0.01);
    CHECK(rows[41 + i].noise.beta_a == 0.003);
    CHECK(rows[i].bound.delta_phi > rows[41 + i].bound.delta_phi);
    CHECK(rows[i].bound.delta_phi >= 0.02);
  }
  CHECK(rows[40].bound.delta_phi == doctest::Approx(0.02).epsilon(1e-2));
}
