#include <cmath>
#include <numbers>

#include <doctest.h>

#include "su11/errors.hpp"
#include "su11/fock.hpp"
#include "su11/gaussian.hpp"
#include "test_helpers.hpp"

using namespace su11;
using su11::testing::close;
using su11::testing::moments_close;

TEST_CASE("prepare_input: vacuum, coherent and squeezed examples") {
  const auto vac = prepare_input({});
  CHECK(vac.mean.norm() == 0.0);
  CHECK((vac.cov - 0.5 * Eigen::Matrix4d::Identity()).norm() == 0.0);

  const auto coh = prepare_input({2.0, 0.0, 0.0, 0.0});
  CHECK(coh.mean(0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(coh.mean(1) == 0.0);
  CHECK((coh.cov - 0.5 * Eigen::Matrix4d::Identity()).norm() < 1e-15);

  const auto sq = prepare_input({0.0, 0.0, 1.0, 0.0});
  CHECK(sq.cov(2, 2) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(sq.cov(3, 3) == doctest::Approx(0.5 * std::exp(2.0)).epsilon(1e-14));
  CHECK(std::abs(sq.cov(2, 3)) < 1e-15);
  CHECK(sq.cov.block<2, 2>(0, 2).norm() == 0.0);
}

TEST_CASE("validated rejects negative amplitudes and wraps phases") {
  CHECK_THROWS_AS(validated(InputSpec{-1.0, 0.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(validated(InputSpec{0.0, 0.0, -0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(validated(PumpSpec{-0.5, 0.0}), DomainError);
  const auto in = validated(InputSpec{1.0, -0.5, 0.0, 7.0});
  CHECK(in.alpha_phase == doctest::Approx(2.0 * std::numbers::pi - 0.5));
  CHECK(in.squeeze_phase == doctest::Approx(7.0 - 2.0 * std::numbers::pi));
  try {
    validated(InputSpec{0.0, 0.0, -2.0, 0.0});
  } catch (const DomainError& e) {
    CHECK(e.key() == "r");
  }
}

TEST_CASE("apply_nbs: identity at g = 0 and purity preservation") {
  const auto in = prepare_input({1.3, 0.4, 0.7, 1.1});
  const auto same = apply_nbs(in, {0.0, 0.9});
  CHECK((same.cov - in.cov).norm() < 1e-15);
  CHECK((same.mean - in.mean).norm() < 1e-15);

  const auto tmsv = apply_nbs(prepare_input({}), {2.0, 0.0});
  const auto nu = symplectic_eigenvalues(tmsv.cov);
  CHECK(std::abs(nu[0] - 0.5) < 1e-9);
  CHECK(std::abs(nu[1] - 0.5) < 1e-9);
  CHECK(is_physical(tmsv));
  // x_a–x_b correlation of the TMSV is ½ sinh(2g).
  CHECK(tmsv.cov(0, 2) == doctest::Approx(0.5 * std::sinh(4.0)).epsilon(1e-13));
  CHECK(tmsv.cov(0, 0) == doctest::Approx(0.5 * std::cosh(4.0)).epsilon(1e-13));

  for (double g : {0.3, 1.0, 1.7}) {
    for (double r : {0.0, 0.6, 1.2}) {
      const auto out = apply_nbs(prepare_input({0.9, 0.2, r, 0.8}), {g, 1.3});
      const auto ev = symplectic_eigenvalues(out.cov);
      CHECK(std::abs(ev[0] - 0.5) < 1e-9);
      CHECK(std::abs(ev[1] - 0.5) < 1e-9);
    }
  }
}

TEST_CASE("apply_nbs at g = 1 matches the Fock-space covariance") {
  // Oracle: ⟨x_a x_b⟩ of the truncated TMSV with n_max = 40 equals ½ sinh 2.
  const auto fv = fock::build_state({}, {1.0, 0.0}, 40);
  // ⟨x_a x_b⟩ = ½⟨(a + a†)(b + b†)⟩ = Re⟨ab⟩ + Re⟨a†b⟩ and ⟨a†b⟩ = 0 here.
  std::complex<double> ab{0.0, 0.0};
  for (int n = 1; n <= 40; ++n) ab += std::conj(fv.at(n - 1, n - 1)) * static_cast<double>(n) * fv.at(n, n);
  const auto g = apply_nbs(prepare_input({}), {1.0, 0.0});
  CHECK(g.cov(0, 2) == doctest::Approx(ab.real()).epsilon(1e-8));
  CHECK(g.cov(0, 2) == doctest::Approx(0.5 * std::sinh(2.0)).epsilon(1e-14));
}

TEST_CASE("photon_moments: textbook values") {
  const auto coh = photon_moments(prepare_input({2.0, 0.3, 0.0, 0.0}));
  CHECK(coh.mean_a == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(coh.var_a == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(coh.mean_b == 0.0);
  CHECK(coh.var_b == 0.0);
  CHECK(coh.cov_ab == 0.0);

  const auto sq = photon_moments(prepare_input({0.0, 0.0, 1.0, 0.0}));
  CHECK(sq.mean_b == doctest::Approx(std::pow(std::sinh(1.0), 2)).epsilon(1e-14));
  CHECK(sq.mean_b == doctest::Approx(1.3811).epsilon(1e-4));
  CHECK(sq.var_b == doctest::Approx(0.5 * std::pow(std::sinh(2.0), 2)).epsilon(1e-13));
  CHECK(sq.var_b == doctest::Approx(6.5771).epsilon(1e-4));

  const auto tmsv = moments_after_nbs({}, {2.0, 0.0});
  const double s2 = std::pow(std::sinh(2.0), 2);
  const double sc = s2 * std::pow(std::cosh(2.0), 2);
  CHECK(tmsv.mean_a == doctest::Approx(s2).epsilon(1e-13));
  CHECK(tmsv.mean_b == doctest::Approx(s2).epsilon(1e-13));
  CHECK(tmsv.var_a == doctest::Approx(sc).epsilon(1e-12));
  CHECK(tmsv.var_b == doctest::Approx(sc).epsilon(1e-12));
  CHECK(tmsv.cov_ab == doctest::Approx(sc).epsilon(1e-12));
}

TEST_CASE("photon_moments: g = 2 TMSV agrees with the Fock oracle") {
  // n_max = 300 keeps the truncation leakage of tanh²(2)^{n} below 1e-8.
  const auto fv = fock::build_state({}, {2.0, 0.0}, 300);
  CHECK(moments_close(moments_after_nbs({}, {2.0, 0.0}), fock::exact_moments(fv), 1e-6));
}

TEST_CASE("moment-oracle equivalence on the 3x3x3 grid") {
  for (double alpha2 : {0.0, 1.0, 2.0}) {
    for (double r : {0.0, 0.5, 1.0}) {
      for (double g : {0.0, 0.6, 1.2}) {
        const InputSpec in{std::sqrt(alpha2), 0.0, r, 0.0};
        const PumpSpec pump{g, 0.0};
        const auto fv = fock::build_state(in, pump, 300);
        const auto gm = moments_after_nbs(in, pump);
        const auto fm = fock::exact_moments(fv);
        INFO("alpha2=" << alpha2 << " r=" << r << " g=" << g);
        CHECK(moments_close(gm, fm, 1e-6));
      }
    }
  }
}

TEST_CASE("phase covariance: moments depend only on the relative phases") {
  const InputSpec base{1.1, 0.3, 0.8, 1.0};
  const PumpSpec pump{1.0, 0.5};
  const auto ref = moments_after_nbs(base, pump);
  // Rotating mode a by θ_1 and mode b by θ_2 shifts θ_α by θ_1, θ_ς by 2θ_2 and
  // θ_p by θ_1 + θ_2, and leaves number statistics unchanged.
  for (auto [t1, t2] : {std::pair{0.7, -0.2}, std::pair{2.0, 1.3}, std::pair{-1.1, 0.4}}) {
    const InputSpec rot{base.alpha_mag, base.alpha_phase + t1, base.squeeze_r,
                        base.squeeze_phase + 2.0 * t2};
    const auto m = moments_after_nbs(rot, {pump.gain_g, pump.pump_phase + t1 + t2});
    CHECK(std::abs(m.mean_a - ref.mean_a) < 1e-10);
    CHECK(std::abs(m.mean_b - ref.mean_b) < 1e-10);
    CHECK(std::abs(m.var_a - ref.var_a) < 1e-10);
    CHECK(std::abs(m.var_b - ref.var_b) < 1e-10);
    CHECK(std::abs(m.cov_ab - ref.cov_ab) < 1e-10);
  }
}

TEST_CASE("total photon number is strictly increasing in g") {
  for (const InputSpec in : {InputSpec{}, InputSpec{1.0, 0.0, 0.5, 0.0}, alpha_locked_input(1.0)}) {
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
      const double n = moments_after_nbs(in, {0.05 * i, 0.0}).total();
      CHECK(n > prev);
      prev = n;
    }
  }
}

TEST_CASE("photon moments obey Cauchy-Schwarz") {
  for (double g : {0.2, 1.0, 2.5}) {
    for (double th : {0.0, 1.0, 2.5}) {
      const auto m = moments_after_nbs({1.5, th, 0.9, 2.0 * th}, {g, 0.3});
      CHECK(m.var_a >= 0.0);
      CHECK(m.var_b >= 0.0);
      CHECK(std::abs(m.cov_ab) <= std::sqrt(m.var_a * m.var_b) * (1.0 + 1e-12) + 1e-9);
    }
  }
}
