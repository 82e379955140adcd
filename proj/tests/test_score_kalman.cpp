#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "acon2/score_kalman.hpp"
#include "oracles.hpp"

using namespace acon2;

namespace {

KalmanScoreState state(double mu, double sigma2, double w_bar, double v_bar) {
  KalmanScoreState s;
  s.mu = mu;
  s.sigma2 = sigma2;
  s.w_bar = w_bar;
  s.v_bar = v_bar;
  return s;
}

constexpr double kNoNoise = -std::numeric_limits<double>::infinity();

KalmanScoreState random_state(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> mu(-1000.0, 1000.0);
  std::uniform_real_distribution<double> log_var(-3.0, 5.0);
  std::uniform_real_distribution<double> log_sd(-2.0, 3.0);
  return state(mu(gen), std::exp(log_var(gen)), log_sd(gen), log_sd(gen));
}

}  // namespace

TEST_CASE("predictive_params sums the three variances") {
  auto p = predictive_params(state(0.0, 1.0, kNoNoise, kNoNoise));
  CHECK(p.mean == 0.0);
  CHECK(p.variance == 1.0);

  p = predictive_params(state(5.0, 1.0, 0.0, 0.0));
  CHECK(p.mean == 5.0);
  CHECK(p.variance == doctest::Approx(3.0).epsilon(1e-15));

  p = predictive_params(state(2.0, 0.25, 0.1, -0.1));
  CHECK(p.mean == 2.0);
  CHECK(p.variance == doctest::Approx(0.25 + std::exp(0.2) + std::exp(-0.2)).epsilon(1e-15));
}

TEST_CASE("score is the half-peaked predictive density") {
  const auto s = state(3.0, 2.0, 0.3, -0.4);
  const double var = predictive_params(s).variance;
  const double sd = std::sqrt(var);

  CHECK(score(s, 3.0) == 0.5);
  CHECK(score(s, 3.0 + sd) == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-14));
  CHECK(score(s, 3.0 + sd) == doctest::Approx(0.30326532985631671).epsilon(1e-14));
  CHECK(score(s, 1e6) == doctest::Approx(0.0));
  CHECK(score(s, -1e6) == doctest::Approx(0.0));

  std::mt19937_64 gen(11);
  for (int i = 0; i < 200; ++i) {
    const auto st = random_state(gen);
    const auto [mean, v] = predictive_params(st);
    std::normal_distribution<double> y(mean, 3.0 * std::sqrt(v));
    const double yy = y(gen);
    CHECK(score(st, yy) == doctest::Approx(oracle::scaled_score(yy, mean, v)).epsilon(1e-12));
    const double d = yy - mean;
    CHECK(score(st, mean + d) == doctest::Approx(score(st, mean - d)).epsilon(1e-15));
    CHECK(score(st, mean + 2.0 * d) <= score(st, mean + d));
  }
}

TEST_CASE("kalman_update examples") {
  auto s = kalman_update(state(0.0, 1.0, kNoNoise, 0.0), 2.0);
  CHECK(s.mu == doctest::Approx(1.0));
  CHECK(s.sigma2 == doctest::Approx(0.5));

  s = kalman_update(state(7.0, 1.0, kNoNoise, 40.0), 1e9);
  CHECK(s.mu == doctest::Approx(7.0));
  CHECK(s.sigma2 == doctest::Approx(1.0));

  // gain = (4 + 1) / (4 + 1 + 4) = 5/9
  s = kalman_update(state(10.0, 4.0, 0.0, std::log(2.0)), 14.0);
  CHECK(s.mu == doctest::Approx(10.0 + 20.0 / 9.0).epsilon(1e-14));
  CHECK(s.sigma2 == doctest::Approx(4.0 / 9.0 * 5.0).epsilon(1e-14));
}

TEST_CASE("kalman_update moves the mean toward the observation") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> noise(0.0, 50.0);
  for (int i = 0; i < 500; ++i) {
    const auto s = random_state(gen);
    const double y = s.mu + noise(gen);
    const auto next = kalman_update(s, y);
    CHECK(next.mu >= std::min(s.mu, y));
    CHECK(next.mu <= std::max(s.mu, y));
    CHECK(next.sigma2 > 0.0);
    CHECK(next.sigma2 <= s.sigma2 + s.w() * s.w());
  }
}

TEST_CASE("noise gradient vanishes one predictive sd from the mean") {
  auto s = state(4.0, 1.5, 0.2, 0.7);
  s.gamma_noise = 0.1;
  const double xi = std::sqrt(predictive_params(s).variance);
  for (double y : {4.0 + xi, 4.0 - xi}) {
    const auto g = noise_gradient(s, y);
    CHECK(g.w_bar == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(g.v_bar == doctest::Approx(0.0).epsilon(1e-12));
    const auto next = noise_update(s, y);
    CHECK(next.w_bar == doctest::Approx(s.w_bar).epsilon(1e-12));
    CHECK(next.v_bar == doctest::Approx(s.v_bar).epsilon(1e-12));
  }
}

TEST_CASE("an observation at the mean shrinks the noise scales") {
  auto s = state(4.0, 1.5, 0.2, 0.7);
  s.gamma_noise = 0.1;
  const auto g = noise_gradient(s, 4.0);
  CHECK(g.w_bar > 0.0);
  CHECK(g.v_bar > 0.0);
  const auto next = noise_update(s, 4.0);
  CHECK(next.w_bar < s.w_bar);
  CHECK(next.v_bar < s.v_bar);

  s.w_bar_floor = 0.2;
  CHECK(noise_update(s, 4.0).w_bar == 0.2);
}

TEST_CASE("noise gradient matches finite differences of the negative log-likelihood") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> gamma(1e-4, 1e-2);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto s = random_state(gen);
    const auto [mean, var] = predictive_params(s);
    std::normal_distribution<double> y_dist(mean, 2.0 * std::sqrt(var));
    const double y = y_dist(gen);
    const auto [fw, fv] = oracle::fd_noise_gradient(y, s.mu, s.sigma2, s.w_bar, s.v_bar);
    const auto g = noise_gradient(s, y);
    // Skip draws sitting on the stationary ring where the relative error is
    // ill-conditioned.
    if (std::abs(fw) < 1e-6 || std::abs(fv) < 1e-6) continue;
    CHECK(std::abs(g.w_bar - fw) / std::abs(fw) <= 1e-5);
    CHECK(std::abs(g.v_bar - fv) / std::abs(fv) <= 1e-5);

    s.gamma_noise = gamma(gen);
    const auto next = noise_update(s, y);
    CHECK(next.w_bar == doctest::Approx(s.w_bar - s.gamma_noise * fw).epsilon(1e-9));
    CHECK(next.v_bar == doctest::Approx(s.v_bar - s.gamma_noise * fv).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("level_set endpoints score exactly tau") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> tau_dist(1e-12, 0.5);
  for (int i = 0; i < 1000; ++i) {
    const auto s = random_state(gen);
    const double tau = tau_dist(gen);
    const Interval iv = level_set(s, tau);
    REQUIRE(iv.is_bounded());
    CHECK(std::abs(score(s, iv.lo()) - tau) <= 1e-9);
    CHECK(std::abs(score(s, iv.hi()) - tau) <= 1e-9);
    CHECK(iv.contains(s.mu));
  }
}

TEST_CASE("level_set agrees with the density-form constant") {
  // c = -2 ln(2 tau s_max) - 2 ln sigma - ln(2 pi) with s_max the unnormalised
  // peak density gives the same half-width.
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> tau_dist(0.01, 0.49);
  for (int i = 0; i < 100; ++i) {
    const auto s = random_state(gen);
    const double tau = tau_dist(gen);
    const auto [mean, var] = predictive_params(s);
    const double sd = std::sqrt(var);
    const double s_max = oracle::gaussian_pdf(mean, mean, var);
    const double c = -2.0 * std::log(2.0 * tau * s_max) - 2.0 * std::log(sd) -
                     std::log(2.0 * std::numbers::pi);
    const Interval iv = level_set(s, tau);
    CHECK(iv.hi() - mean == doctest::Approx(sd * std::sqrt(c)).epsilon(1e-9));
  }
}

TEST_CASE("level_set boundary thresholds") {
  const auto s = state(100.0, 4.0, 0.5, 0.1);
  const double sd = std::sqrt(predictive_params(s).variance);

  const Interval peak = level_set(s, 0.5);
  REQUIRE(peak.is_bounded());
  CHECK(peak.width() == 0.0);
  CHECK(peak.lo() == 100.0);

  const Interval one_sd = level_set(s, 0.5 * std::exp(-0.5));
  CHECK(one_sd.lo() == doctest::Approx(100.0 - sd).epsilon(1e-12));
  CHECK(one_sd.hi() == doctest::Approx(100.0 + sd).epsilon(1e-12));

  CHECK(level_set(s, 0.5000001).is_empty());
  CHECK(level_set(s, 1.0).is_empty());
  CHECK(level_set(s, 0.0).is_full_line());
}

TEST_CASE("level_set is antitone in tau") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> tau_dist(0.0, 0.6);
  for (int i = 0; i < 500; ++i) {
    const auto s = random_state(gen);
    double t1 = tau_dist(gen);
    double t2 = tau_dist(gen);
    if (t1 > t2) std::swap(t1, t2);
    CHECK(level_set(s, t2).subset_of(level_set(s, t1)));
  }
}

TEST_CASE("make_kalman_state respects the floor") {
  KalmanSettings ks;
  ks.w_bar0 = 0.05;
  ks.v_bar0 = 0.1;
  ks.w_bar_floor = 0.1;
  const auto s = make_kalman_state(ks, 9.2);
  CHECK(s.mu == 9.2);
  CHECK(s.w_bar == 0.1);
  CHECK(s.sigma2 == doctest::Approx(std::exp(0.2)));
}

TEST_CASE("a far outlier moves the noise parameters by at most one clipped step") {
  auto s = state(5.0, 1e-4, -5.0, -5.0);
  s.w_bar_floor = -10.0;
  const auto after = noise_update(s, 5.0 + 1e4);
  CHECK(after.w_bar == doctest::Approx(s.w_bar + s.max_log_step));
  CHECK(after.v_bar == doctest::Approx(s.v_bar + s.max_log_step));
  const auto next = kalman_update(after, 5.0 + 1e4);
  CHECK(std::isfinite(next.mu));
  CHECK(next.sigma2 > 0.0);

  // Small steps are left alone.
  s = state(0.0, 1.0, 0.0, 0.0);
  s.w_bar_floor = -10.0;
  const auto g = noise_gradient(s, 0.5);
  CHECK(noise_update(s, 0.5).w_bar == doctest::Approx(-s.gamma_noise * g.w_bar));
}
