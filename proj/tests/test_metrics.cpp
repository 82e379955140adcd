#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "acon2/metrics.hpp"
#include "oracles.hpp"

using namespace acon2;

TEST_CASE("pseudo label is the median") {
  CHECK(pseudo_label(std::vector<double>{9.3734, 9.1802, 9.1418}) == 9.1802);
  CHECK(pseudo_label(std::vector<double>{1.0, 3.0}) == 2.0);
  CHECK(pseudo_label(std::vector<double>{5.0}) == 5.0);
  CHECK(pseudo_label(std::vector<double>{4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(pseudo_label(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("miscover semantics") {
  CHECK(miscovers(Interval::empty(), 1.0));
  CHECK_FALSE(miscovers(Interval::full_line(), 1e300));
  CHECK_FALSE(miscovers(Interval::bounded(0, 1), 1.0));
  CHECK(miscovers(Interval::bounded(0, 1), 1.0000001));
}

TEST_CASE("miscoverage rates") {
  bool flags100[100] = {};
  CHECK(miscoverage_rate(flags100) == 0.0);
  flags100[37] = true;
  CHECK(miscoverage_rate(flags100) == doctest::Approx(0.01));

  const bool flags[] = {true, false, false, true};
  const auto prefix = prefix_miscoverage(flags);
  REQUIRE(prefix.size() == 4);
  CHECK(prefix[0] == 1.0);
  CHECK(prefix[1] == 0.5);
  CHECK(prefix[2] == doctest::Approx(1.0 / 3.0));
  CHECK(prefix[3] == 0.5);
  CHECK_THROWS_AS(miscoverage_rate(std::span<const bool>{}), std::invalid_argument);
}

TEST_CASE("set size") {
  CHECK(set_size(Interval::bounded(1, 4)) == 3.0);
  CHECK(set_size(Interval::bounded(2, 2)) == 0.0);
  CHECK_FALSE(set_size(Interval::empty()).has_value());
  CHECK_FALSE(set_size(Interval::full_line()).has_value());
}

TEST_CASE("twap from cumulative prices") {
  CHECK(twap(0.0, 5.0 * 30.0, 0.0, 30.0) == 5.0);
  // 1 for 10 s then 3 for 10 s.
  CHECK(twap(0.0, 10.0 + 30.0, 0.0, 20.0) == 2.0);
  CHECK_THROWS_AS(twap(0.0, 1.0, 5.0, 5.0), std::invalid_argument);
}

TEST_CASE("twap window on simple paths") {
  TwapWindow w(20);
  CHECK_FALSE(w.value().has_value());
  w.observe(0, 1.0);
  CHECK(w.value() == 1.0);
  w.observe(10, 3.0);
  w.observe(20, 7.0);
  // [0,20): 1 then 3 -> 2. The newest price has not held yet.
  CHECK(*w.value() == doctest::Approx(2.0));

  TwapWindow c(1800);
  for (std::int64_t t = 0; t < 100; ++t) c.observe(60 * t, 42.0);
  CHECK(*c.value() == doctest::Approx(42.0).epsilon(1e-15));
  CHECK_THROWS_AS(c.observe(0, 1.0), std::invalid_argument);
}

TEST_CASE("a one-tick manipulation moves the twap by its time share") {
  TwapWindow w(600);
  std::vector<long long> times;
  std::vector<double> values;
  for (long long t = 0; t <= 1200; t += 60) {
    const double p = (t == 900) ? 4000.0 : 2000.0;
    w.observe(t, p);
    times.push_back(t);
    values.push_back(p);
  }
  // Spot 4000 held over [900, 960) inside the window [600, 1200).
  const double expected = oracle::step_function_mean(times, values, 600, 1200);
  CHECK(expected == doctest::Approx(2000.0 + 2000.0 * 60.0 / 600.0));
  CHECK(*w.value() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("twap window matches direct summation on random step functions") {
  std::mt19937_64 gen(12);
  std::uniform_int_distribution<int> gap(1, 120);
  std::lognormal_distribution<double> price(7.0, 0.3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::int64_t window = 60 + static_cast<std::int64_t>(gen() % 3000);
    TwapWindow w(window);
    std::vector<long long> times;
    std::vector<double> values;
    long long t = static_cast<long long>(gen() % 1000);
    for (int i = 0; i < 200; ++i) {
      const double p = price(gen);
      w.observe(t, p);
      times.push_back(t);
      values.push_back(p);
      if (t > times.front()) {
        const long long start = std::max<long long>(times.front(), t - window);
        const double expected = oracle::step_function_mean(times, values, start, t);
        REQUIRE(*w.value() == doctest::Approx(expected).epsilon(1e-9));
      }
      t += gap(gen);
    }
  }
}

TEST_CASE("quantile interpolates") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({0, 10}, 0.25) == 2.5);
  CHECK(quantile({5}, 0.9) == 5.0);
  CHECK_THROWS(quantile({}, 0.5));
}

TEST_CASE("summarize counts steps") {
  std::vector<StepRecord> recs(10);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    StepRecord& r = recs[i];
    r.index = i + 1;
    r.labels = {1.0};
    r.base = {Interval::bounded(0, 2)};
    r.inflated = r.base;
    r.pseudo_label = 1.0;
    r.consensus = Interval::bounded(0, static_cast<double>(i + 1));
    r.size = set_size(r.consensus);
  }
  recs[0].consensus = Interval::empty();
  recs[0].idk = true;
  recs[0].miscover = true;
  recs[0].size.reset();
  recs[1].consensus = Interval::full_line();
  recs[1].size.reset();
  recs[9].labels = {5.0};

  const Summary s = summarize(recs, 2);
  CHECK(s.steps == 10);
  CHECK(s.miscoverage == doctest::Approx(0.1));
  CHECK(s.miscoverage_after_warmup == 0.0);
  CHECK(s.idk_count == 1);
  CHECK(s.full_line_count == 1);
  CHECK(s.idk_fraction == doctest::Approx(0.1));
  REQUIRE(s.size_quantiles.size() == 7);
  CHECK(s.size_quantiles.front() == 3.0);
  CHECK(s.size_quantiles.back() == 10.0);
  CHECK(s.mean_size == doctest::Approx(6.5));
  CHECK(s.base_miscoverage[0] == doctest::Approx(0.1));
  CHECK_FALSE(s.sigma_miscoverage.has_value());
  CHECK_FALSE(s.twap_mean_abs_error.has_value());
  CHECK_THROWS_AS(summarize(std::span<const StepRecord>{}, 0), std::invalid_argument);
}
