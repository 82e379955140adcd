#include <doctest.h>

#include <random>
#include <sstream>
#include <string>

#include "acon2/feeds.hpp"

using namespace acon2;

namespace {

Feed parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in, "feed.csv");
}

ParseError parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError("", 0, 0, "", "");
}

std::vector<BasePredictor> predictors(std::size_t k, std::uint64_t seed = 1) {
  KalmanSettings ks;
  ks.w_bar0 = -2.0;
  ks.v_bar0 = -2.0;
  ks.w_bar_floor = -6.0;
  std::vector<BasePredictor> out;
  for (std::size_t j = 0; j < k; ++j) {
    MvpConfig m;
    m.alpha_k = 0.1;
    m.seed = seed + j;
    out.emplace_back(PredictorKind::kMvpKalman, ks, m);
  }
  return out;
}

std::vector<Tick> noisy_ticks(std::size_t k, int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<Tick> ticks;
  for (int t = 0; t < n; ++t) {
    Tick tick{60LL * t, {}};
    for (std::size_t j = 0; j < k; ++j) tick.prices.push_back(10.0 + noise(gen));
    ticks.push_back(tick);
  }
  return ticks;
}

}  // namespace

TEST_CASE("parse a small feed") {
  const Feed f = parse("t,a,b\n1,10,11\n2,10.5,11.5\n");
  REQUIRE(f.sources == std::vector<std::string>{"a", "b"});
  REQUIRE(f.ticks.size() == 2);
  CHECK(f.ticks[0].timestamp == 1);
  CHECK(f.ticks[1].prices[0] == 10.5);
  CHECK(f.ticks[1].prices[1] == 11.5);

  const Feed g = parse("t,a,b\n1,,11\n");
  CHECK_FALSE(g.ticks[0].prices[0].has_value());
  CHECK(g.ticks[0].prices[1] == 11.0);
}

TEST_CASE("parse errors name the row and column") {
  auto e = parse_error("t,a,b\n1,10,11\n2,abc,1\n");
  CHECK(e.row() == 2);
  CHECK(e.line() == 3);
  CHECK(e.column() == "a");
  CHECK(std::string(e.what()).find("row 2") != std::string::npos);

  e = parse_error("t,a\n1,5\n1,6\n");
  CHECK(e.row() == 2);
  CHECK(std::string(e.what()).find("duplicate") != std::string::npos);

  CHECK(parse_error("t,a\n2,5\n1,6\n").row() == 2);
  CHECK(parse_error("").row() == 0);
  CHECK(parse_error("t,a,a\n1,1,1\n").row() == 0);
  CHECK(parse_error("t,a\n1,5,6\n").row() == 1);
  CHECK(parse_error("t,a\nx,5\n").column() == "t");
  CHECK(parse_error("t,a\n1,inf\n").column() == "a");
  CHECK(parse_error("t,a,b\n1,,\n").row() == 1);
}

TEST_CASE("with one source the consensus is the inflated base interval") {
  const auto ticks = noisy_ticks(1, 300, 5);
  ReplayOptions opt;
  opt.consensus = {1, 0, 0.25};
  opt.nu_policy = NuPolicy::kExplicit;
  for (const StepRecord& r : replay(ticks, predictors(1), opt)) {
    CHECK(r.consensus == r.inflated[0]);
    CHECK(r.pseudo_label == *r.labels[0]);
  }
}

TEST_CASE("a missing source votes with an empty interval") {
  auto ticks = noisy_ticks(3, 200, 6);
  for (std::size_t t = 100; t < 200; ++t) ticks[t].prices[2].reset();
  ReplayOptions opt;
  opt.consensus = {3, 1, 0.0};
  Replayer r(predictors(3), opt);
  for (std::size_t t = 0; t < ticks.size(); ++t) {
    const StepRecord rec = r.step(ticks[t]);
    if (t >= 100) {
      CHECK(rec.base[2].is_empty());
      // Two of three votes means both present sources must agree.
      if (rec.consensus.is_bounded()) {
        const double mid = 0.5 * (rec.consensus.lo() + rec.consensus.hi());
        CHECK(rec.inflated[0].contains(mid));
        CHECK(rec.inflated[1].contains(mid));
      }
      CHECK(rec.pseudo_label == doctest::Approx(0.5 * (*ticks[t].prices[0] + *ticks[t].prices[1])));
    }
  }
  // The absent source's predictor saw exactly the first 100 labels.
  CHECK(r.predictors()[2].mvp_state().updates == 99);
  CHECK(r.predictors()[0].mvp_state().updates == 199);
}

TEST_CASE("first-tick spread sets nu") {
  std::vector<Tick> ticks = {{0, {10.0, 10.4, 10.1}}, {1, {10.0, 10.0, 10.0}}};
  ReplayOptions opt;
  opt.consensus = {3, 1, 0.0};
  opt.nu_policy = NuPolicy::kFirstTickSpread;
  Replayer r(predictors(3), opt);
  r.step(ticks[0]);
  CHECK(r.consensus_config().nu == doctest::Approx(0.4));
}

TEST_CASE("replay is deterministic") {
  const auto ticks = noisy_ticks(3, 500, 7);
  ReplayOptions opt;
  opt.consensus = {3, 1, 0.0};
  const auto a = replay(ticks, predictors(3), opt);
  const auto b = replay(ticks, predictors(3), opt);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].consensus == b[i].consensus);
    CHECK(a[i].base == b[i].base);
  }
}

TEST_CASE("the interval at t does not depend on the label at t") {
  auto ticks = noisy_ticks(3, 200, 8);
  ReplayOptions opt;
  opt.consensus = {3, 1, 0.0};
  const auto a = replay(ticks, predictors(3), opt);
  for (std::size_t t : {std::size_t{1}, std::size_t{50}, std::size_t{199}}) {
    auto perturbed = ticks;
    for (auto& p : perturbed[t].prices) *p += 1e3;
    const auto b = replay(perturbed, predictors(3), opt);
    for (std::size_t i = 0; i <= t; ++i) {
      CHECK(a[i].consensus == b[i].consensus);
      CHECK(a[i].base == b[i].base);
    }
  }
}

TEST_CASE("replayer rejects malformed ticks") {
  ReplayOptions opt;
  opt.consensus = {2, 0, 0.0};
  Replayer r(predictors(2), opt);
  CHECK_THROWS_AS(r.step({0, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(r.step({0, {std::nullopt, std::nullopt}}), std::invalid_argument);
  r.step({5, {1.0, 1.0}});
  CHECK_THROWS_AS(r.step({5, {1.0, 1.0}}), std::invalid_argument);
}
