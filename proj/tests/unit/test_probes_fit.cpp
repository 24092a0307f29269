#include <gtest/gtest.h>

#include <json.hpp>

#include "common.hpp"
#include "modspec/norms.hpp"
#include "modspec/probes.hpp"

using namespace modspec;

TEST(Fit, LeastSquaresRecoversLine) {
  std::vector<double> x, y;
  for (int i = 0; i < 7; ++i) {
    x.push_back(0.5 * i - 1);
    y.push_back(-1.25 * x.back() + 3);
  }
  const auto f = least_squares(x, y);
  EXPECT_NEAR(f.slope, -1.25, 1e-14);
  EXPECT_NEAR(f.intercept, 3, 1e-14);
  EXPECT_NEAR(f.r2, 1, 1e-14);
  EXPECT_EQ(f.points, 7);
  EXPECT_EQ(least_squares({0, 1, 2}, {4, 4, 4}).r2, 1);
  EXPECT_THROW(least_squares({1}, {1}), std::invalid_argument);
  EXPECT_THROW(least_squares({2, 2}, {1, 3}), std::invalid_argument);
}

TEST(Fit, ResidualLowersR2) {
  const auto f = least_squares({0, 1, 2, 3}, {0, 1.2, 1.8, 3.1});
  EXPECT_LT(f.r2, 1);
  EXPECT_GT(f.r2, 0.9);
}

TEST(Fit, LogLogPowerLaw) {
  std::vector<double> t, y;
  for (double v : {1.0, 2.0, 4.0, 10.0, 30.0}) {
    t.push_back(v);
    y.push_back(7 * std::pow(v, -0.5));
  }
  const auto f = log_log_fit(t, y);
  EXPECT_NEAR(f.slope, -0.5, 1e-13);
  EXPECT_NEAR(std::exp(f.intercept), 7, 1e-12);
  EXPECT_THROW(log_log_fit({1, 2}, {1, 0}), std::invalid_argument);
}

TEST(Fit, Spread) {
  EXPECT_EQ(spread({}), 1);
  EXPECT_EQ(spread({0, 0}), 1);
  EXPECT_EQ(spread({2, 0, 8, 4}), 4);
}

TEST(ParamsTest, ScalarListAndFallback) {
  Params p{{"k", {4, 8}}, {"s", {1.5}}};
  EXPECT_EQ(p.get("s", 0), 1.5);
  EXPECT_EQ(p.get("missing", -1), -1);
  EXPECT_EQ(p.list("k", {}), (std::vector<double>{4, 8}));
  EXPECT_EQ(p.list("missing", {1}), std::vector<double>{1});
  EXPECT_THROW(p.get("k", 0), std::invalid_argument);
  p.set("k", 3.0);
  EXPECT_EQ(p.get("k", 0), 3);
}

TEST(RatioVerdict, SpreadAgainstBound) {
  double m = 0;
  EXPECT_EQ(ratio_verdict({1, 2, 3}, 10, &m), Verdict::Pass);
  EXPECT_EQ(m, 3);
  EXPECT_EQ(ratio_verdict({1, 20}, 10, &m), Verdict::Fail);
  EXPECT_EQ(ratio_verdict({1, 10}, 10), Verdict::Fail);
  EXPECT_EQ(ratio_verdict({1, NAN}, 10, &m), Verdict::Fail);
  EXPECT_TRUE(std::isinf(m));
}

TEST(Report, JsonAndCsvShape) {
  ProbeReport r;
  r.name = "demo";
  r.kind = "ratio";
  r.columns = {"k", "t"};
  r.rows = {SweepRow{{4, 0.5}, 1.25, NAN}, SweepRow{{8, kInf}, 2.5, 3}};
  r.measured = 2;
  r.tolerance = 10;
  r.verdict = Verdict::Pass;
  r.grid = testing_support::small_grid();
  r.metrics["ratio_spread"] = 2;
  const auto j = nlohmann::json::parse(r.to_json(false));
  EXPECT_EQ(j["probe"], "demo");
  EXPECT_EQ(j["verdict"], "pass");
  EXPECT_TRUE(j["theoretical"].is_null());
  EXPECT_EQ(j["sweep"].size(), 2u);
  EXPECT_TRUE(j["sweep"][0]["theoretical"].is_null());
  EXPECT_EQ(j["sweep"][1]["t"], "inf");
  EXPECT_EQ(j["grid"]["N"][0], 64);
  EXPECT_FALSE(j.contains("timestamp"));
  EXPECT_TRUE(nlohmann::json::parse(r.to_json())["timestamp"].is_string());
  EXPECT_EQ(r.to_csv(), "# schema=1\nk,t,measured,theoretical\n4,0.5,1.25,nan\n8,inf,2.5,3\n");
}

TEST(Registry, NamesSuffixesAndSuite) {
  const auto names = probe_names();
  EXPECT_EQ(names.size(), 11u);
  for (const auto& n : names) {
    ASSERT_NE(find_probe(n), nullptr);
    EXPECT_EQ(find_probe(n + "_probe"), find_probe(n));
  }
  EXPECT_EQ(find_probe("gwp_experiment")->name, "gwp");
  EXPECT_EQ(find_probe("nonexistent"), nullptr);
  EXPECT_EQ(find_probe("_probe"), nullptr);
  EXPECT_EQ(find_probe("decay")->tolerance_key, "tolerance");
  EXPECT_EQ(default_suite(), names);
  EXPECT_THROW(run_probe("nonexistent", ProbeContext{}), std::invalid_argument);
}

TEST(Sensitivity, DoubledGridKeepsSpacing) {
  const GridSpec g = testing_support::small_grid();
  const GridSpec d = doubled(g);
  EXPECT_EQ(d.points[0], 128);
  EXPECT_DOUBLE_EQ(d.length[1], 2 * g.length[1]);
  EXPECT_DOUBLE_EQ(d.kmax(0), g.kmax(0));
  EXPECT_DOUBLE_EQ(d.dxi(0), g.dxi(0) / 2);
}

namespace {

// Passes on grids with at most `limit` points per axis.
ProbeEntry fake(int limit, bool sensitivity = true) {
  return {"fake",
          [limit](const ProbeContext& ctx) {
            ProbeReport r;
            r.measured = ctx.grid.points[0];
            r.verdict = ctx.grid.points[0] <= limit ? Verdict::Pass : Verdict::Fail;
            if (limit < 0) r.verdict = ctx.grid.points[0] > 64 ? Verdict::Inconclusive : Verdict::Pass;
            return r;
          },
          sensitivity};
}

}  // namespace

TEST(Sensitivity, VerdictFlipBecomesUnstable) {
  ProbeContext ctx;
  ctx.grid = testing_support::small_grid();
  ctx.seed = 42;
  const auto stable = run_probe(fake(1000), ctx);
  EXPECT_EQ(stable.verdict, Verdict::Pass);
  EXPECT_EQ(stable.name, "fake");
  EXPECT_EQ(stable.seed, 42u);
  EXPECT_TRUE(stable.sensitivity.evaluated);
  EXPECT_EQ(stable.sensitivity.value_2L, 128);
  EXPECT_DOUBLE_EQ(stable.sensitivity.drift(), 1);

  const auto flip = run_probe(fake(64), ctx);
  EXPECT_EQ(flip.verdict, Verdict::Unstable);
  ASSERT_FALSE(flip.notes.empty());
  EXPECT_NE(flip.notes.back().find("flips"), std::string::npos);

  EXPECT_EQ(run_probe(fake(10), ctx).verdict, Verdict::Fail);
  EXPECT_EQ(run_probe(fake(64), ctx, false).verdict, Verdict::Pass);
  EXPECT_FALSE(run_probe(fake(64, false), ctx).sensitivity.evaluated);
  const auto inc = run_probe(fake(-1), ctx);
  EXPECT_EQ(inc.verdict, Verdict::Pass);
  EXPECT_EQ(inc.notes.back(), "2L run inconclusive");
}

TEST(Probes, ResolutionErrorsOnUndersizedGrid) {
  ProbeContext ctx;
  ctx.grid = testing_support::small_grid();
  EXPECT_THROW(smoothing_probe(ctx), std::out_of_range);
}

TEST(Probes, L2DecayRateIsZeroOnDeskGrid) {
  ProbeContext ctx;
  ctx.grid = GridSpec::cube(2, 8 * std::numbers::pi, 320);
  ctx.params.set("p", 2.0);
  const auto r = decay_probe(ctx);
  EXPECT_EQ(r.verdict, Verdict::Pass) << r.to_json(false);
  EXPECT_NEAR(r.measured, 0, 1e-6);
  EXPECT_EQ(r.theoretical, 0);
}
