#include <gtest/gtest.h>

#include "config.hpp"
#include "tasks.hpp"
#include "zoo.hpp"

using namespace perilimit;
using namespace perilimit::cli;

TEST(RunConfig, Defaults) {
  const RunConfig cfg;
  EXPECT_EQ(cfg.text("run", "task"), "recoverability");
  EXPECT_EQ(cfg.integer("run", "dim"), 3);
  EXPECT_TRUE(cfg.is_auto("potential", "c"));
  EXPECT_EQ(cfg.reals("converge", "deltas"), (std::vector<double>{0.2, 0.1, 0.05, 0.025}));
  EXPECT_FALSE(cfg.flag("converge", "interior_only"));
}

TEST(RunConfig, ParsesIni) {
  RunConfig cfg;
  cfg.load_text(
      "; comment\n"
      "[run]\ntask = convexify\nseed = 9\n"
      "[density]\nkind = mooney-rivlin\ng.kind = power\ng.p = 3\n"
      "[converge]\ndeltas = 0.4, 0.2\ninterior_only = yes\n");
  EXPECT_EQ(cfg.text("run", "task"), "convexify");
  EXPECT_EQ(cfg.integer("run", "seed"), 9);
  EXPECT_EQ(cfg.text("density", "g.kind"), "power");
  EXPECT_EQ(cfg.real("density", "g.p"), 3.0);
  EXPECT_EQ(cfg.reals("converge", "deltas"), (std::vector<double>{0.4, 0.2}));
  EXPECT_TRUE(cfg.flag("converge", "interior_only"));
}

TEST(RunConfig, ParsesJsonWithNestedKeys) {
  RunConfig cfg;
  cfg.load_text(R"({"run": {"task": "converge", "threads": 2},
                    "density": {"g": {"kind": "well", "c": 0.5}},
                    "potential": {"c": 2.5},
                    "converge": {"deltas": [0.2, 0.1]}})");
  EXPECT_EQ(cfg.text("run", "task"), "converge");
  EXPECT_EQ(cfg.integer("run", "threads"), 2);
  EXPECT_EQ(cfg.real("density", "g.c"), 0.5);
  EXPECT_FALSE(cfg.is_auto("potential", "c"));
  EXPECT_EQ(cfg.real("potential", "c"), 2.5);
  EXPECT_EQ(cfg.reals("converge", "deltas"), (std::vector<double>{0.2, 0.1}));
}

TEST(RunConfig, RejectsUnknownAndMistyped) {
  RunConfig cfg;
  EXPECT_THROW(cfg.load_text("[run]\ncolour = red\n"), ConfigError);
  EXPECT_THROW(cfg.load_text("[nowhere]\nx = 1\n"), ConfigError);
  EXPECT_THROW(cfg.load_text("task = convexify\n"), ConfigError);
  EXPECT_THROW(cfg.load_text("[run]\nseed = abc\n"), ConfigError);
  EXPECT_THROW(cfg.load_text("[run]\ndim = 2.5\n"), ConfigError);
  EXPECT_THROW(cfg.load_text("[converge]\ninterior_only = maybe\n"), ConfigError);
  EXPECT_THROW(cfg.load_text(R"({"run": {"seed": "x"}})"), ConfigError);
  EXPECT_THROW(cfg.load_text("{ not json"), ConfigError);
  EXPECT_THROW(cfg.set("density", "g.nothing", "1"), ConfigError);
}

TEST(RunConfig, JsonRoundtrip) {
  RunConfig cfg;
  cfg.set("density", "g.kind", "power");
  cfg.set("converge", "sides", "2, 1");
  RunConfig back;
  back.load_text(cfg.to_json().dump());
  EXPECT_EQ(back.to_json(), cfg.to_json());
  EXPECT_EQ(cfg.to_json()["density"]["g"]["kind"], "power");
}

TEST(Zoo, DensitiesFromConfig) {
  RunConfig cfg;
  cfg.set("density", "kind", "mooney-rivlin");
  const StoredEnergy mr = density_from_config(cfg);
  EXPECT_EQ(mr.label(), "mooney-rivlin");
  // |I|^2 + |cof I|^2 + (det I - 1)^2
  EXPECT_EQ(mr(Matrix::identity(3)).value(), 6.0);
  cfg.set("density", "kind", "rubber");
  EXPECT_THROW(density_from_config(cfg), ConfigError);
  cfg.set("density", "kind", "mooney-rivlin");
  cfg.set("density", "alpha", "-1");
  EXPECT_THROW(density_from_config(cfg), ConfigError);
}

TEST(Zoo, PotentialFromConfig) {
  const RunConfig cfg;
  const PairwisePotential w = potential_from_config(cfg, 3);
  EXPECT_EQ(w.homogeneity(), 0.0);
  // auto c = n / sigma_{n-1}, so w(e1, e1) = 3 / (4 pi)
  EXPECT_NEAR(w(Vector{1.0, 0.0, 0.0}, Vector{1.0, 0.0, 0.0}), 3.0 / (4.0 * M_PI), 1e-15);
}

TEST(Zoo, ProfileJsonRoundtrip) {
  for (const auto& g : {ScalarProfile::power(2.0, 3.0), ScalarProfile::well(0.5), ScalarProfile::indicator_of_one(1e-6),
                        ScalarProfile::affine_in_square(1.0, -2.0)}) {
    const ScalarProfile back = profile_from_json(profile_to_json(g));
    EXPECT_EQ(profile_to_json(back), profile_to_json(g));
    for (double t : {0.0, 0.5, 1.0, 2.0}) EXPECT_EQ(back(t), g(t));
  }
  EXPECT_THROW(profile_to_json(ScalarProfile::custom("c", [](double t) { return ExtendedReal(t); })), ConfigError);
}

TEST(Zoo, ListingIsStable) {
  const std::string text = list_zoo();
  for (const char* name : {"mooney-rivlin", "neo-hookean", "incompressible-mr", "power-bond", "profile-cof"}) {
    EXPECT_NE(text.find(name), std::string::npos) << name;
  }
  EXPECT_EQ(text, list_zoo());
  EXPECT_NE(describe_schema().find("cells_per_delta"), std::string::npos);
}

TEST(Tasks, SummaryWithoutTimestampIsDeterministic) {
  RunConfig cfg;
  cfg.set("run", "task", "quadrature-check");
  const TaskOutcome a = run_task(cfg);
  const TaskOutcome b = run_task(cfg);
  EXPECT_EQ(a.exit_code, kExitPass);
  const Json sa = make_summary(cfg, a, false);
  EXPECT_EQ(sa.dump(), make_summary(cfg, b, false).dump());
  EXPECT_FALSE(sa.contains("timestamp"));
  EXPECT_TRUE(make_summary(cfg, a, true).contains("timestamp"));
  EXPECT_EQ(sa.begin().key(), "tool");
}

TEST(Tasks, UnknownTaskIsAConfigError) {
  RunConfig cfg;
  cfg.set("run", "task", "dance");
  EXPECT_THROW(run_task(cfg), ConfigError);
}
