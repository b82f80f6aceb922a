#include "ast/config_file.hpp"
#include "ast/crosswalk/crosswalk.hpp"
#include "ast/errors.hpp"

#include <gtest/gtest.h>

namespace ast {
namespace {

TEST(KeyValueConfig, ParsesSectionsListsAndComments) {
  const auto cfg = KeyValueConfig::parse(
      "# leading comment\n"
      "[experiment]\n"
      "solvers = mcts, grdrl   # trailing comment\n"
      "workers = 4\n"
      "match_budget = false\n"
      "[grdrl]\n"
      "kl_step = 0.05\n");
  EXPECT_EQ(cfg.get_int("experiment.workers", 1), 4);
  EXPECT_FALSE(cfg.get_bool("experiment.match_budget", true));
  EXPECT_EQ(cfg.get_strings("experiment.solvers", {}), (std::vector<std::string>{"mcts", "grdrl"}));
  EXPECT_DOUBLE_EQ(cfg.get_double("grdrl.kl_step", 0.1), 0.05);
  EXPECT_DOUBLE_EQ(cfg.get_double("grdrl.missing", 0.1), 0.1);
  EXPECT_FALSE(cfg.has("nothing.here"));
}

TEST(KeyValueConfig, BadNumbersAreConfigErrors) {
  const auto cfg = KeyValueConfig::parse("[a]\nx = 1.5abc\ny = yes-ish\n");
  EXPECT_THROW(cfg.get_double("a.x", 0), ConfigError);
  EXPECT_THROW(cfg.get_int("a.x", 0), ConfigError);
  EXPECT_THROW(cfg.get_bool("a.y", false), ConfigError);
}

TEST(KeyValueConfig, MissingFileIsConfigError) {
  EXPECT_THROW(KeyValueConfig::load("/nonexistent/file.ini"), ConfigError);
}

TEST(ScenarioConfig, EntriesRoundTrip) {
  crosswalk::ScenarioConfig c;
  c.dt = 0.05;
  c.horizon = 80;
  c.tracker_gain = 0.123456789012345;
  c.support.dims[2] = {-40.0, -30.0};
  KeyValueConfig kv;
  for (const auto& [k, v] : c.to_entries()) kv.set("scenario." + k, v);
  const auto back = crosswalk::ScenarioConfig::from_config(kv, "scenario");
  EXPECT_EQ(back.dt, c.dt);
  EXPECT_EQ(back.horizon, c.horizon);
  EXPECT_EQ(back.tracker_gain, c.tracker_gain);
  EXPECT_EQ(back.support.dims[2].lo, -40.0);
  EXPECT_EQ(back.support.dims[2].hi, -30.0);
}

TEST(ScenarioConfig, RejectsNonPositiveGeometry) {
  auto cfg = KeyValueConfig::parse("[scenario]\ndt = 0\n");
  EXPECT_ANY_THROW(crosswalk::ScenarioConfig::from_config(cfg, "scenario"));
}

}  // namespace
}  // namespace ast

namespace ast {
namespace {

TEST(KeyValueConfigUnread, TyposAreReported) {
  const auto cfg = KeyValueConfig::parse("[grdrl]\niterations = 3\niteratons = 4\n");
  EXPECT_EQ(cfg.get_int("grdrl.iterations", 0), 3);
  EXPECT_EQ(cfg.unread_keys(), std::vector<std::string>{"grdrl.iteratons"});
  EXPECT_THROW(cfg.reject_unread_keys(), ConfigError);
  // Asking for a key with a fallback counts as reading it.
  EXPECT_EQ(cfg.get_int("grdrl.iteratons", 0), 4);
  EXPECT_NO_THROW(cfg.reject_unread_keys());
}

}  // namespace
}  // namespace ast
