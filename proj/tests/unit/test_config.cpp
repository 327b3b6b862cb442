#include <gtest/gtest.h>

#include <filesystem>

#include "blochguide/config.hpp"
#include "blochguide/errors.hpp"
#include "blochguide/pipeline.hpp"
#include "support.hpp"

using namespace blochguide;

TEST(Config, DefaultsMirrorFirstExperiment) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.geometry.eps, 1.0);
  EXPECT_EQ(c.geometry.R, 15);
  EXPECT_EQ(c.geometry.L, 6);
  EXPECT_EQ(c.geometry.K, 14);
  EXPECT_EQ(c.geometry.n1, 20);
  EXPECT_EQ(c.geometry.n2, 19);
  EXPECT_DOUBLE_EQ(c.omega, 0.2 * testing_support::kPi);
  EXPECT_EQ(c.delta, 1e-4);
  EXPECT_EQ(c.source.kind, SourceConfig::Kind::incoming);
  EXPECT_EQ(c.source.q, 1);
  EXPECT_EQ(c.source.d, 1.0);
  EXPECT_EQ(c.sampling, CoefficientSampling::grid_node);
  EXPECT_TRUE(c.medium.left.is_constant());
  EXPECT_EQ(c.medium.right.kind, Material::Kind::discs);
  const auto j = resolve_incoming(c);
  EXPECT_NEAR(j[0], 0.440, 5e-4);
  EXPECT_NEAR(j[1], 0.449, 5e-4);
}

TEST(Config, RoundTripIsIdentity) {
  for (const auto& entry : std::filesystem::directory_iterator(BLOCHGUIDE_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    SCOPED_TRACE(entry.path().string());
    const auto first = load_config(entry.path());
    const auto text = serialize_config(first);
    const auto second = parse_config(text);
    EXPECT_EQ(serialize_config(second), text);
  }
}

TEST(Config, RoundTripOfEveryVariant) {
  RunConfig c;
  c.medium.slab = hole_crystal();
  c.medium.slab_cells = 10;
  c.medium.right = Material::laminate({0.3, 0.6}, {1.0, 0.5, 2.0});
  c.sampling = CoefficientSampling::cell_average;
  c.source.kind = SourceConfig::Kind::gaussian;
  c.source.center = {-2.0, 1.5};
  c.selection.c0 = 1e-7;
  c.a_star = 0.17;
  const auto text = serialize_config(c);
  EXPECT_EQ(serialize_config(parse_config(text)), text);

  c.source = {};
  c.source.j_in = Vec2{0.6, 0.1};
  c.source.amplitude = {0.5, -0.25};
  EXPECT_EQ(serialize_config(parse_config(serialize_config(c))), serialize_config(c));
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config(R"({"omega": -1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"delta": -1e-3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"omgea": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"geometry": {"K": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"source": {"kind": "laser"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"medium": {"sampling": "random"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"sweep": {"deltas": [1e-3, 1e-2]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"omega": "fast"})"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, IncomingWaveResolution) {
  auto c = parse_config(R"({"omega": 1.85, "source": {"kind": "incoming", "q": 3}})");
  const auto j = resolve_incoming(c);
  EXPECT_TRUE(incoming_admissible(1.85, j));
  c.source.j_in = Vec2{1.269, 1.346};
  EXPECT_THROW(resolve_incoming(c), ConfigError);
  c.source.j_in = j;
  EXPECT_EQ(resolve_incoming(c), j);
  c.source.j_in = Vec2{std::sqrt(1.85 * 1.85 - 1.0), 1.0};
  EXPECT_THROW(resolve_incoming(c), ConfigError);
  c.source.j_in.reset();
  c.medium.left = Material::constant(2.0);
  EXPECT_THROW(resolve_incoming(c), ConfigError);
}
