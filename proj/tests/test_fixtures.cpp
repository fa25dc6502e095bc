#include <gtest/gtest.h>

#include <algorithm>

#include "dntr/fixtures.hpp"

namespace fx = dntr::fixtures;

namespace {

dntr::Network case_net(int c) {
  fx::FixtureSpec spec;
  spec.case_id = c;
  return fx::gen_three_feeder(spec);
}

std::size_t argmin(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST(Feeders, FlexibleCounts) {
  const std::size_t expected[] = {6, 9, 12};
  for (int c = 1; c <= 3; ++c) EXPECT_EQ(case_net(c).num_flexible(), expected[c - 1]) << c;
  const auto all = case_net(4);
  EXPECT_EQ(all.num_flexible(), all.num_lines());
}

TEST(Feeders, Shape) {
  for (int c = 1; c <= 4; ++c) {
    const auto net = case_net(c);
    EXPECT_EQ(net.num_buses(), 39u);
    EXPECT_EQ(net.num_substations(), 3u);
    EXPECT_NE(net.find_line("L(1,2)"), dntr::Network::npos);
    EXPECT_NE(net.find_line("L(14,15)"), dntr::Network::npos);
    EXPECT_NE(net.find_line("L(27,28)"), dntr::Network::npos);
    EXPECT_TRUE(dntr::validate(net).ok());
  }
  EXPECT_NE(case_net(3).find_line("L(13,30)"), dntr::Network::npos);
  EXPECT_NE(case_net(1).find_line("L(6,19)"), dntr::Network::npos);
}

TEST(Feeders, FlexibleSetsAreNested) {
  const auto physical = case_net(4);
  std::vector<bool> prev(physical.num_lines(), false);
  for (int c = 1; c <= 4; ++c) {
    const auto net = case_net(c);
    // Lines added by later cases only ever appear; existing lines keep their data.
    for (const auto& line : net.lines) {
      const auto i = physical.find_line(line.id);
      ASSERT_NE(i, dntr::Network::npos);
      EXPECT_EQ(line.from, physical.lines[i].from);
      EXPECT_EQ(line.to, physical.lines[i].to);
      EXPECT_EQ(line.reactance, physical.lines[i].reactance);
      EXPECT_EQ(line.rating, physical.lines[i].rating);
      if (prev[i]) EXPECT_TRUE(line.flexible) << line.id;
    }
    std::fill(prev.begin(), prev.end(), false);
    for (const auto& line : net.lines)
      if (line.flexible) prev[physical.find_line(line.id)] = true;
  }
}

TEST(Feeders, Deterministic) {
  fx::FixtureSpec spec;
  spec.case_id = 2;
  EXPECT_EQ(fx::gen_three_feeder(spec), fx::gen_three_feeder(spec));
  EXPECT_THROW(fx::gen_three_feeder(fx::FixtureSpec{.case_id = 5}), std::invalid_argument);
}

TEST(Feeders, Uncongested) {
  fx::FixtureSpec spec;
  spec.uncongested = true;
  for (const auto& line : fx::gen_three_feeder(spec).lines) EXPECT_EQ(line.rating, spec.uncongested_rating);
}

TEST(Profiles, Normalize) {
  EXPECT_EQ(fx::normalize_profile(std::vector<double>{24, 30, 15}), (std::vector<double>{0.8, 1.0, 0.5}));
  EXPECT_EQ(fx::normalize_profile(std::vector<double>{7, 7, 7}), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(fx::normalize_profile(std::vector<double>{5}), (std::vector<double>{1.0}));
  EXPECT_THROW(fx::normalize_profile(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(fx::normalize_profile(std::vector<double>{0, 0}), std::invalid_argument);
  const auto curve = fx::normalize_profile(fx::reference_load_curve());
  EXPECT_EQ(*std::max_element(curve.begin(), curve.end()), 1.0);
  EXPECT_EQ(curve.size(), 24u);
}

TEST(Profiles, ReferencePriceShape) {
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const auto prices = fx::gen_price_profile(seed, fx::PriceShape::Reference);
    ASSERT_EQ(prices.size(), 24u);
    double avg[3] = {0, 0, 0};
    for (std::size_t t = 0; t < 24; ++t) {
      const auto hour = t + 1;
      const bool exception = hour == 7 || hour == 8 || hour == 20 || hour == 21;
      EXPECT_EQ(argmin(prices[t]), exception ? 0u : 1u) << "hour " << hour;
      for (std::size_t s = 0; s < 3; ++s) avg[s] += prices[t][s];
    }
    EXPECT_GT(avg[2], avg[0]);
    EXPECT_GT(avg[2], avg[1]);
    EXPECT_GT(prices[19][0], prices[18][0]);
    EXPECT_EQ(argmin(prices[11]), 1u);
    EXPECT_NE(argmin(prices[6]), 1u);
  }
}

TEST(Profiles, RandomPricesAreSeeded) {
  const auto a = fx::gen_price_profile(3, fx::PriceShape::Random);
  EXPECT_EQ(a, fx::gen_price_profile(3, fx::PriceShape::Random));
  EXPECT_NE(a, fx::gen_price_profile(4, fx::PriceShape::Random));
  for (const auto& hour : a)
    for (double p : hour) EXPECT_GT(p, 0.0);
}

TEST(Profiles, ScaleLoads) {
  const auto base = fx::make_day_problem({});
  const auto same = fx::scale_loads(base, 1.0);
  EXPECT_EQ(same.loads, base.loads);
  const auto ls2 = fx::scale_loads(base, 1.1);
  for (std::size_t t = 0; t < base.horizon; ++t)
    for (std::size_t n = 0; n < base.net.num_buses(); ++n) EXPECT_DOUBLE_EQ(ls2.loads[t][n], 1.1 * base.loads[t][n]);
  EXPECT_EQ(ls2.prices, base.prices);
  EXPECT_THROW(fx::scale_loads(base, 0.0), std::invalid_argument);
}

TEST(Profiles, DayProblemIsWellFormed) {
  const auto p = fx::make_day_problem({});
  EXPECT_NO_THROW(p.check());
  EXPECT_EQ(p.horizon, 24u);
  for (const auto& hour : p.loads)
    for (double d : hour) EXPECT_GT(d, 0.0);
}
