#include <gtest/gtest.h>

#include <set>

#include "ntbea/random.hpp"
#include "ntbea/search_space.hpp"
#include "ntbea/tuning.hpp"

using namespace ntbea;

TEST(SearchSpace, TuningSpaceSizes) {
  EXPECT_EQ(tuning::asteroids_space().size(), 336u);
  EXPECT_EQ(tuning::planet_wars_space().size(), 240u);
  EXPECT_EQ(tuning::asteroids_space().arities(), (std::vector<int>{7, 4, 2, 2, 3}));
  EXPECT_EQ(tuning::planet_wars_space().arities(), (std::vector<int>{5, 4, 2, 2, 3}));
}

TEST(SearchSpace, SizeIsProductOfArities) {
  EXPECT_EQ(SearchSpace({{"x", {true}}}).size(), 1u);
  EXPECT_EQ(SearchSpace::from_arities({2}).size(), 2u);
  const auto s = SearchSpace::from_arities({3, 3, 3});
  EXPECT_EQ(s.size(), 27u);
}

TEST(SearchSpace, EnumerationIsLexicographicAndBijective) {
  for (const auto& arities : std::vector<std::vector<int>>{{3, 3, 3}, {7, 4, 2, 2, 3}, {1, 5}, {2}}) {
    const auto s = SearchSpace::from_arities(arities);
    std::set<Point> seen;
    Point prev;
    for (std::uint64_t r = 0; r < s.size(); ++r) {
      const Point p = s.point_at(r);
      EXPECT_TRUE(s.contains(p));
      EXPECT_EQ(s.rank_of(p), r);
      if (r > 0) EXPECT_LT(prev, p);
      prev = p;
      seen.insert(p);
    }
    EXPECT_EQ(seen.size(), s.size());
  }
  const auto s = SearchSpace::from_arities({2, 3});
  EXPECT_EQ(s.point_at(1), (Point{0, 1}));
  EXPECT_EQ(s.point_at(3), (Point{1, 0}));
}

TEST(SearchSpace, ConstructionErrors) {
  EXPECT_THROW(SearchSpace(std::vector<Dimension>{}), ConfigError);
  EXPECT_THROW(SearchSpace(std::vector<Dimension>{Dimension{"x", {}}}), ConfigError);
  std::vector<Dimension> huge;
  for (int i = 0; i < 64; ++i) huge.push_back({"d" + std::to_string(i), {0L, 1L}});
  EXPECT_THROW(SearchSpace{huge}, ConfigError);
  huge.resize(62);
  EXPECT_NO_THROW(SearchSpace{huge});
}

TEST(SearchSpace, RandomPointForcedOnUnitArities) {
  const auto s = SearchSpace::from_arities({1, 1, 1});
  Rng rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(s.random_point(rng), (Point{0, 0, 0}));
}

TEST(SearchSpace, RandomPointUniformBinomial) {
  const auto s = SearchSpace::from_arities({4});
  Rng rng(derive_seed(42, 1));
  int counts[4] = {0, 0, 0, 0};
  const int n = 10000;
  for (int i = 0; i < n; ++i) ++counts[s.random_point(rng)[0]];
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  for (int c : counts) EXPECT_NEAR(c, 2500.0, 3 * sigma);
}

TEST(SearchSpace, RandomPointAlwaysValid) {
  const auto s = tuning::asteroids_space();
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) ASSERT_TRUE(s.contains(s.random_point(rng)));
}

TEST(SearchSpace, ValueOf) {
  const auto a = tuning::asteroids_space();
  const auto v = a.value_of({4, 2, 1, 1, 0});
  EXPECT_EQ(as_int(v[0]), 50);
  EXPECT_TRUE(std::holds_alternative<double>(v[1]));
  EXPECT_DOUBLE_EQ(as_double(v[1]), 2.0);
  EXPECT_EQ(v[2], Value{true});
  EXPECT_EQ(v[3], Value{true});
  EXPECT_EQ(as_int(v[4]), 1);

  const SearchSpace b({{"flag", {false, true}}});
  EXPECT_EQ(b.value_of({0})[0], Value{false});

  const auto p = tuning::decode(tuning::planet_wars_space(), {0, 0, 0, 0, 0});
  EXPECT_EQ(p, (rhea::Params{5, 0.0, false, false, 1}));
}

TEST(SearchSpace, ValueOfRejectsOutOfRange) {
  const auto a = tuning::asteroids_space();
  EXPECT_THROW(a.value_of({7, 0, 0, 0, 0}), InvariantError);
  EXPECT_THROW(a.value_of({0, 0, 0, 0}), InvariantError);
  EXPECT_THROW(a.value_of({-1, 0, 0, 0, 0}), InvariantError);
}

TEST(SearchSpace, ParseValue) {
  EXPECT_EQ(parse_value("true"), Value{true});
  EXPECT_EQ(parse_value("12"), Value{std::int64_t{12}});
  EXPECT_EQ(parse_value("2.0"), Value{2.0});
  EXPECT_EQ(to_string(Value{2.0}), "2.0");
  EXPECT_THROW(parse_value("abc"), ConfigError);
}
