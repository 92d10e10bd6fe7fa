#include <snapmem/errors.hpp>
#include <snapmem/literal.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace snapmem;

TEST(Bitset, SetOperations) {
  Bitset a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(64);
  b.set(100);
  EXPECT_EQ((a | b).count(), 4u);
  EXPECT_EQ((a & b).to_vector(), std::vector<std::size_t>{64});
  EXPECT_EQ((a - b).to_vector(), (std::vector<std::size_t>{0, 129}));
  EXPECT_TRUE(a.intersects(b));
  EXPECT_FALSE((a - b).intersects(b));
  EXPECT_TRUE((a & b).is_subset_of(a));
  EXPECT_FALSE(a.is_subset_of(b));
}

TEST(Bitset, PairSwapIsAnInvolution) {
  std::mt19937_64 rng(5);
  for (std::size_t width : {2u, 10u, 64u, 66u, 130u}) {
    Bitset a(width);
    for (std::size_t i = 0; i < width; ++i)
      if (rng() & 1) a.set(i);
    const Bitset s = a.pair_swapped();
    for (std::size_t i = 0; i < width; ++i) EXPECT_EQ(s.test(i), a.test(i ^ 1)) << width << " " << i;
    EXPECT_EQ(s.pair_swapped(), a);
  }
}

TEST(Literal, StarIsFixpointFreeInvolution) {
  for (Literal a = 0; a < 100; ++a) {
    EXPECT_NE(star(a), a);
    EXPECT_EQ(star(star(a)), a);
    EXPECT_EQ(sensor_of(a), sensor_of(star(a)));
  }
}

TEST(Sensorium, NamesAndParsing) {
  Sensorium s({"fwd", "back", "a1"}, {Degree::kTransition, Degree::kTransition, Degree::kState});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.zero(), 6u);
  EXPECT_EQ(s.one(), 7u);
  EXPECT_EQ(star(s.zero()), s.one());
  for (Literal a = 0; a < s.literal_count(); ++a) EXPECT_EQ(s.parse(s.name(a)), a);
  EXPECT_EQ(s.name(negative_literal(1)), "back*");
  EXPECT_EQ(s.degree_mask(Degree::kState).to_vector(), (std::vector<std::size_t>{4, 5}));
  EXPECT_THROW(s.parse("nope"), InputError);
}

TEST(Sensorium, RejectsBadNames) {
  EXPECT_THROW(Sensorium({"a", "a"}), InputError);
  EXPECT_THROW(Sensorium({"a*"}), InputError);
  EXPECT_THROW(Sensorium({""}), InputError);
  EXPECT_THROW(Sensorium({"0"}), InputError);
}

TEST(Sensorium, Selections) {
  const Sensorium s = Sensorium::anonymous(3);
  EXPECT_TRUE(is_complete_selection(s, s.make_set({0, 3, 4})));
  EXPECT_FALSE(is_complete_selection(s, s.make_set({0, 3})));
  EXPECT_FALSE(is_complete_selection(s, s.make_set({0, 3, 4, s.one()})));
  EXPECT_TRUE(is_star_selection(s.make_set({0, 3})));
  EXPECT_FALSE(is_star_selection(s.make_set({0, 1})));
  EXPECT_EQ(star_set(s.make_set({0, 3})), s.make_set({1, 2}));
}
