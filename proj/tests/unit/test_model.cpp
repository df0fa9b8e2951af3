#include <gtest/gtest.h>

#include "qcpto/model.hpp"
#include "qcpto/rng.hpp"

using namespace qcpto;

namespace {

std::vector<User> two_users() {
  User a;
  a.id = 0;
  a.data_rate = {15e6};
  User b = a;
  b.id = 1;
  return {a, b};
}

std::vector<Worker> one_worker() {
  Worker w;
  w.position = {0.0, 0.0};
  return {w};
}

}  // namespace

TEST(ValidateScenario, WellFormedScenarioHasNoViolations) {
  EXPECT_TRUE(validate_scenario(two_users(), one_worker(), Region{}).empty());
}

TEST(ValidateScenario, ZeroDeadlineIsNamed) {
  auto users = two_users();
  users[1].task.deadline_s = 0.0;
  const auto v = validate_scenario(users, one_worker(), Region{});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "deadline_kappa");
  EXPECT_EQ(v[0].id, 1);
}

TEST(ValidateScenario, NegativeCpuIsNamed) {
  auto workers = one_worker();
  workers[0].cpu_hz = -1.0;
  const auto v = validate_scenario(two_users(), workers, Region{});
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].field, "cpu_capacity");
}

TEST(ValidateScenario, FlagsRatesAndFovShape) {
  auto users = two_users();
  users[0].data_rate = {0.0};
  users[1].fov_half_angle = 2.0;
  const auto v = validate_scenario(users, one_worker(), Region{});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].field, "data_rate");
  EXPECT_EQ(v[1].field, "fov_half_angle");
}

TEST(Angles, NormalizeHeadingLandsInRange) {
  EXPECT_DOUBLE_EQ(normalize_heading(-std::numbers::pi / 2), 1.5 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(normalize_heading(2.0 * std::numbers::pi), 0.0);
  EXPECT_NEAR(wrap_angle(1.5 * std::numbers::pi), -std::numbers::pi / 2, 1e-15);
}

TEST(Assignment, LoadsFollowMoves) {
  Assignment a(3, 2);
  a.assign(0, 1);
  a.assign(1, 1);
  a.assign(0, 0);
  EXPECT_EQ(a.load(0), 1);
  EXPECT_EQ(a.load(1), 1);
  EXPECT_EQ(a.assigned_count(), 2);
  a.unassign(0);
  EXPECT_FALSE(a.worker_of(0).has_value());
  EXPECT_EQ(a.used_workers(), 1);
}

// Random mutation: the incrementally kept loads always match a recount and
// no user ever sits on two workers.
TEST(Assignment, IncrementalLoadsMatchRecount) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(12));
    const int m = 1 + static_cast<int>(rng.below(4));
    Assignment a(n, m);
    for (int step = 0; step < 50; ++step) {
      const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (rng.coin()) {
        a.assign(u, static_cast<int>(rng.below(static_cast<std::uint64_t>(m))));
      } else {
        a.unassign(u);
      }
      std::vector<int> recount(static_cast<std::size_t>(m), 0);
      int assigned = 0;
      for (int w : a.raw()) {
        if (w >= 0) {
          ++recount[static_cast<std::size_t>(w)];
          ++assigned;
        }
      }
      for (int j = 0; j < m; ++j) ASSERT_EQ(a.load(j), recount[static_cast<std::size_t>(j)]);
      ASSERT_EQ(a.assigned_count(), assigned);
    }
  }
}

TEST(Rng, DerivedStreamsAreReproducible) {
  Rng a(derive_seed(5, 1, 2));
  Rng b(derive_seed(5, 1, 2));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
  Rng c(3);
  for (int i = 0; i < 1000; ++i) {
    const auto v = c.below(7);
    ASSERT_LT(v, 7u);
    const double u = c.unit();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}
