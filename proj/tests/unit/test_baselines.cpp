#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qcpto/baselines.hpp"
#include "qcpto/errors.hpp"
#include "qcpto/exact.hpp"

using namespace qcpto;

namespace {

std::vector<Worker> workers_at(std::vector<Vec2> where) {
  std::vector<Worker> out;
  for (std::size_t j = 0; j < where.size(); ++j) {
    Worker w;
    w.id = static_cast<int>(j);
    w.position = where[j];
    out.push_back(w);
  }
  return out;
}

}  // namespace

TEST(Go, IdOrderFillsUpToCapacity) {
  const QmkpInstance inst = QmkpInstance::uniform(QualityMatrix(3), {2});
  const auto workers = workers_at({{0, 0}});
  const std::vector<Vec2> pos(3, Vec2{1, 1});
  for (GoOrder order : {GoOrder::Fill, GoOrder::Nearest}) {
    const Assignment a = solve_go(inst, pos, workers, order);
    EXPECT_EQ(std::vector<int>(a.raw().begin(), a.raw().end()), (std::vector<int>{0, 0, -1}));
  }
}

TEST(Go, OrdersDiffer) {
  const QmkpInstance inst = QmkpInstance::uniform(QualityMatrix(2), {2, 3});
  const auto workers = workers_at({{0, 0}, {100, 0}});
  const std::vector<Vec2> pos{{1, 0}, {2, 0}};
  EXPECT_EQ(solve_go(inst, pos, workers, GoOrder::Nearest).load(0), 2);
  EXPECT_EQ(solve_go(inst, pos, workers, GoOrder::Fill).load(1), 2);
  EXPECT_EQ(go_order_from_string("fill"), GoOrder::Fill);
  EXPECT_EQ(to_string(GoOrder::Nearest), "nearest");
  EXPECT_THROW(go_order_from_string("random"), ConfigError);
}

TEST(Cpto, SpreadsUniformly) {
  const Assignment a = solve_cpto(QmkpInstance::uniform(QualityMatrix(4), {4, 4}));
  EXPECT_EQ(a.load(0), 2);
  EXPECT_EQ(a.load(1), 2);
  const Assignment tight = solve_cpto(QmkpInstance::uniform(QualityMatrix(6), {1, 2}));
  EXPECT_EQ(tight.assigned_count(), 3);
  EXPECT_EQ(solve_cpto(QmkpInstance::uniform(QualityMatrix(3), {0, 0})).assigned_count(), 0);
}

TEST(Cpto, SingleWorkerMatchesGo) {
  const QmkpInstance inst = QmkpInstance::uniform(QualityMatrix(5), {3});
  const auto workers = workers_at({{0, 0}});
  const std::vector<Vec2> pos(5);
  EXPECT_EQ(solve_cpto(inst), solve_go(inst, pos, workers));
}

TEST(Baselines, NeverBeatExactAndCptoMaximizesCount) {
  Rng rng(6);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const QmkpInstance inst = oracle::random_instance(seed + 4000, 9, 3);
    std::vector<Vec2> pos;
    for (int i = 0; i < inst.num_users(); ++i) pos.push_back({rng.uniform(0, 200), rng.uniform(0, 200)});
    std::vector<Vec2> where;
    for (int j = 0; j < inst.num_workers(); ++j) where.push_back({rng.uniform(0, 200), rng.uniform(0, 200)});
    const auto workers = workers_at(where);

    const Solution exact = solve_exact(inst);
    Assignment cpto = solve_cpto(inst);
    int total_cap = 0;
    for (int c : inst.capacity) total_cap += c;
    EXPECT_EQ(cpto.assigned_count(), std::min(inst.num_users(), total_cap));
    EXPECT_GE(cpto.assigned_count(), exact.assignment.assigned_count());

    repair_min_pair(cpto);
    ASSERT_TRUE(check_feasible(cpto, inst).feasible);
    EXPECT_LE(evaluate_objective(cpto, inst.quality), exact.objective + 1e-12);
    for (GoOrder order : {GoOrder::Fill, GoOrder::Nearest}) {
      Assignment go = solve_go(inst, pos, workers, order);
      repair_min_pair(go);
      ASSERT_TRUE(check_feasible(go, inst).feasible);
      EXPECT_LE(evaluate_objective(go, inst.quality), exact.objective + 1e-12);
    }
  }
}

TEST(Baselines, UnreachablePairsAreSkipped) {
  QmkpInstance inst = QmkpInstance::uniform(QualityMatrix(2), {2, 2});
  inst.load_limit[inst.index(0, 0)] = 0;
  const Assignment a = solve_cpto(inst);
  EXPECT_EQ(a.raw()[0], 1);
}
