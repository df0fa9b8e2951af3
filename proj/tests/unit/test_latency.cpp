#include <gtest/gtest.h>

#include "qcpto/errors.hpp"
#include "qcpto/latency.hpp"

using namespace qcpto;

TEST(ComputeDelay, SharedCpuScalesWithLoad) {
  EXPECT_DOUBLE_EQ(compute_delay(2e8, 2e9, 1), 0.1);
  EXPECT_DOUBLE_EQ(compute_delay(2e8, 2e9, 4), 0.4);
  EXPECT_DOUBLE_EQ(compute_delay(0.0, 2e9, 3), 0.0);
  EXPECT_THROW(compute_delay(2e8, 0.0, 1), DomainError);
  EXPECT_THROW(compute_delay(2e8, 2e9, 0), DomainError);
}

TEST(TransmitDelay, FrameOverRate) {
  EXPECT_NEAR(transmit_delay(2e5, 15e6), 0.0133333333333, 1e-9);
  EXPECT_DOUBLE_EQ(transmit_delay(0.0, 15e6), 0.0);
  EXPECT_DOUBLE_EQ(transmit_delay(2e5, 30e6), 0.5 * transmit_delay(2e5, 15e6));
  EXPECT_THROW(transmit_delay(2e5, 0.0), DomainError);
}

TEST(ResponseLatency, SumsComponents) {
  User u;
  u.data_rate = {15e6};
  Worker w;
  w.cpu_hz = 2e9;
  const auto b = response_latency(u, w, 2);
  EXPECT_NEAR(b.total, 0.2133333333333, 1e-9);
  EXPECT_DOUBLE_EQ(b.total, b.compute + b.transmit);

  u.data_rate = {1e300};
  EXPECT_NEAR(response_latency(u, w, 1).total, 0.1, 1e-12);
}

TEST(WorkerCapacity, FloorOfDeadlineBound) {
  EXPECT_EQ(worker_capacity(0.4, 2e9, 2e8), 4);
  EXPECT_EQ(worker_capacity(0.4, 3e9, 2e8), 6);
  EXPECT_EQ(worker_capacity(0.4, 4e8, 2e8), 0);
  EXPECT_THROW(worker_capacity(0.0, 2e9, 2e8), DomainError);
}

TEST(MaxLoadWithinDeadline, IncludesUploadTime) {
  User u;
  u.data_rate = {15e6};
  Worker w;
  w.cpu_hz = 2e9;
  // 0.1·η + 0.01333 ≤ 0.4 holds up to η = 3.
  EXPECT_EQ(max_load_within_deadline(u, w), 3);
  u.task.deadline_s = 0.05;
  EXPECT_EQ(max_load_within_deadline(u, w), 0);
}

TEST(Latency, LinearInLoadAndWorkload) {
  for (int eta = 1; eta < 10; ++eta) {
    EXPECT_NEAR(compute_delay(2e8, 3e9, eta), eta * compute_delay(2e8, 3e9, 1), 1e-15);
    EXPECT_NEAR(compute_delay(eta * 1e8, 3e9, 1), eta * compute_delay(1e8, 3e9, 1), 1e-15);
  }
}
