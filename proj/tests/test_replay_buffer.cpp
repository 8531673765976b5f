#include <gtest/gtest.h>

#include <vector>

#include "hex/replay_buffer.hpp"

namespace hex {
namespace {

ExperienceTuple tuple_with(double reward) {
  ExperienceTuple t;
  t.x = Eigen::VectorXd::Constant(1, 0.5);
  t.z = Eigen::VectorXd::Zero(1);
  t.x_next = t.x;
  t.reward = reward;
  return t;
}

std::vector<double> rewards_in(const ReplayBuffer& b) {
  std::vector<double> out;
  for (const auto& t : b.entries()) out.push_back(t.reward);
  return out;
}

std::vector<double> run_window(std::size_t w, const std::vector<double>& rewards) {
  ReplayBuffer buffer(100);
  SelectiveBuffer sel(w);
  for (double r : rewards) sel.observe(tuple_with(r), buffer);
  return rewards_in(buffer);
}

TEST(ReplayBuffer, RingOverwritesOldest) {
  ReplayBuffer b(2);
  for (double r : {1.0, 2.0, 3.0}) b.insert(tuple_with(r));
  EXPECT_EQ(b.size(), 2u);
  EXPECT_EQ(rewards_in(b), (std::vector<double>{3.0, 2.0}));
}

TEST(ReplayBuffer, SizeNeverExceedsCapacity) {
  ReplayBuffer b(5);
  for (int i = 0; i < 23; ++i) {
    b.insert(tuple_with(i));
    EXPECT_LE(b.size(), 5u);
  }
  EXPECT_EQ(b.write_cursor(), 23u % 5u);
}

TEST(ReplayBuffer, SingleEntryIsAlwaysSampled) {
  ReplayBuffer b(4);
  b.insert(tuple_with(7.0));
  Rng rng(1);
  for (const auto* t : b.sample_uniform(10, rng)) EXPECT_EQ(t->reward, 7.0);
}

TEST(ReplayBuffer, EmptyBufferCannotBeSampled) {
  ReplayBuffer b(4);
  Rng rng(1);
  EXPECT_THROW(b.sample_uniform(1, rng), std::logic_error);
}

TEST(SelectiveBuffer, WindowOneInsertsEverything) {
  EXPECT_EQ(run_window(1, {3.0, -1.0, 2.0}), (std::vector<double>{3.0, -1.0, 2.0}));
}

TEST(SelectiveBuffer, WindowThreeKeepsTheMaximum) { EXPECT_EQ(run_window(3, {1.0, 5.0, 2.0}), std::vector<double>{5.0}); }

TEST(SelectiveBuffer, BestOfABadWindowIsStillBuffered) {
  EXPECT_EQ(run_window(3, {-1.0, -2.0, -3.0}), std::vector<double>{-1.0});
}

TEST(SelectiveBuffer, ConsecutiveWindowsResetTheirMaximum) {
  EXPECT_EQ(run_window(5, {1, 2, 9, 3, 4, -5, -6, -2, -7, -8, 0}), (std::vector<double>{9.0, -2.0}));
}

TEST(SelectiveBuffer, FlushReportsOnlyEveryWthStep) {
  ReplayBuffer buffer(10);
  SelectiveBuffer sel(3);
  std::vector<bool> flushed;
  for (int i = 0; i < 6; ++i) flushed.push_back(sel.observe(tuple_with(i), buffer));
  EXPECT_EQ(flushed, (std::vector<bool>{false, false, true, false, false, true}));
}

}  // namespace
}  // namespace hex
