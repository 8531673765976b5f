#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "hex/mdp.hpp"

namespace hex {

struct ExperienceTuple {
  Instance x;
  ActionVector z;
  double reward = 0.0;
  Instance x_next;
  // Set on the transition that ended its episode.
  bool terminal = false;
};

// Fixed-capacity ring; once full, each insert overwrites the oldest entry.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void insert(ExperienceTuple tuple);
  // Draws n entries uniformly with replacement.
  std::vector<const ExperienceTuple*> sample_uniform(std::size_t n, Rng& rng) const;

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return storage_.size(); }
  bool empty() const { return storage_.empty(); }
  std::size_t write_cursor() const { return cursor_; }
  const ExperienceTuple& at(std::size_t i) const { return storage_.at(i); }
  // Entries in slot order.
  const std::vector<ExperienceTuple>& entries() const { return storage_; }

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<ExperienceTuple> storage_;
};

// Keeps the highest-reward tuple seen since the last flush and hands it to the
// buffer on every w-th step.
class SelectiveBuffer {
 public:
  explicit SelectiveBuffer(std::size_t window);

  // Returns true when this step flushed a tuple into the buffer.
  bool observe(const ExperienceTuple& tuple, ReplayBuffer& buffer);

  std::size_t window() const { return window_; }
  double best_reward() const { return best_reward_; }

 private:
  std::size_t window_;
  std::size_t step_ = 0;
  double best_reward_ = -std::numeric_limits<double>::infinity();
  std::optional<ExperienceTuple> best_;
};

}  // namespace hex
