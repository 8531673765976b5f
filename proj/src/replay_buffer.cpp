#include "hex/replay_buffer.hpp"

#include <stdexcept>

namespace hex {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("buffer capacity must be positive");
  storage_.reserve(std::min<std::size_t>(capacity_, 1 << 16));
}

void ReplayBuffer::insert(ExperienceTuple tuple) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(tuple));
  } else {
    storage_[cursor_] = std::move(tuple);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<const ExperienceTuple*> ReplayBuffer::sample_uniform(std::size_t n, Rng& rng) const {
  if (storage_.empty()) throw std::logic_error("cannot sample from an empty buffer");
  std::vector<const ExperienceTuple*> out(n);
  for (auto& slot : out) slot = &storage_[rng.index(storage_.size())];
  return out;
}

SelectiveBuffer::SelectiveBuffer(std::size_t window) : window_(window) {
  if (window_ == 0) throw std::invalid_argument("selective window must be positive");
}

bool SelectiveBuffer::observe(const ExperienceTuple& tuple, ReplayBuffer& buffer) {
  ++step_;
  if (tuple.reward > best_reward_ || !best_) {
    best_reward_ = tuple.reward;
    best_ = tuple;
  }
  if (step_ % window_ != 0) return false;
  buffer.insert(std::move(*best_));
  best_.reset();
  best_reward_ = -std::numeric_limits<double>::infinity();
  return true;
}

}  // namespace hex
