#include "fsc/replay.hpp"

#include <algorithm>
#include <stdexcept>

namespace fsc {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

std::size_t ReplayBuffer::push(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
    return items_.size() - 1;
  }
  const std::size_t slot = next_;
  items_[slot] = std::move(t);  // oldest-first eviction
  next_ = (next_ + 1) % capacity_;
  return slot;
}

std::size_t ReplayBuffer::sample_index(Rng& rng) const {
  if (items_.empty()) throw std::logic_error("ReplayBuffer: sample from empty buffer");
  return static_cast<std::size_t>(rng.uniform_int(static_cast<int>(items_.size())));
}

// --- SumTree ------------------------------------------------------------

SumTree::SumTree(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("SumTree: capacity must be positive");
  base_ = 1;
  while (base_ < capacity) base_ <<= 1;
  sum_.assign(2 * base_, 0.0);
  max_.assign(2 * base_, 0.0);
}

void SumTree::set(std::size_t index, double priority) {
  if (index >= capacity_) throw std::out_of_range("SumTree: index out of range");
  if (priority < 0.0) throw std::invalid_argument("SumTree: priority must be non-negative");
  std::size_t i = base_ + index;
  sum_[i] = priority;
  max_[i] = priority;
  for (i >>= 1; i >= 1; i >>= 1) {
    sum_[i] = sum_[2 * i] + sum_[2 * i + 1];
    max_[i] = std::max(max_[2 * i], max_[2 * i + 1]);
  }
  // Exact rebuild every 2^20 updates keeps float drift out of the sums.
  if (++updates_since_rebuild_ >= (1u << 20)) rebuild();
}

double SumTree::total() const { return sum_[1]; }
double SumTree::max_priority() const { return max_[1]; }

std::size_t SumTree::find_prefix(double u) const {
  if (total() <= 0.0) throw std::logic_error("SumTree: find_prefix with zero total");
  std::size_t i = 1;
  while (i < base_) {
    const std::size_t left = 2 * i;
    if (u < sum_[left]) {
      i = left;
    } else {
      u -= sum_[left];
      i = left + 1;
    }
  }
  std::size_t index = i - base_;
  if (index >= capacity_) index = capacity_ - 1;  // guard against fp edge at u ~ total
  return index;
}

void SumTree::rebuild() {
  for (std::size_t i = base_ - 1; i >= 1; --i) {
    sum_[i] = sum_[2 * i] + sum_[2 * i + 1];
    max_[i] = std::max(max_[2 * i], max_[2 * i + 1]);
  }
  updates_since_rebuild_ = 0;
}

// --- PrioritizedReplay ----------------------------------------------------

PrioritizedReplay::PrioritizedReplay(std::size_t capacity) : buffer_(capacity), tree_(capacity) {}

void PrioritizedReplay::push(Transition t) {
  const double p = buffer_.empty() ? 1.0 : std::max(tree_.max_priority(), 1e-6);
  const std::size_t slot = buffer_.push(std::move(t));
  tree_.set(slot, p);
}

std::vector<std::size_t> PrioritizedReplay::sample_indices(std::size_t k, Rng& rng) const {
  if (buffer_.empty()) throw std::logic_error("PrioritizedReplay: sample from empty buffer");
  std::vector<std::size_t> out;
  out.reserve(k);
  const std::size_t proportional = k / 2;
  for (std::size_t i = 0; i < proportional; ++i)
    out.push_back(tree_.find_prefix(rng.uniform() * tree_.total()));
  for (std::size_t i = proportional; i < k; ++i) out.push_back(buffer_.sample_index(rng));
  return out;
}

void PrioritizedReplay::update_priority(std::size_t index, double abs_td_error) {
  tree_.set(index, abs_td_error + 1e-6);
}

}  // namespace fsc
