#pragma once

#include <cstddef>
#include <vector>

#include "fsc/env.hpp"

namespace fsc {

/// Bounded FIFO of transitions with uniform sampling.
class ReplayBuffer {
public:
  explicit ReplayBuffer(std::size_t capacity);

  /// Returns the slot index the transition landed in (stable until evicted).
  std::size_t push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  const Transition& at(std::size_t i) const { return items_[i]; }

  std::size_t sample_index(Rng& rng) const;
  const Transition& sample(Rng& rng) const { return items_[sample_index(rng)]; }

private:
  std::size_t capacity_;
  std::size_t next_ = 0;  // ring cursor once full
  std::vector<Transition> items_;
};

/// Complete binary tree over leaf priorities; internal nodes hold subtree
/// sums (and maxima, for max-priority insertion). Prefix-sum descent gives
/// proportional sampling in O(log n).
class SumTree {
public:
  explicit SumTree(std::size_t capacity);

  void set(std::size_t index, double priority);
  double get(std::size_t index) const { return leaf(index); }
  double total() const;
  double max_priority() const;
  std::size_t size() const { return capacity_; }

  /// Walks down from the root: returns the leaf whose cumulative-sum interval
  /// contains u, for u in [0, total()).
  std::size_t find_prefix(double u) const;

  /// Recomputes every internal node from the leaves (exact).
  void rebuild();

private:
  double leaf(std::size_t index) const { return sum_[base_ + index]; }

  std::size_t capacity_;
  std::size_t base_;  // index of first leaf
  std::vector<double> sum_;
  std::vector<double> max_;
  std::size_t updates_since_rebuild_ = 0;
};

/// Proportional prioritized replay without importance weighting: half of each
/// batch proportional-to-priority, half uniform. New transitions enter at the
/// current maximum priority.
class PrioritizedReplay {
public:
  explicit PrioritizedReplay(std::size_t capacity);

  void push(Transition t);
  std::size_t size() const { return buffer_.size(); }
  bool empty() const { return buffer_.empty(); }
  const Transition& at(std::size_t i) const { return buffer_.at(i); }

  /// k/2 proportional draws followed by k/2 uniform draws.
  std::vector<std::size_t> sample_indices(std::size_t k, Rng& rng) const;

  /// Post-update priorities: |TD error| + 1e-6.
  void update_priority(std::size_t index, double abs_td_error);

private:
  ReplayBuffer buffer_;
  SumTree tree_;
};

}  // namespace fsc
