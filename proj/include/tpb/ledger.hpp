#pragma once

#include <vector>

#include "tpb/types.hpp"

namespace tpb {

struct LedgerEntry {
  Vec x;
  Vec f;
  int eval_index = 0; // 1-based, strictly increasing
};

/// Append-only record of every objective-vector evaluation in a run. The
/// capacity is the run's total evaluation budget; push refuses to exceed it.
class EvaluationLedger {
public:
  EvaluationLedger() = default;
  explicit EvaluationLedger(int capacity) : capacity_(capacity) {}

  /// Appends one evaluation; returns false (and records nothing) when full.
  bool push(Vec x, Vec f) {
    if (full()) return false;
    const int idx = static_cast<int>(entries_.size()) + 1;
    entries_.push_back(LedgerEntry{std::move(x), std::move(f), idx});
    return true;
  }

  bool full() const { return static_cast<int>(entries_.size()) >= capacity_; }
  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  bool empty() const { return entries_.empty(); }

  const LedgerEntry& operator[](int i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

private:
  std::vector<LedgerEntry> entries_;
  int capacity_ = 0;
};

} // namespace tpb
