#pragma once

// Deterministic parallel loops and pairwise summation. Every reduction in the
// library goes through PairwiseAccumulator, whose summation tree depends only
// on the order of the inputs, so results do not depend on the thread count.

#include <array>
#include <cmath>
#include <cstdint>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace ergolab {

/// Number of worker threads used by parallel_for (default: hardware threads).
void set_thread_count(unsigned n);
unsigned thread_count();

/// Calls body(i) for i in [0, count), statically partitioned over threads.
/// body must only write state owned by index i.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Streaming pairwise summation: leaves of 32 values are summed left to
/// right, and leaf totals are merged as a binary counter.
template <class T>
class PairwiseAccumulator {
 public:
  void add(const T& v) {
    leaf_ += v;
    if (++leaf_count_ == kLeaf) flush_leaf();
  }

  T total() const {
    T sum{};
    bool have = false;
    for (std::size_t level = 0; level < kLevels; ++level) {
      if (!(occupied_ >> level & 1U)) continue;
      sum = have ? levels_[level] + sum : levels_[level];
      have = true;
    }
    if (leaf_count_ > 0) sum = have ? sum + leaf_ : leaf_;
    return sum;
  }

  std::size_t count() const { return blocks_ * kLeaf + leaf_count_; }

 private:
  static constexpr std::size_t kLeaf = 32;
  static constexpr std::size_t kLevels = 64;

  void flush_leaf() {
    T carry = leaf_;
    std::size_t level = 0;
    while (occupied_ >> level & 1U) {
      carry = levels_[level] + carry;
      occupied_ &= ~(std::uint64_t{1} << level);
      ++level;
    }
    levels_[level] = carry;
    occupied_ |= std::uint64_t{1} << level;
    leaf_ = T{};
    leaf_count_ = 0;
    ++blocks_;
  }

  std::array<T, kLevels> levels_{};
  std::uint64_t occupied_ = 0;
  T leaf_{};
  std::size_t leaf_count_ = 0;
  std::size_t blocks_ = 0;
};

template <class T>
T pairwise_sum(std::span<const T> values) {
  PairwiseAccumulator<T> acc;
  for (const T& v : values) acc.add(v);
  return acc.total();
}

/// e(t) = exp(2 pi i t).
inline std::complex<double> unit_phase(double t) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  t -= static_cast<double>(static_cast<long long>(t));
  return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

}  // namespace ergolab
