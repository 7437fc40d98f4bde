#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fermient {

/// Bit (m - 1) set for each occupied 1-based mode m.
using ModeMask = unsigned __int128;

inline int mask_popcount(ModeMask mask) {
  return std::popcount(static_cast<std::uint64_t>(mask)) +
         std::popcount(static_cast<std::uint64_t>(mask >> 64));
}

/// Index of the lowest set bit; `mask` must be nonzero.
inline int mask_lowest_bit(ModeMask mask) {
  const auto low = static_cast<std::uint64_t>(mask);
  return low != 0 ? std::countr_zero(low) : 64 + std::countr_zero(static_cast<std::uint64_t>(mask >> 64));
}

struct ModeMaskHash {
  std::size_t operator()(ModeMask mask) const {
    const auto low = static_cast<std::uint64_t>(mask);
    const auto high = static_cast<std::uint64_t>(mask >> 64);
    return std::hash<std::uint64_t>{}(low ^ (high * 0x9e3779b97f4a7c15ULL));
  }
};

/// Exact binomial coefficient; zero when k is outside [0, n].
constexpr std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(result);
}

constexpr std::uint64_t factorial(int n) {
  std::uint64_t result = 1;
  for (int i = 2; i <= n; ++i) result *= static_cast<std::uint64_t>(i);
  return result;
}

/// Sign of the permutation that sorts `seq` ascending; 0 if `seq` has a repeat.
inline int sort_parity(std::span<const int> seq) {
  int inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] == seq[j]) return 0;
      if (seq[i] > seq[j]) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

/// Bit (mode - 1) set for each 1-based mode.
inline ModeMask modes_to_mask(std::span<const int> modes) {
  ModeMask mask = 0;
  for (int m : modes) mask |= ModeMask{1} << (m - 1);
  return mask;
}

/// Ascending 1-based modes of a mask.
inline std::vector<int> mask_to_modes(ModeMask mask) {
  std::vector<int> modes;
  modes.reserve(static_cast<std::size_t>(mask_popcount(mask)));
  while (mask != 0) {
    modes.push_back(mask_lowest_bit(mask) + 1);
    mask &= mask - 1;
  }
  return modes;
}

/// Sign of the permutation sorting the concatenation (left..., right...) of two
/// disjoint ascending mode sets: (-1)^(number of pairs with l > r).
inline int merge_sign(ModeMask left, ModeMask right) {
  int crossings = 0;
  while (left != 0) {
    const int bit = mask_lowest_bit(left);
    crossings += mask_popcount(right & ((ModeMask{1} << bit) - 1));
    left &= left - 1;
  }
  return (crossings % 2 == 0) ? 1 : -1;
}

/// Calls `fn(sub)` for every subset of `mask` with exactly `k` bits.
template <typename Fn>
void for_each_subset_of_size(ModeMask mask, int k, Fn&& fn) {
  // Standard descending walk over all submasks; small N keeps this cheap.
  ModeMask sub = mask;
  while (true) {
    if (mask_popcount(sub) == k) fn(sub);
    if (sub == 0) break;
    sub = (sub - 1) & mask;
  }
}

}  // namespace fermient
