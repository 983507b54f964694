#pragma once

#include <algorithm>
#include <cstdint>
#include <span>

namespace lcf {

/// Number of elements common to two ascending-sorted id sequences.
/// Switches to galloping when one side is much smaller; item liked-sets in
/// implicit-feedback data are heavily skewed, so this is the hot path for
/// explicit-exposure support counts.
inline std::size_t intersection_size(std::span<const std::uint32_t> a,
                                     std::span<const std::uint32_t> b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return 0;

  std::size_t count = 0;
  if (b.size() / a.size() >= 16) {
    // galloping: binary-search each element of the small side
    auto it = b.begin();
    for (std::uint32_t x : a) {
      it = std::lower_bound(it, b.end(), x);
      if (it == b.end()) break;
      if (*it == x) {
        ++count;
        ++it;
      }
    }
    return count;
  }

  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

inline bool sorted_contains(std::span<const std::uint32_t> sorted, std::uint32_t x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

}  // namespace lcf
