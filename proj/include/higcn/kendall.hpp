#pragma once

// Kendall tau-b in O(n log n) (Knight's method): sort by (a, b), then count the
// inversions a merge sort on b has to undo.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "higcn/errors.hpp"

namespace higcn {

struct KendallCounts {
  std::int64_t pairs = 0;          // n(n-1)/2
  std::int64_t ties_a = 0;         // pairs tied in a
  std::int64_t ties_b = 0;         // pairs tied in b
  std::int64_t ties_both = 0;      // pairs tied in both
  std::int64_t concordance = 0;    // concordant minus discordant
};

// tau-b from pair counts; nullopt when either ranking is constant.
inline std::optional<double> tau_b_from_counts(const KendallCounts& c) {
  const std::int64_t da = c.pairs - c.ties_a;
  const std::int64_t db = c.pairs - c.ties_b;
  if (da <= 0 || db <= 0) return std::nullopt;
  return static_cast<double>(c.concordance) /
         std::sqrt(static_cast<double>(da) * static_cast<double>(db));
}

namespace detail {

inline std::int64_t tied_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Stable merge sort of keys counting inversions (strictly greater before smaller).
inline std::int64_t merge_count(std::vector<double>& keys, std::vector<double>& scratch,
                                std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(keys, scratch, lo, mid) + merge_count(keys, scratch, mid, hi);
  std::size_t i = lo;
  std::size_t j = mid;
  std::size_t k = lo;
  while (i < mid && j < hi) {
    if (keys[j] < keys[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = keys[j++];
    } else {
      scratch[k++] = keys[i++];
    }
  }
  while (i < mid) scratch[k++] = keys[i++];
  while (j < hi) scratch[k++] = keys[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            keys.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace detail

inline KendallCounts kendall_counts(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw UsageError("kendall_tau: length mismatch");
  if (a.size() < 2) throw UsageError("kendall_tau: need at least two observations");
  const std::size_t n = a.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a[x] < a[y] || (a[x] == a[y] && b[x] < b[y]);
  });

  KendallCounts c;
  c.pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;
  std::int64_t run_a = 1;
  std::int64_t run_ab = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const bool same_a = a[order[i]] == a[order[i - 1]];
    if (same_a) {
      ++run_a;
      if (b[order[i]] == b[order[i - 1]]) {
        ++run_ab;
      } else {
        c.ties_both += detail::tied_pairs(run_ab);
        run_ab = 1;
      }
    } else {
      c.ties_a += detail::tied_pairs(run_a);
      c.ties_both += detail::tied_pairs(run_ab);
      run_a = 1;
      run_ab = 1;
    }
  }
  c.ties_a += detail::tied_pairs(run_a);
  c.ties_both += detail::tied_pairs(run_ab);

  std::vector<double> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = b[order[i]];
  std::vector<double> scratch(n);
  const std::int64_t swaps = detail::merge_count(keys, scratch, 0, n);

  std::int64_t run_b = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (keys[i] == keys[i - 1]) {
      ++run_b;
    } else {
      c.ties_b += detail::tied_pairs(run_b);
      run_b = 1;
    }
  }
  c.ties_b += detail::tied_pairs(run_b);

  c.concordance = c.pairs - c.ties_a - c.ties_b + c.ties_both - 2 * swaps;
  return c;
}

// Tie-corrected Kendall tau; nullopt signals zero variance in either input.
inline std::optional<double> kendall_tau(std::span<const double> a, std::span<const double> b) {
  return tau_b_from_counts(kendall_counts(a, b));
}

}  // namespace higcn
