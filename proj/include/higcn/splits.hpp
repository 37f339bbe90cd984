#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "higcn/errors.hpp"
#include "higcn/random.hpp"

namespace higcn {

struct SplitSpec {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

// Part sizes: floor(n * ratio) each, then the leftover items go one at a time to the
// parts with the largest fractional remainders (earlier parts win ties).
inline std::vector<std::size_t> split_sizes(std::size_t n, const std::vector<double>& ratios) {
  if (ratios.empty()) throw UsageError("split ratios are empty");
  double total = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0)) throw UsageError("split ratios must be positive");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) throw UsageError("split ratios must sum to 1");
  std::vector<std::size_t> sizes(ratios.size());
  std::vector<double> frac(ratios.size());
  std::size_t used = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double exact = static_cast<double>(n) * ratios[i];
    sizes[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    frac[i] = exact - static_cast<double>(sizes[i]);
    used += sizes[i];
  }
  std::vector<std::size_t> order(ratios.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return frac[a] > frac[b] + 1e-12; });
  for (std::size_t k = 0; used < n; ++k, ++used) ++sizes[order[k % order.size()]];
  return sizes;
}

// Seeded shuffle, then contiguous train/val/test slices.
inline SplitSpec make_splits(std::size_t n, const std::vector<double>& ratios, std::uint64_t seed) {
  if (ratios.size() != 3) throw UsageError("make_splits: expected three ratios");
  const auto sizes = split_sizes(n, ratios);
  for (auto s : sizes)
    if (s == 0) {
      throw UsageError("make_splits: n=" + std::to_string(n) + " too small for non-empty parts");
    }
  Rng rng = make_rng(seed, 0x73706c74);
  const auto perm = random_permutation(n, rng);
  SplitSpec s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(sizes[0]));
  s.val.assign(perm.begin() + static_cast<std::ptrdiff_t>(sizes[0]),
               perm.begin() + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]));
  s.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(sizes[0] + sizes[1]), perm.end());
  return s;
}

// k roughly equal folds, stratified by label: items of each class are shuffled and dealt
// round-robin, continuing the deal across classes.
inline std::vector<std::vector<std::size_t>> stratified_folds(const std::vector<int>& labels,
                                                              std::size_t k, std::uint64_t seed) {
  if (k < 2) throw UsageError("need at least two folds");
  if (labels.size() < k) throw UsageError("fewer items than folds");
  Rng rng = make_rng(seed, 0x666f6c64);
  int max_label = 0;
  for (int y : labels) max_label = std::max(max_label, y);
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(max_label) + 1);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (auto& items : by_class) {
    shuffle(items, rng);
    for (auto i : items) folds[next++ % k].push_back(i);
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

}  // namespace higcn
