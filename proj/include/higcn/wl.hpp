#pragma once

// Color refinement on graphs (WL) and on clique complexes through the flower-petal
// bipartite incidence (HWL, SHWL).
//
// Every item (node or simplex) gets a signature each round. Hash-rule items use
// (own color, sorted neighbor colors); SHWL's higher simplices use the integer sum of
// own and member colors. Signatures are digested to 64 bits and checked against a
// collision table; new colors are the ranks of the distinct signatures in sorted order,
// so the coloring never depends on how nodes happen to be numbered. When two inputs
// are refined together they share one palette, which makes their histograms comparable.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "higcn/complex.hpp"
#include "higcn/errors.hpp"
#include "higcn/graph.hpp"

namespace higcn {

enum class WlMethod { kWl, kHwl, kShwl };

inline std::string to_string(WlMethod m) {
  switch (m) {
    case WlMethod::kWl: return "wl";
    case WlMethod::kHwl: return "hwl";
    case WlMethod::kShwl: return "shwl";
  }
  return "?";
}

inline WlMethod parse_wl_method(const std::string& s) {
  if (s == "wl") return WlMethod::kWl;
  if (s == "hwl") return WlMethod::kHwl;
  if (s == "shwl") return WlMethod::kShwl;
  throw UsageError("unknown refinement method '" + s + "' (expected wl, hwl or shwl)");
}

// Items to be colored with their refinement neighborhoods.
struct RefinementStructure {
  std::vector<std::uint32_t> order;                    // simplex order of each item
  std::vector<std::vector<std::uint32_t>> neighbors;   // item ids
  std::vector<bool> summed;                            // linear (sum) rule instead of hash
  std::size_t num_orders = 1;

  std::size_t size() const noexcept { return order.size(); }
};

inline RefinementStructure graph_structure(const Graph& g) {
  RefinementStructure s;
  s.order.assign(g.n, 0);
  s.summed.assign(g.n, false);
  const auto adj = g.adjacency();
  s.neighbors.resize(g.n);
  for (std::size_t v = 0; v < g.n; ++v) s.neighbors[v].assign(adj[v].begin(), adj[v].end());
  return s;
}

// Nodes first, then simplices of orders 1..P in complex order. A node's neighbors are
// the simplices containing it (over all petals); a simplex's neighbors are its members.
inline RefinementStructure petal_structure(const SimplicialComplex& k, bool sum_higher) {
  RefinementStructure s;
  const std::size_t n = k.num_nodes();
  s.num_orders = k.max_order() + 1;
  s.order.assign(n, 0);
  s.summed.assign(n, false);
  s.neighbors.resize(n);
  for (std::size_t p = 1; p <= k.max_order(); ++p) {
    for (std::size_t i = 0; i < k.count(p); ++i) {
      const auto id = static_cast<std::uint32_t>(s.order.size());
      s.order.push_back(static_cast<std::uint32_t>(p));
      s.summed.push_back(sum_higher);
      auto members = k.simplex(p, i);
      s.neighbors.emplace_back(members.begin(), members.end());
      for (NodeId v : members) s.neighbors[v].push_back(id);
    }
  }
  return s;
}

// Per-order histogram as sorted (color, count) pairs.
using ColorHistogram = std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>>;

struct ColoringState {
  std::size_t round = 0;
  std::vector<std::uint32_t> colors;
  ColorHistogram histogram;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t digest(const std::vector<std::uint64_t>& sig) {
  std::uint64_t h = 0x243f6a8885a308d3ULL ^ sig.size();
  for (auto v : sig) h = mix64(h ^ mix64(v));
  return h;
}

inline ColorHistogram histogram_of(const RefinementStructure& s,
                                   const std::vector<std::uint32_t>& colors) {
  std::vector<std::map<std::uint32_t, std::size_t>> counts(s.num_orders);
  for (std::size_t i = 0; i < s.size(); ++i) ++counts[s.order[i]][colors[i]];
  ColorHistogram h(s.num_orders);
  for (std::size_t p = 0; p < s.num_orders; ++p) h[p].assign(counts[p].begin(), counts[p].end());
  return h;
}

// Same partition: the old->new color map is a bijection between the classes present.
inline bool same_partition(const std::vector<std::uint32_t>& before,
                           const std::vector<std::uint32_t>& after) {
  std::unordered_map<std::uint32_t, std::uint32_t> forward;
  std::unordered_map<std::uint32_t, std::uint32_t> backward;
  for (std::size_t i = 0; i < before.size(); ++i) {
    auto [f, fnew] = forward.emplace(before[i], after[i]);
    if (!fnew && f->second != after[i]) return false;
    auto [b, bnew] = backward.emplace(after[i], before[i]);
    if (!bnew && b->second != before[i]) return false;
  }
  return true;
}

// One joint refinement round over several structures sharing one palette.
inline std::vector<std::vector<std::uint32_t>> refine_round(
    std::span<const RefinementStructure* const> structures,
    const std::vector<std::vector<std::uint32_t>>& colors) {
  std::vector<std::vector<std::uint64_t>> distinct;
  std::unordered_map<std::uint64_t, std::uint32_t> table;  // digest -> index in distinct
  std::vector<std::vector<std::uint32_t>> slot(structures.size());
  std::vector<std::uint64_t> sig;
  for (std::size_t g = 0; g < structures.size(); ++g) {
    const RefinementStructure& s = *structures[g];
    const auto& c = colors[g];
    slot[g].resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      sig.clear();
      if (s.summed[i]) {
        std::uint64_t total = c[i];
        for (auto j : s.neighbors[i]) total += c[j];
        sig = {1, total};
      } else {
        sig.push_back(0);
        sig.push_back(c[i]);
        const std::size_t start = sig.size();
        for (auto j : s.neighbors[i]) sig.push_back(c[j]);
        std::sort(sig.begin() + static_cast<std::ptrdiff_t>(start), sig.end());
      }
      const std::uint64_t d = digest(sig);
      auto [it, inserted] = table.emplace(d, static_cast<std::uint32_t>(distinct.size()));
      if (inserted) {
        distinct.push_back(sig);
      } else if (distinct[it->second] != sig) {
        throw NumericalError("color refinement: 64-bit signature digest collision");
      }
      slot[g][i] = it->second;
    }
  }
  std::vector<std::uint32_t> by_rank(distinct.size());
  for (std::uint32_t i = 0; i < by_rank.size(); ++i) by_rank[i] = i;
  std::sort(by_rank.begin(), by_rank.end(),
            [&](std::uint32_t x, std::uint32_t y) { return distinct[x] < distinct[y]; });
  std::vector<std::uint32_t> rank(distinct.size());
  for (std::uint32_t r = 0; r < by_rank.size(); ++r) rank[by_rank[r]] = r;
  for (auto& v : slot)
    for (auto& x : v) x = rank[x];
  return slot;
}

inline std::size_t round_cap(std::span<const RefinementStructure* const> structures) {
  std::size_t cap = 1;
  for (const auto* s : structures) {
    std::size_t links = 0;
    for (const auto& nb : s->neighbors) links += nb.size();
    cap = std::max(cap, std::max(s->size(), links / 2) + 2);
  }
  return cap;
}

}  // namespace detail

// Refines one structure from the uniform coloring until its partition stops changing.
// The returned sequence starts at round 0 and ends with the first stable round.
inline std::vector<ColoringState> refine(const RefinementStructure& s) {
  const RefinementStructure* one[1] = {&s};
  std::vector<std::vector<std::uint32_t>> colors{std::vector<std::uint32_t>(s.size(), 0)};
  std::vector<ColoringState> trace;
  trace.push_back({0, colors[0], detail::histogram_of(s, colors[0])});
  const std::size_t cap = detail::round_cap(one);
  for (std::size_t round = 1; round <= cap; ++round) {
    auto next = detail::refine_round(one, colors);
    const bool stable = detail::same_partition(colors[0], next[0]);
    colors = std::move(next);
    trace.push_back({round, colors[0], detail::histogram_of(s, colors[0])});
    if (stable) break;
  }
  return trace;
}

inline std::vector<ColoringState> wl_refine(const Graph& g) { return refine(graph_structure(g)); }
inline std::vector<ColoringState> hwl_refine(const SimplicialComplex& k) {
  return refine(petal_structure(k, false));
}
inline std::vector<ColoringState> shwl_refine(const SimplicialComplex& k) {
  return refine(petal_structure(k, true));
}

enum class Verdict { kDistinguished, kInconclusive };

struct DistinguishResult {
  Verdict verdict = Verdict::kInconclusive;
  std::size_t rounds = 0;                          // last round computed
  std::optional<std::size_t> first_difference;     // round of first histogram mismatch
  std::vector<ColorHistogram> histograms_a;
  std::vector<ColorHistogram> histograms_b;
};

inline RefinementStructure structure_for(const Graph& g, WlMethod method, std::size_t max_order) {
  if (method == WlMethod::kWl) return graph_structure(g);
  return petal_structure(clique_lift(g, max_order), method == WlMethod::kShwl);
}

// Refines both inputs in lockstep on a shared palette; "distinguished" at the first
// round whose histograms differ, "inconclusive" once both partitions are stable.
inline DistinguishResult distinguish_structures(const RefinementStructure& a,
                                                const RefinementStructure& b) {
  const RefinementStructure* both[2] = {&a, &b};
  std::vector<std::vector<std::uint32_t>> colors{std::vector<std::uint32_t>(a.size(), 0),
                                                 std::vector<std::uint32_t>(b.size(), 0)};
  DistinguishResult out;
  auto record = [&](std::size_t round) {
    out.rounds = round;
    out.histograms_a.push_back(detail::histogram_of(a, colors[0]));
    out.histograms_b.push_back(detail::histogram_of(b, colors[1]));
    if (out.histograms_a.back() != out.histograms_b.back()) {
      out.verdict = Verdict::kDistinguished;
      out.first_difference = round;
      return true;
    }
    return false;
  };
  if (record(0)) return out;
  const std::size_t cap = detail::round_cap(both);
  for (std::size_t round = 1; round <= cap; ++round) {
    auto next = detail::refine_round(both, colors);
    const bool stable = detail::same_partition(colors[0], next[0]) &&
                        detail::same_partition(colors[1], next[1]);
    colors = std::move(next);
    if (record(round)) return out;
    if (stable) break;
  }
  return out;
}

inline DistinguishResult distinguish(const Graph& a, const Graph& b, WlMethod method,
                                     std::size_t max_order = 2) {
  if (method != WlMethod::kWl && max_order < 1) throw UsageError("distinguish: P must be >= 1");
  return distinguish_structures(structure_for(a, method, max_order),
                                structure_for(b, method, max_order));
}

}  // namespace higcn
