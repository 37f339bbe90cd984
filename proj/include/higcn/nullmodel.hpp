#pragma once

// Degree-preserving rewiring that changes the triangle count.
//
// Forward move on a chain D-B-A-C-E (B, C adjacent to A but not to each other; D a
// neighbor of B and E a neighbor of C, neither adjacent to A; D and E not adjacent):
// remove [B,D], [C,E] and add [B,C], [D,E]. Triangle [A,B,C] appears and every
// degree is unchanged. Triangles through a removed edge can still be lost, so a move
// is accepted only when the exact net change in the triangle count is positive.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "higcn/complex.hpp"
#include "higcn/errors.hpp"
#include "higcn/graph.hpp"
#include "higcn/random.hpp"

namespace higcn {

struct RewireTuple {
  NodeId a, b, c, d, e;
  bool operator==(const RewireTuple&) const = default;
};

struct RewireLog {
  std::vector<RewireTuple> accepted;
  std::size_t attempts = 0;
};

// Mutable adjacency-set view used while rewiring.
class WorkingGraph {
 public:
  explicit WorkingGraph(const Graph& g) : n_(g.n), adj_(g.n) {
    for (auto [u, v] : g.edges) {
      adj_[u].insert(v);
      adj_[v].insert(u);
    }
  }

  std::size_t n() const noexcept { return n_; }
  const std::set<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
  bool adjacent(NodeId u, NodeId v) const { return adj_[u].count(v) > 0; }
  void add(NodeId u, NodeId v) {
    adj_[u].insert(v);
    adj_[v].insert(u);
  }
  void remove(NodeId u, NodeId v) {
    adj_[u].erase(v);
    adj_[v].erase(u);
  }

  std::size_t common_neighbors(NodeId u, NodeId v) const {
    std::size_t c = 0;
    const auto& small = adj_[u].size() < adj_[v].size() ? adj_[u] : adj_[v];
    const auto& large = adj_[u].size() < adj_[v].size() ? adj_[v] : adj_[u];
    for (auto w : small) c += large.count(w);
    return c;
  }

  Graph to_graph() const {
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n_; ++u)
      for (auto v : adj_[u])
        if (u < v) edges.emplace_back(u, v);
    return make_graph(n_, edges);
  }

 private:
  std::size_t n_;
  std::vector<std::set<NodeId>> adj_;
};

inline std::size_t triangle_count(const Graph& g) { return clique_lift(g, 2).count(2); }

// Triangle count after the move minus before, assuming the chain shape holds. Losses
// are triangles through [B,D] or [C,E]; gains are common neighbors of the new pairs
// once the removed edges are gone.
inline std::int64_t forward_triangle_gain(const WorkingGraph& w, const RewireTuple& t) {
  auto cn = [&](NodeId u, NodeId v) { return static_cast<std::int64_t>(w.common_neighbors(u, v)); };
  const std::int64_t d_c = w.adjacent(t.d, t.c) ? 1 : 0;
  const std::int64_t e_b = w.adjacent(t.e, t.b) ? 1 : 0;
  return cn(t.b, t.c) + cn(t.d, t.e) - 2 * (d_c + e_b) - cn(t.b, t.d) - cn(t.c, t.e);
}

// Checks the chain shape and a strictly positive triangle gain on the current graph.
inline bool is_valid_forward(const WorkingGraph& w, const RewireTuple& t) {
  const NodeId nodes[5] = {t.a, t.b, t.c, t.d, t.e};
  for (int i = 0; i < 5; ++i) {
    if (nodes[i] >= w.n()) return false;
    for (int j = i + 1; j < 5; ++j)
      if (nodes[i] == nodes[j]) return false;
  }
  return w.adjacent(t.a, t.b) && w.adjacent(t.a, t.c) && !w.adjacent(t.b, t.c) &&
         w.adjacent(t.b, t.d) && w.adjacent(t.c, t.e) && !w.adjacent(t.a, t.d) &&
         !w.adjacent(t.a, t.e) && !w.adjacent(t.d, t.e) && forward_triangle_gain(w, t) > 0;
}

inline void apply_forward(WorkingGraph& w, const RewireTuple& t) {
  w.remove(t.b, t.d);
  w.remove(t.c, t.e);
  w.add(t.b, t.c);
  w.add(t.d, t.e);
}

// Validates and applies one explicit move.
inline Graph apply_rewire(const Graph& g, const RewireTuple& t) {
  WorkingGraph w(g);
  if (!is_valid_forward(w, t)) throw UsageError("apply_rewire: tuple violates the chain constraints");
  apply_forward(w, t);
  Graph out = w.to_graph();
  out.features = g.features;
  out.labels = g.labels;
  return out;
}

namespace detail {

template <typename Range>
std::optional<NodeId> pick(const Range& candidates, Rng& rng) {
  if (candidates.empty()) return std::nullopt;
  auto it = candidates.begin();
  std::advance(it, static_cast<std::ptrdiff_t>(uniform_index(rng, candidates.size())));
  return *it;
}

// One staged draw: A, then an unordered non-adjacent neighbor pair (B, C), then D, then E.
inline std::optional<RewireTuple> sample_forward(const WorkingGraph& w,
                                                 const std::vector<NodeId>& hubs, Rng& rng) {
  auto a = pick(hubs, rng);
  if (!a) return std::nullopt;
  std::vector<NodeId> nb(w.neighbors(*a).begin(), w.neighbors(*a).end());
  if (nb.size() < 2) return std::nullopt;
  const auto i = uniform_index(rng, nb.size());
  auto j = uniform_index(rng, nb.size() - 1);
  if (j >= i) ++j;
  const NodeId b = nb[i];
  const NodeId c = nb[j];
  if (w.adjacent(b, c)) return std::nullopt;
  std::vector<NodeId> ds;
  for (auto d : w.neighbors(b))
    if (d != *a && d != c && !w.adjacent(*a, d)) ds.push_back(d);
  auto d = pick(ds, rng);
  if (!d) return std::nullopt;
  std::vector<NodeId> es;
  for (auto e : w.neighbors(c))
    if (e != *a && e != b && e != *d && !w.adjacent(*a, e) && !w.adjacent(*d, e)) es.push_back(e);
  auto e = pick(es, rng);
  if (!e) return std::nullopt;
  RewireTuple t{*a, b, c, *d, *e};
  if (!is_valid_forward(w, t)) return std::nullopt;
  return t;
}

// Reverse move: pick triangle edge [B,C] with apex A and an edge [D,E], then remove
// [B,C], [D,E] and add [B,D], [C,E]. The caller keeps it only if triangles drop.
inline std::optional<RewireTuple> sample_reverse(const WorkingGraph& w,
                                                 const std::vector<NodeId>& hubs, Rng& rng) {
  auto a = pick(hubs, rng);
  if (!a) return std::nullopt;
  std::vector<NodeId> nb(w.neighbors(*a).begin(), w.neighbors(*a).end());
  if (nb.size() < 2) return std::nullopt;
  const auto i = uniform_index(rng, nb.size());
  auto j = uniform_index(rng, nb.size() - 1);
  if (j >= i) ++j;
  const NodeId b = nb[i];
  const NodeId c = nb[j];
  if (!w.adjacent(b, c)) return std::nullopt;
  std::vector<NodeId> ds;
  for (NodeId d = 0; d < w.n(); ++d)
    if (d != *a && d != b && d != c && !w.adjacent(*a, d) && !w.adjacent(b, d)) ds.push_back(d);
  auto d = pick(ds, rng);
  if (!d) return std::nullopt;
  std::vector<NodeId> es;
  for (auto e : w.neighbors(*d))
    if (e != *a && e != b && e != c && !w.adjacent(*a, e) && !w.adjacent(c, e)) es.push_back(e);
  auto e = pick(es, rng);
  if (!e) return std::nullopt;
  return RewireTuple{*a, b, c, *d, *e};
}

}  // namespace detail

// One random forward move; SaturationError when none is found within max_attempts
// (default 10 n) draws.
inline Graph rewire_add_triangle(const Graph& g, Rng& rng, RewireLog& log,
                                 std::optional<std::size_t> max_attempts = std::nullopt) {
  WorkingGraph w(g);
  std::vector<NodeId> hubs;
  for (NodeId v = 0; v < g.n; ++v)
    if (w.neighbors(v).size() >= 2) hubs.push_back(v);
  const std::size_t budget = max_attempts.value_or(10 * g.n);
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    ++log.attempts;
    if (auto t = detail::sample_forward(w, hubs, rng)) {
      apply_forward(w, *t);
      log.accepted.push_back(*t);
      Graph out = w.to_graph();
      out.features = g.features;
      out.labels = g.labels;
      return out;
    }
  }
  throw SaturationError("rewire: no valid D-B-A-C-E chain found in " + std::to_string(budget) +
                        " attempts");
}

// One random reverse move that strictly lowers the triangle count.
inline Graph rewire_remove_triangle(const Graph& g, Rng& rng, RewireLog& log,
                                    std::optional<std::size_t> max_attempts = std::nullopt) {
  const std::size_t before = triangle_count(g);
  std::vector<NodeId> hubs;
  {
    WorkingGraph w(g);
    for (NodeId v = 0; v < g.n; ++v)
      if (w.neighbors(v).size() >= 2) hubs.push_back(v);
  }
  const std::size_t budget = max_attempts.value_or(10 * g.n);
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    ++log.attempts;
    WorkingGraph w(g);
    auto t = detail::sample_reverse(w, hubs, rng);
    if (!t) continue;
    w.remove(t->b, t->c);
    w.remove(t->d, t->e);
    w.add(t->b, t->d);
    w.add(t->c, t->e);
    Graph out = w.to_graph();
    if (triangle_count(out) >= before) continue;
    log.accepted.push_back(*t);
    out.features = g.features;
    out.labels = g.labels;
    return out;
  }
  throw SaturationError("rewire: no triangle-removing move found in " + std::to_string(budget) +
                        " attempts");
}

// rho_p = n_p' / n_p - 1
inline double relative_density(const SimplicialComplex& original, const SimplicialComplex& modified,
                               std::size_t p) {
  const std::size_t base = original.count(p);
  if (base == 0) {
    throw NumericalError("relative_density: original complex has no " + std::to_string(p) +
                         "-simplices");
  }
  return static_cast<double>(modified.count(p)) / static_cast<double>(base) - 1.0;
}

struct RewireResult {
  Graph graph;
  RewireLog log;
  double achieved_rho2 = 0.0;
  std::size_t original_triangles = 0;
  std::size_t triangles = 0;
  bool saturated = false;
};

// Thrown when the target density cannot be reached; carries the partial result.
class RewireSaturation : public SaturationError {
 public:
  RewireSaturation(const std::string& what, RewireResult partial)
      : SaturationError(what), partial_(std::move(partial)) {}
  const RewireResult& partial() const noexcept { return partial_; }

 private:
  RewireResult partial_;
};

// Applies moves until rho_2 reaches the target (upward for positive targets, downward
// with reverse moves for negative ones).
inline RewireResult rewire_to_target(const Graph& g, double target_rho2, std::uint64_t seed,
                                     std::optional<std::size_t> max_attempts = std::nullopt) {
  RewireResult r;
  r.graph = g;
  r.original_triangles = triangle_count(g);
  if (r.original_triangles == 0) {
    throw NumericalError("rewire_to_target: graph has no triangles, rho_2 undefined");
  }
  r.triangles = r.original_triangles;
  Rng rng = make_rng(seed, 0x72657769);
  const double base = static_cast<double>(r.original_triangles);
  auto rho = [&] { return static_cast<double>(r.triangles) / base - 1.0; };
  try {
    if (target_rho2 >= 0.0) {
      while (rho() < target_rho2) {
        r.graph = rewire_add_triangle(r.graph, rng, r.log, max_attempts);
        r.triangles = triangle_count(r.graph);
      }
    } else {
      while (rho() > target_rho2) {
        r.graph = rewire_remove_triangle(r.graph, rng, r.log, max_attempts);
        r.triangles = triangle_count(r.graph);
      }
    }
  } catch (const SaturationError& e) {
    r.saturated = true;
    r.achieved_rho2 = rho();
    throw RewireSaturation(std::string(e.what()) + "; achieved rho_2 = " +
                               std::to_string(r.achieved_rho2),
                           std::move(r));
  }
  r.achieved_rho2 = rho();
  return r;
}

}  // namespace higcn
