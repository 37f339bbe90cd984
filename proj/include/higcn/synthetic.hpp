#pragma once

// Seeded graph generators used by tests, the acceptance suite, and demos.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <set>
#include <vector>

#include "higcn/complex.hpp"
#include "higcn/dense.hpp"
#include "higcn/errors.hpp"
#include "higcn/graph.hpp"
#include "higcn/random.hpp"

namespace higcn::synthetic {

inline Graph erdos_renyi(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (bernoulli(rng, p)) edges.emplace_back(u, v);
  return make_graph(n, edges);
}

inline Graph complete(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return make_graph(n, edges);
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) edges.emplace_back(u, static_cast<NodeId>((u + 1) % n));
  return make_graph(n, edges);
}

inline Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u + 1 < n; ++u) edges.emplace_back(u, u + 1);
  return make_graph(n, edges);
}

// Center 0 with `leaves` leaves.
inline Graph star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return make_graph(leaves + 1, edges);
}

inline Graph disjoint_triangles(std::size_t count) {
  std::vector<Edge> edges;
  for (NodeId t = 0; t < count; ++t) {
    const NodeId b = 3 * t;
    edges.insert(edges.end(), {{b, b + 1}, {b + 1, b + 2}, {b, b + 2}});
  }
  return make_graph(3 * count, edges);
}

// Two triangles {0,1,2}, {3,4,5} joined by the matching 0-3, 1-4, 2-5.
inline Graph triangular_prism() {
  return make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {1, 4}, {2, 5}});
}

inline Graph complete_bipartite_3_3() {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < 3; ++u)
    for (NodeId v = 3; v < 6; ++v) edges.emplace_back(u, v);
  return make_graph(6, edges);
}

// Two equal blocks; labels are block ids and features the one-hot block indicator.
inline Graph planted_blocks(std::size_t n, double p_in, double p_out, Rng& rng) {
  std::vector<Edge> edges;
  std::vector<int> labels(n);
  for (std::size_t v = 0; v < n; ++v) labels[v] = v < n / 2 ? 0 : 1;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (bernoulli(rng, labels[u] == labels[v] ? p_in : p_out)) edges.emplace_back(u, v);
  Graph g = make_graph(n, edges);
  DenseMatrix x(n, 2);
  for (std::size_t v = 0; v < n; ++v) x(v, static_cast<std::size_t>(labels[v])) = 1.0;
  g.features = std::move(x);
  g.labels = std::move(labels);
  return g;
}

// Triangle-membership node task.
//
// 4-regular graph on n nodes. `triangles` disjoint planted triangles carry label 1;
// every other node carries label 0 and lies in no triangle. Each triangle node has its
// two triangle mates plus two label-0 neighbors; label-0 nodes have two or three
// label-1 neighbors, so one-hop label composition is nearly identical across classes.
// Features are [1, s] with s ~ N(+mu, 1) for label 1 and N(-mu, 1) for label 0.
struct TriangleTask {
  Graph graph;
  std::size_t triangles = 0;
  double mu = 0.0;
  // Number of label-0 nodes with exactly three label-1 neighbors.
  std::size_t heavy_zero_nodes = 0;
};

namespace detail {

class TriangleFreeBuilder {
 public:
  explicit TriangleFreeBuilder(std::size_t n) : adj_(n) {}
  bool can_add(NodeId u, NodeId v) const {
    if (u == v || adj_[u].count(v)) return false;
    const auto& small = adj_[u].size() < adj_[v].size() ? adj_[u] : adj_[v];
    const auto& large = adj_[u].size() < adj_[v].size() ? adj_[v] : adj_[u];
    for (auto w : small)
      if (large.count(w)) return false;
    return true;
  }
  void add(NodeId u, NodeId v) {
    adj_[u].insert(v);
    adj_[v].insert(u);
  }
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (NodeId u = 0; u < adj_.size(); ++u)
      for (auto v : adj_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

 private:
  std::vector<std::set<NodeId>> adj_;
};

// Greedily pairs stubs from `left` with stubs from `right` (or within `left` when right
// is null) without closing a triangle. False when some stub cannot be placed.
inline bool match_stubs(TriangleFreeBuilder& b, std::vector<NodeId> left,
                        std::vector<NodeId>* right, Rng& rng) {
  shuffle(left, rng);
  if (right) {
    shuffle(*right, rng);
    for (auto u : left) {
      bool placed = false;
      for (std::size_t j = 0; j < right->size(); ++j) {
        const NodeId v = (*right)[j];
        if (b.can_add(u, v)) {
          b.add(u, v);
          right->erase(right->begin() + static_cast<std::ptrdiff_t>(j));
          placed = true;
          break;
        }
      }
      if (!placed) return false;
    }
    return true;
  }
  while (!left.empty()) {
    const NodeId u = left.back();
    left.pop_back();
    bool placed = false;
    for (std::size_t j = 0; j < left.size(); ++j) {
      if (b.can_add(u, left[j])) {
        b.add(u, left[j]);
        left.erase(left.begin() + static_cast<std::ptrdiff_t>(j));
        placed = true;
        break;
      }
    }
    if (!placed) return false;
  }
  return true;
}

}  // namespace detail

inline TriangleTask triangle_task(std::size_t n, std::size_t triangles, double mu, Rng& rng) {
  const std::size_t ones = 3 * triangles;
  if (ones >= n) throw UsageError("triangle_task: too many triangles for n");
  const std::size_t zeros = n - ones;
  const std::size_t cross = 2 * ones;  // label-1 to label-0 edges
  if (cross < 2 * zeros || cross > 3 * zeros) {
    throw UsageError("triangle_task: label-0 nodes cannot take 2..3 label-1 neighbors each");
  }
  const std::size_t heavy = cross - 2 * zeros;
  if ((4 * zeros - cross) % 2 != 0) throw UsageError("triangle_task: odd stub count");

  for (int attempt = 0; attempt < 1000; ++attempt) {
    detail::TriangleFreeBuilder b(n);
    for (NodeId t = 0; t < triangles; ++t) {
      const NodeId s = 3 * t;
      b.add(s, s + 1);
      b.add(s + 1, s + 2);
      b.add(s, s + 2);
    }
    // Which label-0 nodes take three label-1 neighbors.
    std::vector<NodeId> zero_nodes(zeros);
    for (std::size_t i = 0; i < zeros; ++i) zero_nodes[i] = static_cast<NodeId>(ones + i);
    shuffle(zero_nodes, rng);
    std::vector<NodeId> one_stubs;
    for (NodeId v = 0; v < ones; ++v) one_stubs.insert(one_stubs.end(), {v, v});
    std::vector<NodeId> zero_cross;
    std::vector<NodeId> zero_inner;
    for (std::size_t i = 0; i < zeros; ++i) {
      const NodeId v = zero_nodes[i];
      const int c = i < heavy ? 3 : 2;
      for (int j = 0; j < c; ++j) zero_cross.push_back(v);
      for (int j = c; j < 4; ++j) zero_inner.push_back(v);
    }
    if (!detail::match_stubs(b, one_stubs, &zero_cross, rng)) continue;
    if (!detail::match_stubs(b, zero_inner, nullptr, rng)) continue;

    Graph g = make_graph(n, b.edges());
    const auto k = clique_lift(g, 2);
    if (k.count(2) != triangles) continue;
    std::vector<int> labels(n, 0);
    for (NodeId v = 0; v < ones; ++v) labels[v] = 1;
    DenseMatrix x(n, 2);
    for (std::size_t v = 0; v < n; ++v) {
      x(v, 0) = 1.0;
      x(v, 1) = normal(rng) + (labels[v] == 1 ? mu : -mu);
    }
    g.features = std::move(x);
    g.labels = std::move(labels);
    return {std::move(g), triangles, mu, heavy};
  }
  throw NumericalError("triangle_task: construction failed after 1000 restarts");
}

// Best achievable accuracy for the triangle task from a node's own feature and the mean
// feature of its four neighbors, computed by quadrature on the generative model. Under
// the construction both classes see a zero-mean neighbor average except the heavy
// label-0 nodes, whose neighbor mean is centered at mu/2.
inline double triangle_task_bayes_accuracy(std::size_t n, std::size_t triangles, double mu) {
  const std::size_t ones = 3 * triangles;
  const std::size_t zeros = n - ones;
  const std::size_t heavy = 2 * ones - 2 * zeros;
  const double pi1 = static_cast<double>(ones) / static_cast<double>(n);
  const double pi0 = 1.0 - pi1;
  const double heavy_share = static_cast<double>(heavy) / static_cast<double>(zeros);
  auto pdf = [](double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
  };
  constexpr double lim = 9.0;
  constexpr int steps = 1200;
  const double h = 2.0 * lim / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double s = -lim + i * h;
    for (int j = 0; j <= steps; ++j) {
      const double m = -lim / 2 + j * h / 2;
      const double f1 = pi1 * pdf(s, mu, 1.0) * pdf(m, 0.0, 0.5);
      const double f0 = pi0 * pdf(s, -mu, 1.0) *
                        ((1.0 - heavy_share) * pdf(m, 0.0, 0.5) + heavy_share * pdf(m, mu / 2, 0.5));
      acc += std::max(f0, f1) * h * (h / 2);
    }
  }
  return acc;
}

}  // namespace higcn::synthetic
