#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "higcn/errors.hpp"
#include "higcn/graph.hpp"
#include "higcn/sparse.hpp"

namespace higcn {

// Simplices of orders 1..max_order over nodes 0..n-1. Order p stores its simplices as a
// flat array with stride p+1; each simplex is a sorted node tuple and the list is in
// lexicographic order without duplicates. Order 0 (the nodes) is implicit.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  SimplicialComplex(std::size_t n, std::size_t max_order)
      : n_(n), flat_(max_order + 1) {}

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t max_order() const noexcept { return flat_.empty() ? 0 : flat_.size() - 1; }

  // n_p; n_0 is the node count.
  std::size_t count(std::size_t p) const {
    if (p == 0) return n_;
    if (p > max_order()) return 0;
    return flat_[p].size() / (p + 1);
  }

  std::span<const NodeId> simplex(std::size_t p, std::size_t i) const {
    return {flat_[p].data() + i * (p + 1), p + 1};
  }

  std::span<const NodeId> flat(std::size_t p) const { return flat_[p]; }

  // Index of a sorted simplex within order p, or count(p) when absent.
  std::size_t find(std::span<const NodeId> s) const {
    const std::size_t p = s.size() - 1;
    if (p == 0) return s[0] < n_ ? s[0] : n_;
    if (p > max_order()) return 0;
    std::size_t lo = 0;
    std::size_t hi = count(p);
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      auto m = simplex(p, mid);
      if (std::lexicographical_compare(m.begin(), m.end(), s.begin(), s.end())) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (lo < count(p)) {
      auto m = simplex(p, lo);
      if (std::equal(m.begin(), m.end(), s.begin(), s.end())) return lo;
    }
    return count(p);
  }

  bool contains(std::span<const NodeId> s) const {
    const std::size_t p = s.size() - 1;
    if (p > max_order()) return false;
    return find(s) < count(p);
  }

  // Appends to order p; callers keep lexicographic order (checked by validate()).
  void push(std::size_t p, std::span<const NodeId> s) {
    flat_[p].insert(flat_[p].end(), s.begin(), s.end());
  }

  // Sortedness, uniqueness, node range and downward closure.
  void validate() const {
    for (std::size_t p = 1; p <= max_order(); ++p) {
      for (std::size_t i = 0; i < count(p); ++i) {
        auto s = simplex(p, i);
        for (std::size_t j = 0; j < s.size(); ++j) {
          if (s[j] >= n_) throw DataError("simplex references node outside the complex");
          if (j > 0 && s[j] <= s[j - 1]) throw DataError("simplex members not strictly ascending");
        }
        if (i > 0) {
          auto prev = simplex(p, i - 1);
          if (!std::lexicographical_compare(prev.begin(), prev.end(), s.begin(), s.end())) {
            throw DataError("order " + std::to_string(p) + " simplices not sorted/unique");
          }
        }
        if (p >= 2) {
          std::vector<NodeId> face(p);
          for (std::size_t skip = 0; skip <= p; ++skip) {
            std::size_t k = 0;
            for (std::size_t j = 0; j <= p; ++j)
              if (j != skip) face[k++] = s[j];
            if (!contains(face)) {
              throw DataError("complex is not closed under faces at order " + std::to_string(p));
            }
          }
        }
      }
    }
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::vector<NodeId>> flat_;
};

// Every (p+1)-clique of g becomes a p-simplex, for 1 <= p <= max_order. Each p-clique is
// extended by common neighbors with ids above its largest member, so no clique is
// generated twice and the output order is lexicographic.
inline SimplicialComplex clique_lift(const Graph& g, std::size_t max_order) {
  if (max_order < 1) throw UsageError("clique_lift: max_order must be >= 1");
  SimplicialComplex k(g.n, max_order);
  const auto adj = g.adjacency();
  for (auto [u, v] : g.edges) {
    const NodeId e[2] = {u, v};
    k.push(1, e);
  }
  std::vector<NodeId> grown;
  for (std::size_t p = 2; p <= max_order; ++p) {
    for (std::size_t i = 0; i < k.count(p - 1); ++i) {
      auto base = k.simplex(p - 1, i);
      const NodeId last = base.back();
      const auto& cand = adj[last];
      for (auto it = std::upper_bound(cand.begin(), cand.end(), last); it != cand.end(); ++it) {
        const NodeId w = *it;
        bool all = true;
        for (std::size_t j = 0; j + 1 < base.size() && all; ++j) {
          all = std::binary_search(adj[base[j]].begin(), adj[base[j]].end(), w);
        }
        if (!all) continue;
        grown.assign(base.begin(), base.end());
        grown.push_back(w);
        k.push(p, grown);
      }
    }
  }
  return k;
}

// Builds a complex from arbitrary simplices (any order >= 1), adding all faces of order >= 1.
inline SimplicialComplex close_downward(std::size_t n,
                                        const std::vector<std::vector<NodeId>>& simplices) {
  std::size_t max_order = 1;
  std::vector<std::vector<std::vector<NodeId>>> by_order;
  for (const auto& raw : simplices) {
    std::vector<NodeId> s = raw;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw DataError("simplex with repeated node");
    }
    if (s.size() < 2) continue;
    for (auto v : s)
      if (v >= n) throw DataError("simplex references node >= n");
    max_order = std::max(max_order, s.size() - 1);
    if (by_order.size() < s.size()) by_order.resize(s.size());
    by_order[s.size() - 1].push_back(std::move(s));
  }
  by_order.resize(max_order + 1);
  for (std::size_t p = max_order; p >= 2; --p) {
    for (const auto& s : by_order[p]) {
      for (std::size_t skip = 0; skip <= p; ++skip) {
        std::vector<NodeId> face;
        face.reserve(p);
        for (std::size_t j = 0; j <= p; ++j)
          if (j != skip) face.push_back(s[j]);
        by_order[p - 1].push_back(std::move(face));
      }
    }
  }
  SimplicialComplex k(n, max_order);
  for (std::size_t p = 1; p <= max_order; ++p) {
    auto& list = by_order[p];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    for (const auto& s : list) k.push(p, s);
  }
  return k;
}

// 0/1 node-by-simplex incidence of order p.
struct IncidenceMatrix {
  std::size_t order = 0;
  SparseMatrix h;

  std::size_t num_nodes() const noexcept { return h.rows(); }
  std::size_t num_simplices() const noexcept { return h.cols(); }

  // d_p(u): number of p-simplices containing u.
  std::vector<double> node_degrees() const {
    std::vector<double> d(h.rows(), 0.0);
    for (std::size_t r = 0; r < h.rows(); ++r) d[r] = static_cast<double>(h.row_cols(r).size());
    return d;
  }
};

inline IncidenceMatrix incidence_matrix(const SimplicialComplex& k, std::size_t p) {
  if (p < 1 || p > k.max_order()) {
    throw UsageError("incidence_matrix: order " + std::to_string(p) + " outside [1, " +
                     std::to_string(k.max_order()) + "]");
  }
  std::vector<Triplet> t;
  t.reserve(k.count(p) * (p + 1));
  for (std::size_t i = 0; i < k.count(p); ++i)
    for (NodeId v : k.simplex(p, i)) t.push_back({v, i, 1.0});
  return {p, SparseMatrix::from_triplets(k.num_nodes(), k.count(p), std::move(t))};
}

}  // namespace higcn
