#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "higcn/dense.hpp"
#include "higcn/errors.hpp"

namespace higcn {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Simple undirected graph. Edges are canonical (u < v), sorted, and unique.
struct Graph {
  std::size_t n = 0;
  std::vector<Edge> edges;
  std::optional<DenseMatrix> features;
  std::optional<std::vector<int>> labels;

  std::size_t num_edges() const noexcept { return edges.size(); }

  // Sorted neighbor lists.
  std::vector<std::vector<NodeId>> adjacency() const {
    std::vector<std::vector<NodeId>> adj(n);
    for (auto [u, v] : edges) {
      adj[u].push_back(v);
      adj[v].push_back(u);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
  }

  std::vector<std::size_t> degrees() const {
    std::vector<std::size_t> deg(n, 0);
    for (auto [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    return deg;
  }

  bool has_edge(NodeId u, NodeId v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), Edge{u, v});
  }
};

struct EdgeCleanup {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;
};

// Canonicalizes (u < v), drops self-loops, collapses duplicates.
inline Graph make_graph(std::size_t n, std::span<const Edge> raw, EdgeCleanup* cleanup = nullptr) {
  Graph g;
  g.n = n;
  EdgeCleanup c;
  g.edges.reserve(raw.size());
  for (auto [u, v] : raw) {
    if (u >= n || v >= n) {
      throw DataError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                      ") references a node >= n=" + std::to_string(n));
    }
    if (u == v) {
      ++c.self_loops;
      continue;
    }
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(g.edges.begin(), g.edges.end());
  const auto before = g.edges.size();
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  c.duplicates = before - g.edges.size();
  if (cleanup) *cleanup = c;
  return g;
}

inline Graph make_graph(std::size_t n, std::initializer_list<Edge> raw) {
  return make_graph(n, std::span<const Edge>(raw.begin(), raw.size()));
}

// Relabels node i to perm[i]; features and labels move with their nodes.
inline Graph permute_graph(const Graph& g, std::span<const std::size_t> perm) {
  if (perm.size() != g.n) throw UsageError("permute_graph: permutation size mismatch");
  std::vector<Edge> raw;
  raw.reserve(g.edges.size());
  for (auto [u, v] : g.edges) {
    raw.emplace_back(static_cast<NodeId>(perm[u]), static_cast<NodeId>(perm[v]));
  }
  Graph out = make_graph(g.n, raw);
  if (g.features) {
    DenseMatrix f(g.n, g.features->cols());
    for (std::size_t i = 0; i < g.n; ++i) {
      auto src = g.features->row(i);
      std::copy(src.begin(), src.end(), f.row(perm[i]).begin());
    }
    out.features = std::move(f);
  }
  if (g.labels) {
    std::vector<int> l(g.n);
    for (std::size_t i = 0; i < g.n; ++i) l[perm[i]] = (*g.labels)[i];
    out.labels = std::move(l);
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars for doubles is available in libstdc++ 11.
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  } else {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  }
}

inline std::vector<std::string_view> split_any(std::string_view s, std::string_view seps) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find_first_of(seps, pos);
    const auto end = next == std::string_view::npos ? s.size() : next;
    if (end > pos) parts.push_back(s.substr(pos, end - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

struct EdgeList {
  std::optional<std::size_t> declared_n;
  std::vector<Edge> edges;
};

// Parses "u<TAB>v" rows (any whitespace accepted). An optional first line "#n=<count>"
// declares the node count; other '#' lines are comments.
inline EdgeList parse_edge_list(std::istream& in, const std::string& source = "<stream>") {
  EdgeList out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = detail::trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      if (s.substr(0, 3) == "#n=") {
        std::size_t n = 0;
        if (!detail::parse_number(s.substr(3), n)) {
          throw DataError(source + ":" + std::to_string(lineno) + ": bad node-count header");
        }
        out.declared_n = n;
      }
      continue;
    }
    auto parts = detail::split_any(s, " \t,");
    NodeId u = 0;
    NodeId v = 0;
    if (parts.size() != 2 || !detail::parse_number(parts[0], u) ||
        !detail::parse_number(parts[1], v)) {
      throw DataError(source + ":" + std::to_string(lineno) + ": unparsable edge row '" +
                      std::string(s) + "'");
    }
    out.edges.emplace_back(u, v);
  }
  return out;
}

inline DenseMatrix parse_feature_csv(std::istream& in, const std::string& source = "<stream>") {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto parts = detail::split_any(s, ",");
    if (rows == 0) cols = parts.size();
    if (parts.size() != cols) {
      throw DataError(source + ":" + std::to_string(lineno) + ": expected " +
                      std::to_string(cols) + " features, got " + std::to_string(parts.size()));
    }
    for (auto p : parts) {
      double x = 0.0;
      if (!detail::parse_number(p, x)) {
        throw DataError(source + ":" + std::to_string(lineno) + ": unparsable feature '" +
                        std::string(p) + "'");
      }
      values.push_back(x);
    }
    ++rows;
  }
  return DenseMatrix(rows, cols, std::move(values));
}

inline std::vector<int> parse_label_csv(std::istream& in, const std::string& source = "<stream>") {
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    int y = 0;
    if (!detail::parse_number(s, y)) {
      throw DataError(source + ":" + std::to_string(lineno) + ": unparsable label '" +
                      std::string(s) + "'");
    }
    labels.push_back(y);
  }
  return labels;
}

struct LoadedGraph {
  Graph graph;
  EdgeCleanup cleanup;
};

// Reads the edge TSV plus optional row-aligned feature/label CSVs. Labels must lie in
// [0, num_classes) when num_classes is given, and be non-negative otherwise.
inline LoadedGraph load_graph(const std::string& edge_path,
                              const std::optional<std::string>& feature_path = std::nullopt,
                              const std::optional<std::string>& label_path = std::nullopt,
                              std::optional<int> num_classes = std::nullopt) {
  auto in = detail::open_input(edge_path);
  EdgeList list = parse_edge_list(in, edge_path);
  std::size_t n = list.declared_n.value_or(0);
  if (!list.declared_n) {
    for (auto [u, v] : list.edges) n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
  }
  LoadedGraph out;
  out.graph = make_graph(n, list.edges, &out.cleanup);

  if (feature_path) {
    auto fin = detail::open_input(*feature_path);
    DenseMatrix x = parse_feature_csv(fin, *feature_path);
    if (x.rows() != n) {
      throw DataError(*feature_path + ": feature row count " + std::to_string(x.rows()) +
                      " != n=" + std::to_string(n));
    }
    out.graph.features = std::move(x);
  }
  if (label_path) {
    auto lin = detail::open_input(*label_path);
    auto y = parse_label_csv(lin, *label_path);
    if (y.size() != n) {
      throw DataError(*label_path + ": label count " + std::to_string(y.size()) +
                      " != n=" + std::to_string(n));
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] < 0 || (num_classes && y[i] >= *num_classes)) {
        throw DataError(*label_path + ": label " + std::to_string(y[i]) + " of node " +
                        std::to_string(i) + " outside the class range");
      }
    }
    out.graph.labels = std::move(y);
  }
  return out;
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << "#n=" << g.n << '\n';
  for (auto [u, v] : g.edges) out << u << '\t' << v << '\n';
}

}  // namespace higcn
