#pragma once

// Coauthorship complexes: one record per simplex (a paper team) with an integer signal
// (its number of joint papers). Order-0 records carry per-author signals.
//
// File format, one simplex per line:   order<TAB>node,node,...<TAB>signal

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "higcn/complex.hpp"
#include "higcn/errors.hpp"
#include "higcn/graph.hpp"
#include "higcn/random.hpp"

namespace higcn {

struct CoauthorshipRecord {
  std::vector<NodeId> nodes;
  double signal = 0.0;
};

struct CoauthorshipComplex {
  SimplicialComplex complex{0, 1};
  std::vector<double> node_signal;
  // simplex_signal[p - 1][i] belongs to complex.simplex(p, i); faces added only by
  // closure carry 0.
  std::vector<std::vector<double>> simplex_signal;
  std::size_t dropped = 0;  // higher-order records discarded for low signal

  std::size_t num_nodes() const { return node_signal.size(); }
};

// Retains higher-order records with signal > min_signal, closes them downward, and
// attaches signals. Node count is 1 + the largest id seen in any record.
inline CoauthorshipComplex build_coauthorship(const std::vector<CoauthorshipRecord>& records,
                                              double min_signal = 2.0) {
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.nodes.empty()) throw DataError("coauthorship record without nodes");
    if (!(r.signal >= 0.0)) throw DataError("coauthorship signal must be non-negative");
    for (auto v : r.nodes) n = std::max<std::size_t>(n, std::size_t{v} + 1);
  }
  CoauthorshipComplex out;
  out.node_signal.assign(n, 0.0);
  std::map<std::vector<NodeId>, double> listed;
  std::vector<std::vector<NodeId>> kept;
  for (const auto& r : records) {
    std::vector<NodeId> s = r.nodes;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw DataError("coauthorship record repeats a node");
    }
    if (s.size() == 1) {
      out.node_signal[s[0]] = r.signal;
      continue;
    }
    listed[s] = r.signal;
    if (r.signal > min_signal) {
      kept.push_back(std::move(s));
    } else {
      ++out.dropped;
    }
  }
  out.complex = close_downward(n, kept);
  out.simplex_signal.resize(out.complex.max_order());
  for (std::size_t p = 1; p <= out.complex.max_order(); ++p) {
    auto& sig = out.simplex_signal[p - 1];
    sig.assign(out.complex.count(p), 0.0);
    for (std::size_t i = 0; i < sig.size(); ++i) {
      auto span = out.complex.simplex(p, i);
      auto it = listed.find(std::vector<NodeId>(span.begin(), span.end()));
      if (it != listed.end()) sig[i] = it->second;
    }
  }
  return out;
}

inline std::vector<CoauthorshipRecord> parse_coauthorship(std::istream& in,
                                                          const std::string& source = "<stream>") {
  std::vector<CoauthorshipRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    const auto fields = detail::split_any(s, "\t");
    if (fields.size() != 3) throw DataError(where + "expected order<TAB>nodes<TAB>signal");
    std::size_t order = 0;
    if (!detail::parse_number(fields[0], order)) throw DataError(where + "bad order");
    CoauthorshipRecord r;
    for (auto part : detail::split_any(fields[1], ",")) {
      NodeId v = 0;
      if (!detail::parse_number(part, v)) throw DataError(where + "bad node id");
      r.nodes.push_back(v);
    }
    if (r.nodes.size() != order + 1) {
      throw DataError(where + "order " + std::to_string(order) + " needs " +
                      std::to_string(order + 1) + " nodes");
    }
    if (!detail::parse_number(fields[2], r.signal) || r.signal < 0.0) {
      throw DataError(where + "signal must be a non-negative number");
    }
    records.push_back(std::move(r));
  }
  return records;
}

inline CoauthorshipComplex load_coauthorship(const std::string& path) {
  auto in = detail::open_input(path);
  return build_coauthorship(parse_coauthorship(in, path));
}

inline void write_coauthorship(std::ostream& out, const std::vector<CoauthorshipRecord>& records) {
  for (const auto& r : records) {
    out << r.nodes.size() - 1 << '\t';
    for (std::size_t i = 0; i < r.nodes.size(); ++i) out << (i ? "," : "") << r.nodes[i];
    out << '\t' << r.signal << '\n';
  }
}

namespace synthetic {

namespace detail {

inline std::size_t poisson(Rng& rng, double mean) {
  const double limit = std::exp(-mean);
  std::size_t k = 0;
  double prod = uniform01(rng);
  while (prod > limit) {
    ++k;
    prod *= uniform01(rng);
  }
  return k;
}

inline std::size_t weighted_pick(const std::vector<double>& w, Rng& rng) {
  double total = 0.0;
  for (double x : w) total += x;
  double r = uniform01(rng) * total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    r -= w[i];
    if (r < 0.0) return i;
  }
  return w.size() - 1;
}

}  // namespace detail

// Authors split into communities; each community owns a few stable teams of 2-4
// productivity-weighted members that publish repeatedly. An author's signal is the total
// number of papers they appear on (team papers plus solo papers).
inline std::vector<CoauthorshipRecord> coauthorship_records(std::size_t authors, Rng& rng,
                                                            std::size_t community_size = 25,
                                                            std::size_t teams_per_community = 14) {
  if (authors < community_size) throw UsageError("coauthorship: fewer authors than one community");
  std::vector<double> productivity(authors);
  for (auto& w : productivity) w = std::exp(0.8 * normal(rng));
  std::vector<double> papers(authors, 0.0);
  std::map<std::vector<NodeId>, double> teams;

  for (std::size_t start = 0; start < authors; start += community_size) {
    const std::size_t end = std::min(authors, start + community_size);
    for (std::size_t t = 0; t < teams_per_community; ++t) {
      const std::size_t size = 2 + uniform_index(rng, 3);
      std::vector<double> w(productivity.begin() + static_cast<std::ptrdiff_t>(start),
                            productivity.begin() + static_cast<std::ptrdiff_t>(end));
      std::vector<NodeId> team;
      double team_weight = 0.0;
      for (std::size_t j = 0; j < size && j < w.size(); ++j) {
        const auto pick = detail::weighted_pick(w, rng);
        team.push_back(static_cast<NodeId>(start + pick));
        team_weight += w[pick];
        w[pick] = 0.0;
      }
      std::sort(team.begin(), team.end());
      const double count = static_cast<double>(detail::poisson(rng, 1.5 * team_weight / team.size() + 0.5));
      if (count == 0.0) continue;
      teams[team] += count;
      for (auto v : team) papers[v] += count;
    }
  }
  for (std::size_t v = 0; v < authors; ++v) {
    papers[v] += static_cast<double>(detail::poisson(rng, 2.0 * productivity[v]));
  }

  std::vector<CoauthorshipRecord> records;
  records.reserve(authors + teams.size());
  for (std::size_t v = 0; v < authors; ++v) records.push_back({{static_cast<NodeId>(v)}, papers[v]});
  for (const auto& [team, count] : teams) records.push_back({team, count});
  return records;
}

}  // namespace synthetic

}  // namespace higcn
