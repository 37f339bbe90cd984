#pragma once

// End-to-end pipelines: node classification, node-signal imputation on coauthorship
// complexes, and graph classification with a pooled readout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "higcn/coauthorship.hpp"
#include "higcn/complex.hpp"
#include "higcn/config.hpp"
#include "higcn/errors.hpp"
#include "higcn/fp_operator.hpp"
#include "higcn/graph.hpp"
#include "higcn/kendall.hpp"
#include "higcn/metrics.hpp"
#include "higcn/model.hpp"
#include "higcn/parallel.hpp"
#include "higcn/random.hpp"
#include "higcn/splits.hpp"

namespace higcn {

// Lift, build A_1..A_P, and precompute A_p^k X.
inline PropagatedFeatures prepare_features(const Graph& g, const DenseMatrix& x, std::size_t P,
                                           std::size_t K) {
  if (x.rows() != g.n) throw DataError("feature rows do not match node count");
  const auto ops = build_fp_operators(clique_lift(g, P), P);
  return propagate_features(ops, x, K);
}

inline double compute_homophily(const Graph& g) {
  if (!g.labels) throw DataError("homophily: graph has no labels");
  if (g.edges.empty()) throw DataError("homophily: graph has no edges");
  std::size_t same = 0;
  for (auto [u, v] : g.edges) same += (*g.labels)[u] == (*g.labels)[v] ? 1 : 0;
  return static_cast<double>(same) / static_cast<double>(g.edges.size());
}

inline std::size_t class_count(std::span<const int> labels) {
  int top = -1;
  for (int y : labels) {
    if (y < 0) throw DataError("labels must be non-negative");
    top = std::max(top, y);
  }
  return static_cast<std::size_t>(top + 1);
}

// ---------------------------------------------------------------- node classification

struct NodeRun {
  std::uint64_t seed = 0;
  double test_accuracy = 0.0;
  double val_accuracy = 0.0;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
  std::size_t epochs_run = 0;
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  HigcnParams best;

  nlohmann::json to_json() const {
    return {{"seed", seed},
            {"test_accuracy", test_accuracy},
            {"micro_f1", test_accuracy},
            {"val_accuracy", val_accuracy},
            {"best_epoch", best_epoch},
            {"best_val_loss", best_val_loss},
            {"epochs_run", epochs_run},
            {"strength", strength(best)},
            {"train_loss", train_loss},
            {"val_loss", val_loss}};
  }
};

// Adam on the training mask; keeps the parameters with the lowest validation loss and
// stops after `patience` epochs without improvement.
inline NodeRun train_node_run(const PropagatedFeatures& feats, std::span<const int> labels,
                              std::size_t classes, const SplitSpec& split, const TaskConfig& cfg,
                              std::uint64_t seed) {
  const ModelConfig mc = model_config(cfg, feats.feature_dim(), classes);
  HigcnParams params = init_params(mc, seed);
  AdamState state;
  const AdamConfig adam{cfg.lr};
  NodeRun run;
  run.seed = seed;
  run.best = params;
  run.best_val_loss = std::numeric_limits<double>::infinity();
  const std::size_t epochs = cfg.epochs_or(1000);

  auto val_nll = [&](const DenseMatrix& out) {
    double s = 0.0;
    for (auto i : split.val) s -= out(i, static_cast<std::size_t>(labels[i]));
    return s / static_cast<double>(split.val.size());
  };

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    const auto lg = loss_and_grad(params, feats, labels, split.train, cfg.weight_decay, cfg.decay_gamma);
    adam_step(params, lg.grads, state, adam);
    run.train_loss.push_back(lg.loss);
    const double vl = val_nll(forward(params, feats).output);
    run.val_loss.push_back(vl);
    run.epochs_run = epoch + 1;
    if (vl < run.best_val_loss) {
      run.best_val_loss = vl;
      run.best_epoch = epoch;
      run.best = params;
    } else if (epoch - run.best_epoch >= cfg.patience) {
      break;
    }
  }
  const auto pred = predict_classes(forward(run.best, feats).output);
  run.test_accuracy = accuracy(pred, labels, split.test);
  run.val_accuracy = accuracy(pred, labels, split.val);
  return run;
}

// One run per seed: the seed fixes both the split and the initialization.
inline std::vector<NodeRun> node_classification_runs(const Graph& g, const TaskConfig& cfg,
                                                     std::size_t jobs = 1) {
  if (!g.features) throw DataError("node classification needs node features");
  if (!g.labels) throw DataError("node classification needs node labels");
  const auto feats = prepare_features(g, *g.features, cfg.P, cfg.K);
  const std::vector<int>& labels = *g.labels;
  const std::size_t classes = class_count(labels);
  return run_indexed<NodeRun>(cfg.seeds.size(), jobs, [&](std::size_t i) {
    const auto split = make_splits(g.n, cfg.split, cfg.seeds[i]);
    return train_node_run(feats, labels, classes, split, cfg, cfg.seeds[i]);
  });
}

inline MetricsReport node_report(const std::vector<NodeRun>& runs, const TaskConfig& cfg) {
  MetricsReport r;
  r.task = "node_classification";
  r.metric = "test_accuracy";
  r.seeds = cfg.seeds;
  for (const auto& run : runs) {
    r.values.push_back(run.test_accuracy);
    r.runs.push_back(run.to_json());
  }
  r.extra["config"] = to_json(cfg);
  return r;
}

inline MetricsReport train_node_classification(const Graph& g, const TaskConfig& cfg,
                                               std::size_t jobs = 1) {
  return node_report(node_classification_runs(g, cfg, jobs), cfg);
}

// ---------------------------------------------------------------- signal imputation

struct ImputeRun {
  std::uint64_t seed = 0;
  double tau = 0.0;
  bool constant_signal = false;
  bool constant_prediction = false;
  std::size_t known = 0;
  double final_loss = 0.0;
  std::vector<double> predictions;

  nlohmann::json to_json() const {
    nlohmann::json j{{"seed", seed},         {"kendall_tau", tau}, {"known", known},
                     {"final_loss", final_loss}};
    if (constant_signal) j["constant_signal"] = true;
    if (constant_prediction) j["constant_prediction"] = true;
    return j;
  }
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) throw UsageError("median of an empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

inline std::size_t known_count(std::size_t n, double known_fraction) {
  if (!(known_fraction > 0.0 && known_fraction < 1.0)) {
    throw UsageError("known_fraction must lie in (0, 1)");
  }
  const auto known = static_cast<std::size_t>(std::llround(known_fraction * static_cast<double>(n)));
  if (known == 0) throw UsageError("known_fraction leaves every signal masked");
  if (known >= n) throw UsageError("known_fraction leaves no signal masked");
  return known;
}

// Masks a seeded share of node signals, fills them with the known median, trains an
// identity-head HiGCN with l1 loss on the known entries, and ranks all nodes.
inline ImputeRun impute_run(const CoauthorshipComplex& cc, std::span<const FpOperator> ops,
                            double known_fraction, const TaskConfig& cfg, std::uint64_t seed) {
  const std::size_t n = cc.num_nodes();
  ImputeRun run;
  run.seed = seed;
  run.known = known_count(n, known_fraction);
  Rng rng = make_rng(seed, 0x696d7075);
  auto perm = random_permutation(n, rng);
  std::vector<std::size_t> known(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(run.known));
  std::sort(known.begin(), known.end());

  std::vector<double> known_values;
  for (auto i : known) known_values.push_back(cc.node_signal[i]);
  const double median = median_of(known_values);
  const double scale = std::max(median, 1.0);
  std::vector<double> filled(n, median);
  for (auto i : known) filled[i] = cc.node_signal[i];

  DenseMatrix x(n, 2);
  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = filled[i] / scale;
    x(i, 1) = 1.0;
    targets[i] = filled[i] / scale;
  }
  const auto feats = propagate_features(ops, x, cfg.K);
  HigcnParams params = init_params(model_config(cfg, 2, 1, OutputHead::kIdentity), seed);
  AdamState state;
  const AdamConfig adam{cfg.lr};
  const std::size_t iterations = cfg.epochs_or(500);
  for (std::size_t it = 0; it < iterations; ++it) {
    const auto lg = l1_loss_and_grad(params, feats, targets, known, cfg.weight_decay, cfg.decay_gamma);
    adam_step(params, lg.grads, state, adam);
    run.final_loss = lg.loss;
  }
  const auto out = forward(params, feats).output;
  run.predictions.resize(n);
  for (std::size_t i = 0; i < n; ++i) run.predictions[i] = out(i, 0) * scale;

  const auto counts = kendall_counts(cc.node_signal, run.predictions);
  if (counts.pairs == counts.ties_a) run.constant_signal = true;
  if (counts.pairs == counts.ties_b) run.constant_prediction = true;
  run.tau = tau_b_from_counts(counts).value_or(0.0);
  return run;
}

inline std::vector<FpOperator> coauthorship_operators(const CoauthorshipComplex& cc, std::size_t P) {
  return build_fp_operators(cc.complex, P);
}

inline MetricsReport impute_signals(const CoauthorshipComplex& cc, double known_fraction,
                                    const TaskConfig& cfg, std::size_t jobs = 1) {
  known_count(cc.num_nodes(), known_fraction);
  const auto ops = coauthorship_operators(cc, cfg.P);
  const auto runs = run_indexed<ImputeRun>(cfg.seeds.size(), jobs, [&](std::size_t i) {
    return impute_run(cc, ops, known_fraction, cfg, cfg.seeds[i]);
  });
  MetricsReport r;
  r.task = "imputation";
  r.metric = "kendall_tau";
  r.seeds = cfg.seeds;
  for (const auto& run : runs) {
    r.values.push_back(run.tau);
    r.runs.push_back(run.to_json());
  }
  r.extra["known_fraction"] = known_fraction;
  r.extra["nodes"] = cc.num_nodes();
  r.extra["dropped_low_signal"] = cc.dropped;
  r.extra["config"] = to_json(cfg);
  return r;
}

// ---------------------------------------------------------------- graph classification

struct LabeledGraph {
  Graph graph;
  int label = 0;
};

// Blocks separated by "#graph <label>" lines; each block may start with "#n=<count>"
// and then lists edge rows like an edge TSV.
inline std::vector<LabeledGraph> parse_graph_list(std::istream& in,
                                                  const std::string& source = "<stream>") {
  struct Pending {
    int label = 0;
    std::optional<std::size_t> n;
    std::vector<Edge> edges;
  };
  std::vector<Pending> blocks;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = detail::trim(line);
    const auto where = source + ":" + std::to_string(lineno) + ": ";
    if (s.empty()) continue;
    if (s.substr(0, 6) == "#graph") {
      Pending p;
      if (!detail::parse_number(s.substr(6), p.label) || p.label < 0) {
        throw DataError(where + "expected '#graph <non-negative label>'");
      }
      blocks.push_back(std::move(p));
      continue;
    }
    if (s.substr(0, 3) == "#n=") {
      if (blocks.empty()) throw DataError(where + "node-count header before any '#graph' line");
      std::size_t n = 0;
      if (!detail::parse_number(s.substr(3), n)) throw DataError(where + "bad node-count header");
      blocks.back().n = n;
      continue;
    }
    if (s.front() == '#') continue;
    if (blocks.empty()) throw DataError(where + "edge row before any '#graph' line");
    const auto parts = detail::split_any(s, " \t,");
    NodeId u = 0;
    NodeId v = 0;
    if (parts.size() != 2 || !detail::parse_number(parts[0], u) || !detail::parse_number(parts[1], v)) {
      throw DataError(where + "unparsable edge row '" + std::string(s) + "'");
    }
    blocks.back().edges.emplace_back(u, v);
  }
  std::vector<LabeledGraph> out;
  for (auto& b : blocks) {
    std::size_t n = b.n.value_or(0);
    for (auto [u, v] : b.edges) {
      const std::size_t need = std::size_t{std::max(u, v)} + 1;
      if (b.n && need > n) throw DataError(source + ": edge endpoint exceeds declared node count");
      n = std::max(n, need);
    }
    if (n == 0) throw DataError(source + ": graph without nodes");
    out.push_back({make_graph(n, b.edges), b.label});
  }
  return out;
}

inline std::vector<LabeledGraph> load_graph_list(const std::string& path) {
  auto in = detail::open_input(path);
  return parse_graph_list(in, path);
}

inline void write_graph_list(std::ostream& out, const std::vector<LabeledGraph>& graphs) {
  for (const auto& lg : graphs) {
    out << "#graph " << lg.label << '\n';
    write_edge_list(out, lg.graph);
  }
}

// One-hot degree features; degrees above the cap land in the last column.
inline DenseMatrix degree_one_hot(const Graph& g, std::size_t max_degree) {
  DenseMatrix x(g.n, max_degree + 1);
  const auto deg = g.degrees();
  for (std::size_t v = 0; v < g.n; ++v) x(v, std::min(deg[v], max_degree)) = 1.0;
  return x;
}

struct GraphClassRun {
  std::uint64_t seed = 0;
  double accuracy = 0.0;        // max over epochs of the fold-mean validation accuracy
  std::size_t best_epoch = 0;
  std::vector<double> mean_val_accuracy;  // per epoch

  nlohmann::json to_json() const {
    return {{"seed", seed},
            {"accuracy", accuracy},
            {"best_epoch", best_epoch},
            {"mean_val_accuracy", mean_val_accuracy}};
  }
};

inline int predict_graph(const HigcnParams& params, const PropagatedFeatures& feats, Readout r) {
  const auto lp = graph_log_probs(params, feats, r);
  return static_cast<int>(std::max_element(lp.begin(), lp.end()) - lp.begin());
}

inline GraphClassRun graph_classify_run(const std::vector<LabeledGraph>& graphs,
                                        const std::vector<std::vector<FpOperator>>& ops,
                                        const TaskConfig& cfg, std::uint64_t seed) {
  std::vector<int> labels;
  for (const auto& g : graphs) labels.push_back(g.label);
  const std::size_t classes = class_count(labels);
  const auto folds = stratified_folds(labels, cfg.folds, seed);
  const std::size_t epochs = cfg.epochs_or(100);
  const bool given_features = std::all_of(graphs.begin(), graphs.end(),
                                          [](const LabeledGraph& g) { return g.graph.features.has_value(); });

  GraphClassRun run;
  run.seed = seed;
  run.mean_val_accuracy.assign(epochs, 0.0);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto& val = folds[f];
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    std::sort(train.begin(), train.end());

    std::size_t cap = 0;
    if (!given_features) {
      for (auto i : train)
        for (auto d : graphs[i].graph.degrees()) cap = std::max(cap, d);
    }
    std::vector<PropagatedFeatures> feats;
    feats.reserve(graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      const DenseMatrix x = given_features ? *graphs[i].graph.features : degree_one_hot(graphs[i].graph, cap);
      feats.push_back(propagate_features(ops[i], x, cfg.K));
    }
    const std::size_t dim = feats.front().feature_dim();
    for (const auto& pf : feats)
      if (pf.feature_dim() != dim) throw DataError("graph features disagree in width");

    HigcnParams params = init_params(model_config(cfg, dim, classes), seed * 1000003 + f);
    AdamState state;
    const AdamConfig adam{cfg.lr};
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
      const auto lg = graph_loss_and_grad(params, feats, labels, train, cfg.readout, cfg.weight_decay,
                                          cfg.decay_gamma);
      adam_step(params, lg.grads, state, adam);
      std::size_t hit = 0;
      for (auto i : val) hit += predict_graph(params, feats[i], cfg.readout) == labels[i] ? 1 : 0;
      run.mean_val_accuracy[epoch] += static_cast<double>(hit) / static_cast<double>(val.size()) /
                                      static_cast<double>(folds.size());
    }
  }
  const auto best = std::max_element(run.mean_val_accuracy.begin(), run.mean_val_accuracy.end());
  run.best_epoch = static_cast<std::size_t>(best - run.mean_val_accuracy.begin());
  run.accuracy = *best;
  return run;
}

inline MetricsReport graph_classify(const std::vector<LabeledGraph>& graphs, const TaskConfig& cfg,
                                    std::size_t jobs = 1) {
  if (graphs.empty()) throw DataError("graph classification needs at least one graph");
  std::vector<std::vector<FpOperator>> ops;
  ops.reserve(graphs.size());
  for (const auto& g : graphs) ops.push_back(build_fp_operators(clique_lift(g.graph, cfg.P), cfg.P));
  const auto runs = run_indexed<GraphClassRun>(cfg.seeds.size(), jobs, [&](std::size_t i) {
    return graph_classify_run(graphs, ops, cfg, cfg.seeds[i]);
  });
  MetricsReport r;
  r.task = "graph_classification";
  r.metric = "accuracy";
  r.seeds = cfg.seeds;
  for (const auto& run : runs) {
    r.values.push_back(run.accuracy);
    r.runs.push_back(run.to_json());
  }
  r.extra["graphs"] = graphs.size();
  r.extra["readout"] = to_string(cfg.readout);
  r.extra["config"] = to_json(cfg);
  return r;
}

namespace synthetic {

// Class 0: two disjoint triangles; class 1: a 6-cycle. Each copy is randomly relabeled.
inline std::vector<LabeledGraph> triangles_vs_cycles(std::size_t per_class, Rng& rng) {
  std::vector<LabeledGraph> out;
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const int label = static_cast<int>(i % 2);
    Graph base;
    if (label == 0) {
      base = make_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
    } else {
      base = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
    }
    const auto perm = random_permutation(6, rng);
    out.push_back({permute_graph(base, perm), label});
  }
  return out;
}

}  // namespace synthetic

}  // namespace higcn
