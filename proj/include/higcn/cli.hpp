#pragma once

// Command-line front end. `run` is callable in-process so tests can drive it.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical or saturation error.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "higcn/checkpoint.hpp"
#include "higcn/coauthorship.hpp"
#include "higcn/complex.hpp"
#include "higcn/config.hpp"
#include "higcn/errors.hpp"
#include "higcn/fp_operator.hpp"
#include "higcn/graph.hpp"
#include "higcn/log.hpp"
#include "higcn/model.hpp"
#include "higcn/nullmodel.hpp"
#include "higcn/tasks.hpp"
#include "higcn/wl.hpp"

namespace higcn::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

namespace detail {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void emit(const nlohmann::json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write '" + path + "'");
  file << text;
}

inline nlohmann::json describe(const CLI::App& app) {
  nlohmann::json j;
  j["program"] = app.get_name();
  j["subcommands"] = nlohmann::json::object();
  for (const CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    nlohmann::json s;
    s["description"] = sub->get_description();
    s["options"] = nlohmann::json::array();
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_lnames().empty()) continue;
      nlohmann::json o;
      o["name"] = "--" + opt->get_lnames().front();
      if (!opt->get_snames().empty()) o["short"] = "-" + opt->get_snames().front();
      o["required"] = opt->get_required();
      o["takes_value"] = opt->get_type_size() > 0;
      o["description"] = opt->get_description();
      s["options"].push_back(std::move(o));
    }
    j["subcommands"][sub->get_name()] = std::move(s);
  }
  return j;
}

struct Options {
  std::string edges;
  std::string features;
  std::string labels;
  std::string config;
  std::string out;
  std::string complex;
  std::string graphs;
  std::string graph_a;
  std::string graph_b;
  std::string method = "shwl";
  std::string checkpoint;
  std::string log_path;
  std::uint64_t seed = 0;
  std::size_t max_order = 2;
  std::size_t jobs = 1;
  double target = 0.0;
  double known_fraction = 0.5;
  std::size_t max_attempts = 0;
  bool allow_decrease = false;
};

// Config file (if any) with command-line overrides applied.
inline TaskConfig resolve_config(const Options& o, const CLI::App& sub, const std::string& task) {
  TaskConfig c;
  if (!o.config.empty()) c = parse_task_config_text(read_text(o.config));
  if (!c.task.empty() && c.task != task) {
    throw UsageError("config: key 'task' is \"" + c.task + "\" but the command runs \"" + task + "\"");
  }
  if (sub.count("--seed") > 0) c.seeds = {o.seed};
  if (sub.count("--max-order") > 0) c.P = o.max_order;
  return c;
}

inline nlohmann::json histograms_json(const DistinguishResult& r) {
  nlohmann::json rounds = nlohmann::json::array();
  for (std::size_t t = 0; t < r.histograms_a.size(); ++t) {
    rounds.push_back({{"round", t}, {"a", r.histograms_a[t]}, {"b", r.histograms_b[t]}});
  }
  return rounds;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Flower-petal higher-order graph toolkit", "higcn"};
  app.require_subcommand(0, 1);
  bool describe = false;
  app.add_flag("--describe", describe, "Print a JSON description of all subcommands and options");

  detail::Options o;
  auto add_edges = [&](CLI::App* s) {
    return s->add_option("--edges", o.edges, "Edge TSV (u<TAB>v per row, optional #n= header)")->required();
  };
  auto add_out = [&](CLI::App* s) { s->add_option("--out", o.out, "Write JSON output here instead of stdout"); };
  auto add_order = [&](CLI::App* s) {
    s->add_option("--max-order,-p", o.max_order, "Maximum simplex order P")->check(CLI::Range(1, 16));
  };
  auto add_seed = [&](CLI::App* s) { s->add_option("--seed", o.seed, "Random seed (default 0)"); };
  auto add_jobs = [&](CLI::App* s) {
    s->add_option("--jobs", o.jobs, "Parallel seed runs (output does not depend on it)")->check(CLI::Range(1, 256));
  };
  auto add_config = [&](CLI::App* s) { s->add_option("--config", o.config, "JSON run configuration"); };

  auto* lift = app.add_subcommand("lift", "Clique-lift a graph and report simplex counts");
  add_edges(lift);
  add_order(lift);
  add_out(lift);

  auto* spectra = app.add_subcommand("spectra", "Eigenvalue extrema of every petal operator");
  add_edges(spectra);
  add_order(spectra);
  add_out(spectra);

  auto* train = app.add_subcommand("train", "Node classification with early stopping");
  add_edges(train);
  train->add_option("--features", o.features, "Feature CSV, one row per node")->required();
  train->add_option("--labels", o.labels, "Label CSV, one integer per node")->required();
  add_config(train);
  add_seed(train);
  add_order(train);
  add_jobs(train);
  add_out(train);
  train->add_option("--checkpoint", o.checkpoint, "Save the first seed's best parameters here");

  auto* impute = app.add_subcommand("impute", "Node-signal imputation on a coauthorship complex");
  impute->add_option("--complex", o.complex, "Simplex file: order<TAB>nodes<TAB>signal")->required();
  impute->add_option("--known-fraction", o.known_fraction, "Share of node signals kept visible");
  add_config(impute);
  add_seed(impute);
  add_order(impute);
  add_jobs(impute);
  add_out(impute);

  auto* graphclass = app.add_subcommand("graphclass", "Graph classification with cross-validation");
  graphclass->add_option("--graphs", o.graphs, "Graph list: '#graph <label>' blocks of edge rows")->required();
  add_config(graphclass);
  add_seed(graphclass);
  add_order(graphclass);
  add_jobs(graphclass);
  add_out(graphclass);

  auto* shwl = app.add_subcommand("shwl", "Compare two graphs by color refinement");
  shwl->add_option("--a", o.graph_a, "First edge TSV")->required();
  shwl->add_option("--b", o.graph_b, "Second edge TSV")->required();
  shwl->add_option("--method", o.method, "wl, hwl or shwl")->check(CLI::IsMember({"wl", "hwl", "shwl"}));
  add_order(shwl);
  add_out(shwl);

  auto* rewire = app.add_subcommand("rewire", "Degree-preserving rewiring toward a triangle density");
  add_edges(rewire);
  rewire->add_option("--target", o.target, "Target relative triangle density rho_2")->required();
  add_seed(rewire);
  rewire->add_option("--out", o.out, "Write the rewired edge TSV here")->required();
  rewire->add_option("--log", o.log_path, "Write the JSON log here instead of stdout");
  rewire->add_option("--max-attempts", o.max_attempts, "Draws per move before giving up (default 10 n)");
  rewire->add_flag("--allow-decrease", o.allow_decrease, "Permit negative targets via reverse moves");

  auto* strength_cmd = app.add_subcommand("strength", "Per-order interaction strength S_p");
  strength_cmd->add_option("--checkpoint", o.checkpoint, "Read parameters from a checkpoint");
  add_config(strength_cmd);
  add_seed(strength_cmd);
  add_order(strength_cmd);
  add_out(strength_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    const Logger log(err, log_level_from_env());
    if (describe) {
      out << detail::describe(app).dump(2) << "\n";
      return kOk;
    }
    if (app.get_subcommands().empty()) {
      throw UsageError("missing subcommand (lift, spectra, train, impute, graphclass, shwl, rewire, strength)");
    }
    const CLI::App* sub = app.get_subcommands().front();
    auto load = [&](const std::string& path) {
      auto lg = load_graph(path);
      if (lg.cleanup.self_loops + lg.cleanup.duplicates > 0) {
        log.warn(path + ": dropped " + std::to_string(lg.cleanup.self_loops) + " self-loops and " +
                 std::to_string(lg.cleanup.duplicates) + " duplicate edges");
      }
      return lg;
    };

    if (sub == lift) {
      const auto lg = load(o.edges);
      const auto k = clique_lift(lg.graph, o.max_order);
      nlohmann::json j;
      j["n"] = lg.graph.n;
      j["max_order"] = o.max_order;
      for (std::size_t p = 1; p <= o.max_order; ++p) j["n_" + std::to_string(p)] = k.count(p);
      j["self_loops_dropped"] = lg.cleanup.self_loops;
      j["duplicates_dropped"] = lg.cleanup.duplicates;
      detail::emit(j, o.out, out);
    } else if (sub == spectra) {
      const auto lg = load(o.edges);
      const auto k = clique_lift(lg.graph, o.max_order);
      nlohmann::json petals = nlohmann::json::array();
      double lo = 0.0;
      double hi = 0.0;
      bool psd = true;
      for (std::size_t p = 1; p <= o.max_order; ++p) {
        const auto s = petal_spectrum(k, p);
        petals.push_back({{"p", p},
                          {"n_p", s.num_simplices},
                          {"isolated_nodes", s.isolated_nodes},
                          {"adjacency_min_eig", s.adjacency_min},
                          {"adjacency_max_eig", s.adjacency_max},
                          {"laplacian_min_eig", s.laplacian_min},
                          {"laplacian_max_eig", s.laplacian_max},
                          {"max_asymmetry", s.max_asymmetry},
                          {"psd", s.psd}});
        lo = p == 1 ? std::min(s.adjacency_min, s.laplacian_min)
                    : std::min({lo, s.adjacency_min, s.laplacian_min});
        hi = p == 1 ? std::max(s.adjacency_max, s.laplacian_max)
                    : std::max({hi, s.adjacency_max, s.laplacian_max});
        psd = psd && s.psd;
      }
      nlohmann::json j{{"n", lg.graph.n}, {"max_order", o.max_order}, {"petals", petals},
                       {"min_eig", lo},   {"max_eig", hi},            {"psd", psd}};
      const auto deg = lg.graph.degrees();
      if (lg.graph.n > 0 && std::find(deg.begin(), deg.end(), 0) == deg.end()) {
        j["reduction_residual"] = reduced_adjacency_residual(lg.graph);
      } else {
        j["reduction_residual"] = nullptr;
      }
      detail::emit(j, o.out, out);
    } else if (sub == train) {
      const TaskConfig cfg = detail::resolve_config(o, *sub, "train");
      auto lg = load_graph(o.edges, o.features, o.labels);
      const auto runs = node_classification_runs(lg.graph, cfg, o.jobs);
      if (!o.checkpoint.empty()) {
        save_checkpoint(o.checkpoint, Checkpoint{runs.front().best, runs.front().seed,
                                                 {{"task", "train"}, {"best_epoch", runs.front().best_epoch}}});
      }
      auto report = node_report(runs, cfg);
      report.extra["homophily"] = lg.graph.edges.empty() ? nlohmann::json(nullptr)
                                                         : nlohmann::json(compute_homophily(lg.graph));
      detail::emit(report.to_json(), o.out, out);
    } else if (sub == impute) {
      TaskConfig cfg = detail::resolve_config(o, *sub, "impute");
      if (sub->count("--known-fraction") > 0) cfg.known_fraction = o.known_fraction;
      const auto cc = load_coauthorship(o.complex);
      log.info("coauthorship complex: " + std::to_string(cc.num_nodes()) + " nodes, " +
               std::to_string(cc.dropped) + " low-signal simplices dropped");
      detail::emit(impute_signals(cc, cfg.known_fraction, cfg, o.jobs).to_json(), o.out, out);
    } else if (sub == graphclass) {
      const TaskConfig cfg = detail::resolve_config(o, *sub, "graphclass");
      const auto graphs = load_graph_list(o.graphs);
      detail::emit(graph_classify(graphs, cfg, o.jobs).to_json(), o.out, out);
    } else if (sub == shwl) {
      const auto a = load(o.graph_a);
      const auto b = load(o.graph_b);
      const WlMethod method = parse_wl_method(o.method);
      const auto r = distinguish(a.graph, b.graph, method, o.max_order);
      nlohmann::json j{{"method", to_string(method)},
                       {"P", o.max_order},
                       {"verdict", r.verdict == Verdict::kDistinguished ? "distinguished" : "inconclusive"},
                       {"rounds", r.rounds},
                       {"histograms", detail::histograms_json(r)}};
      j["first_difference"] = r.first_difference ? nlohmann::json(*r.first_difference) : nlohmann::json(nullptr);
      detail::emit(j, o.out, out);
    } else if (sub == rewire) {
      if (o.target < 0.0 && !o.allow_decrease) {
        throw UsageError("negative --target needs --allow-decrease");
      }
      const auto lg = load(o.edges);
      const std::optional<std::size_t> attempts =
          o.max_attempts > 0 ? std::optional<std::size_t>(o.max_attempts) : std::nullopt;
      auto write = [&](const RewireResult& r) {
        std::ofstream file(o.out, std::ios::binary);
        if (!file) throw DataError("cannot write '" + o.out + "'");
        write_edge_list(file, r.graph);
        nlohmann::json moves = nlohmann::json::array();
        for (const auto& t : r.log.accepted) moves.push_back({t.a, t.b, t.c, t.d, t.e});
        nlohmann::json j{{"seed", o.seed},
                         {"target_rho2", o.target},
                         {"achieved_rho2", r.achieved_rho2},
                         {"original_triangles", r.original_triangles},
                         {"triangles", r.triangles},
                         {"accepted", r.log.accepted.size()},
                         {"attempts", r.log.attempts},
                         {"saturated", r.saturated},
                         {"moves", moves}};
        detail::emit(j, o.log_path, out);
      };
      try {
        write(rewire_to_target(lg.graph, o.target, o.seed, attempts));
      } catch (const RewireSaturation& e) {
        write(e.partial());
        throw;
      }
    } else if (sub == strength_cmd) {
      nlohmann::json j;
      if (!o.checkpoint.empty()) {
        const auto ck = load_checkpoint(o.checkpoint);
        j["source"] = "checkpoint";
        j["seed"] = ck.seed;
        j["S"] = strength(ck.params);
      } else {
        const TaskConfig cfg = detail::resolve_config(o, *sub, "strength");
        const auto params = init_params(model_config(cfg, 1, 2), cfg.seeds.front());
        j["source"] = "initialization";
        j["seed"] = cfg.seeds.front();
        j["alpha"] = cfg.alpha;
        j["S"] = strength(params);
      }
      detail::emit(j, o.out, out);
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const SaturationError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kData;
  }
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace higcn::cli
