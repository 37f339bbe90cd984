#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "higcn/errors.hpp"
#include "higcn/model.hpp"

namespace higcn {

// Run configuration shared by the training pipelines.
struct TaskConfig {
  std::string task;  // optional; checked against the invoked pipeline when set
  std::size_t P = 2;
  std::size_t K = 10;
  double alpha = 0.1;
  double lr = 0.01;
  double weight_decay = 5e-4;
  std::size_t hidden = 32;
  std::size_t layers = 2;
  std::optional<std::size_t> epochs;  // task default when unset
  std::size_t patience = 200;
  std::vector<std::uint64_t> seeds{0};
  Readout readout = Readout::kMean;
  double known_fraction = 0.5;
  std::size_t folds = 10;
  bool decay_gamma = false;
  std::vector<double> split{0.6, 0.2, 0.2};

  std::size_t epochs_or(std::size_t fallback) const { return epochs.value_or(fallback); }
};

inline std::string to_string(Readout r) { return r == Readout::kSum ? "sum" : "mean"; }

inline Readout parse_readout(const std::string& s) {
  if (s == "mean") return Readout::kMean;
  if (s == "sum") return Readout::kSum;
  throw UsageError("config: key 'readout' must be \"mean\" or \"sum\", got \"" + s + "\"");
}

namespace detail {

inline std::size_t config_count(const nlohmann::json& v, const std::string& key, std::size_t min) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < static_cast<std::int64_t>(min)) {
    throw UsageError("config: key '" + key + "' must be an integer >= " + std::to_string(min));
  }
  return v.get<std::size_t>();
}

inline double config_real(const nlohmann::json& v, const std::string& key) {
  if (!v.is_number()) throw UsageError("config: key '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace detail

inline TaskConfig parse_task_config(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config: top level must be a JSON object");
  TaskConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "task") {
      if (!v.is_string()) throw UsageError("config: key 'task' must be a string");
      c.task = v.get<std::string>();
    } else if (key == "P") {
      c.P = detail::config_count(v, key, 1);
    } else if (key == "K") {
      c.K = detail::config_count(v, key, 0);
    } else if (key == "alpha") {
      c.alpha = detail::config_real(v, key);
      if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw UsageError("config: key 'alpha' must lie in (0, 1]");
    } else if (key == "lr") {
      c.lr = detail::config_real(v, key);
      if (!(c.lr > 0.0)) throw UsageError("config: key 'lr' must be positive");
    } else if (key == "weight_decay") {
      c.weight_decay = detail::config_real(v, key);
      if (c.weight_decay < 0.0) throw UsageError("config: key 'weight_decay' must be >= 0");
    } else if (key == "hidden") {
      c.hidden = detail::config_count(v, key, 1);
    } else if (key == "layers") {
      c.layers = detail::config_count(v, key, 1);
      if (c.layers > 2) throw UsageError("config: key 'layers' must be 1 or 2");
    } else if (key == "epochs") {
      c.epochs = detail::config_count(v, key, 1);
    } else if (key == "patience") {
      c.patience = detail::config_count(v, key, 1);
    } else if (key == "seeds") {
      if (!v.is_array() || v.empty()) throw UsageError("config: key 'seeds' must be a non-empty array");
      c.seeds.clear();
      for (const auto& s : v) {
        if (!s.is_number_unsigned()) throw UsageError("config: key 'seeds' must hold non-negative integers");
        c.seeds.push_back(s.get<std::uint64_t>());
      }
    } else if (key == "readout") {
      if (!v.is_string()) throw UsageError("config: key 'readout' must be a string");
      c.readout = parse_readout(v.get<std::string>());
    } else if (key == "known_fraction") {
      c.known_fraction = detail::config_real(v, key);
      if (!(c.known_fraction > 0.0 && c.known_fraction < 1.0)) {
        throw UsageError("config: key 'known_fraction' must lie in (0, 1)");
      }
    } else if (key == "folds") {
      c.folds = detail::config_count(v, key, 2);
    } else if (key == "decay_gamma") {
      if (!v.is_boolean()) throw UsageError("config: key 'decay_gamma' must be a boolean");
      c.decay_gamma = v.get<bool>();
    } else if (key == "split") {
      if (!v.is_array() || v.size() != 3) throw UsageError("config: key 'split' must be an array of 3 numbers");
      c.split.clear();
      for (const auto& s : v) c.split.push_back(detail::config_real(s, key));
    } else {
      throw UsageError("config: unknown key '" + key + "'");
    }
  }
  return c;
}

inline TaskConfig parse_task_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_task_config(j);
}

inline nlohmann::json to_json(const TaskConfig& c) {
  nlohmann::json j;
  if (!c.task.empty()) j["task"] = c.task;
  j["P"] = c.P;
  j["K"] = c.K;
  j["alpha"] = c.alpha;
  j["lr"] = c.lr;
  j["weight_decay"] = c.weight_decay;
  j["hidden"] = c.hidden;
  j["layers"] = c.layers;
  if (c.epochs) j["epochs"] = *c.epochs;
  j["patience"] = c.patience;
  j["seeds"] = c.seeds;
  j["readout"] = to_string(c.readout);
  j["known_fraction"] = c.known_fraction;
  j["folds"] = c.folds;
  j["decay_gamma"] = c.decay_gamma;
  j["split"] = c.split;
  return j;
}

inline ModelConfig model_config(const TaskConfig& c, std::size_t input_dim, std::size_t outputs,
                                OutputHead head = OutputHead::kLogSoftmax) {
  ModelConfig m;
  m.max_order = c.P;
  m.max_power = c.K;
  m.input_dim = input_dim;
  m.hidden = c.hidden;
  m.outputs = outputs;
  m.layers = static_cast<int>(c.layers);
  m.alpha = c.alpha;
  m.head = head;
  return m;
}

}  // namespace higcn
