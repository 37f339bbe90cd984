#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "higcn/errors.hpp"

namespace higcn {

inline double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// 1.96 * sample standard error; undefined below two runs.
inline std::optional<double> ci95_half_width(std::span<const double> v) {
  if (v.size() < 2) return std::nullopt;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return 1.96 * sd / std::sqrt(static_cast<double>(v.size()));
}

inline double accuracy(std::span<const int> predicted, std::span<const int> truth,
                       std::span<const std::size_t> subset) {
  if (subset.empty()) throw UsageError("accuracy: empty subset");
  std::size_t hit = 0;
  for (auto i : subset) hit += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(subset.size());
}

struct MetricsReport {
  std::string task;
  std::string metric;               // name of the headline per-run value
  std::vector<std::uint64_t> seeds;
  std::vector<double> values;       // one per seed, in seed order
  std::vector<nlohmann::json> runs; // per-run details
  nlohmann::json extra = nlohmann::json::object();

  double mean() const { return mean_of(values); }
  std::optional<double> ci95() const { return ci95_half_width(values); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["task"] = task;
    j["metric"] = metric;
    j["seeds"] = seeds;
    j["values"] = values;
    j["mean"] = mean();
    if (auto ci = ci95()) {
      j["ci95"] = *ci;
    } else {
      j["ci95"] = nullptr;
    }
    j["runs"] = runs;
    if (!extra.empty()) j["extra"] = extra;
    return j;
  }
};

}  // namespace higcn
