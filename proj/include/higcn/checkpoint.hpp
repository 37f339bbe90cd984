#pragma once

// Model checkpoint: one line of JSON (dims, hyperparameters, seed, parameter count)
// followed by the flattened parameters as raw little-endian IEEE-754 doubles.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "higcn/errors.hpp"
#include "higcn/model.hpp"

namespace higcn {

inline constexpr const char* kCheckpointFormat = "higcn-checkpoint-v1";

inline nlohmann::json config_to_json(const ModelConfig& c) {
  return {{"P", c.max_order},
          {"K", c.max_power},
          {"input_dim", c.input_dim},
          {"hidden", c.hidden},
          {"outputs", c.outputs},
          {"layers", c.layers},
          {"alpha", c.alpha},
          {"head", c.head == OutputHead::kLogSoftmax ? "log_softmax" : "identity"}};
}

inline ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.max_order = j.at("P").get<std::size_t>();
    c.max_power = j.at("K").get<std::size_t>();
    c.input_dim = j.at("input_dim").get<std::size_t>();
    c.hidden = j.at("hidden").get<std::size_t>();
    c.outputs = j.at("outputs").get<std::size_t>();
    c.layers = j.at("layers").get<int>();
    c.alpha = j.at("alpha").get<double>();
    const auto head = j.at("head").get<std::string>();
    if (head == "log_softmax") {
      c.head = OutputHead::kLogSoftmax;
    } else if (head == "identity") {
      c.head = OutputHead::kIdentity;
    } else {
      throw DataError("checkpoint: unknown head '" + head + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint header: ") + e.what());
  }
  validate_config(c);
  return c;
}

namespace detail {

inline void write_le_double(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

inline double read_le_double(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw DataError("checkpoint: truncated parameter block");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace detail

struct Checkpoint {
  HigcnParams params;
  std::uint64_t seed = 0;
  nlohmann::json extra = nlohmann::json::object();
};

inline void write_checkpoint(std::ostream& out, const Checkpoint& ck) {
  nlohmann::json header = {{"format", kCheckpointFormat},
                           {"model", config_to_json(ck.params.config)},
                           {"seed", ck.seed},
                           {"parameter_count", ck.params.parameter_count()},
                           {"extra", ck.extra}};
  out << header.dump() << '\n';
  for (double v : ck.params.flatten()) detail::write_le_double(out, v);
}

inline Checkpoint read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("checkpoint: missing header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint: bad header: ") + e.what());
  }
  if (header.value("format", "") != kCheckpointFormat) throw DataError("checkpoint: unknown format");
  Checkpoint ck;
  std::size_t count = 0;
  try {
    ck.params = zero_params(config_from_json(header.at("model")));
    ck.seed = header.at("seed").get<std::uint64_t>();
    ck.extra = header.value("extra", nlohmann::json::object());
    count = header.at("parameter_count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint: bad header: ") + e.what());
  }
  if (count != ck.params.parameter_count()) throw DataError("checkpoint: parameter count mismatch");
  std::vector<double> flat(count);
  for (auto& v : flat) v = detail::read_le_double(in);
  if (in.peek() != std::char_traits<char>::eof()) throw DataError("checkpoint: trailing bytes");
  ck.params.assign_flat(flat);
  return ck;
}

inline void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_checkpoint(out, ck);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_checkpoint(in);
}

}  // namespace higcn
