#pragma once

// Experiment configs: a JSON document with a system, shared parameters,
// per-command parameter blocks and caps. Presets supply defaults, the config
// file is merged over them and command-line flags over both.
//
//   {
//     "command": "sandwich",
//     "preset": "tt-inverse",
//     "system": {"base": ..., "cocycle": ..., "fiber": ...},
//     "parameters": {"n_min": 2, "n_max": 6, "epsilon": [0.25], ...},
//     "commands": {"slow-entropy": {"n_max": 200}},
//     "overrides": {"n_max": 8},                       (command-line flags land here)
//     "caps": {"words": 1048576, "pairs": 16777216},
//     "output": "out/tt"
//   }

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "entroscope/entropy/slow_entropy.hpp"
#include "entroscope/io.hpp"
#include "entroscope/skew.hpp"

namespace entroscope::cli {

using io::json;
using io::SchemaError;

inline json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SchemaError("cannot open config '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw SchemaError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

/// Typed view over the merged config for one command.
class ExperimentConfig {
 public:
  ExperimentConfig(json doc, std::string command) : doc_(std::move(doc)), command_(std::move(command)) {
    if (!doc_.is_object()) throw SchemaError("config must be a JSON object");
    params_ = doc_.value("parameters", json::object());
    if (!params_.is_object()) throw SchemaError("'parameters' must be an object");
    if (doc_.contains("commands")) {
      const auto& per = doc_.at("commands");
      if (!per.is_object()) throw SchemaError("'commands' must be an object");
      if (per.contains(command_)) params_.merge_patch(per.at(command_));
    }
    if (doc_.contains("overrides")) params_.merge_patch(doc_.at("overrides"));
    const json caps = doc_.value("caps", json::object());
    word_cap_ = caps.value("words", static_cast<std::size_t>(symbolic::kDefaultWordCap));
    pair_cap_ = caps.value("pairs", static_cast<std::size_t>(fiber::kDefaultPairCap));
    if (word_cap_ == 0 || pair_cap_ == 0) throw SchemaError("caps must be positive");
  }

  const json& document() const { return doc_; }
  const json& parameters() const { return params_; }
  const std::string& command() const { return command_; }
  std::string output() const { return doc_.value("output", std::string()); }

  std::size_t word_cap() const { return word_cap_; }
  std::size_t pair_cap() const { return pair_cap_; }
  skew::Options skew_options() const { return {word_cap_, pair_cap_, false}; }
  fiber::SpaOptions spa_options() const { return {word_cap_, pair_cap_}; }

  bool has(const char* key) const { return params_.contains(key); }

  std::size_t size(const char* key) const {
    const auto& v = need(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long>() >= 0))
      throw SchemaError(std::string("parameter '") + key + "' must be a nonnegative integer");
    return v.get<std::size_t>();
  }
  std::size_t size_or(const char* key, std::size_t fallback) const { return has(key) ? size(key) : fallback; }

  double real(const char* key) const {
    const auto& v = need(key);
    if (!v.is_number()) throw SchemaError(std::string("parameter '") + key + "' must be a number");
    return v.get<double>();
  }
  double real_or(const char* key, double fallback) const { return has(key) ? real(key) : fallback; }

  std::vector<double> reals(const char* key) const {
    const auto& v = need(key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array() || v.empty()) throw SchemaError(std::string("parameter '") + key + "' must be a nonempty list");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw SchemaError(std::string("parameter '") + key + "' must hold numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  /// "n_list" when present, else n_min..n_max.
  std::vector<std::size_t> n_values(std::size_t default_min = 1) const {
    if (has("n_list")) {
      const auto& v = params_.at("n_list");
      if (!v.is_array() || v.empty()) throw SchemaError("parameter 'n_list' must be a nonempty list");
      std::vector<std::size_t> out;
      for (const auto& x : v) {
        if (!x.is_number_integer() || x.get<long>() <= 0) throw SchemaError("'n_list' entries must be positive");
        out.push_back(x.get<std::size_t>());
      }
      return out;
    }
    const std::size_t hi = size("n_max");
    const std::size_t lo = size_or("n_min", default_min);
    if (lo == 0 || lo > hi) throw SchemaError("need 1 <= n_min <= n_max");
    std::vector<std::size_t> out;
    for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }

  std::vector<double> t_grid() const {
    if (!has("t_grid")) return entropy::t_grid(0.3, 1.1, entropy::kDefaultGridStep);
    const auto& g = params_.at("t_grid");
    if (g.is_object())
      return entropy::t_grid(g.value("lo", 0.3), g.value("hi", 1.1), g.value("step", entropy::kDefaultGridStep));
    return reals("t_grid");
  }

  // System pieces.
  bool has_base() const { return system().contains("base"); }
  bool has_fiber() const { return system().contains("fiber"); }
  symbolic::SubshiftSpec base() const { return io::subshift_from_json(need_system("base")); }
  cocycle::Cocycle cocycle() const { return io::cocycle_from_json(need_system("cocycle"), base()); }
  fiber::FiberSystem fiber() const { return io::fiber_from_json(need_system("fiber")); }
  skew::SkewSystem skew_system() const { return {base(), cocycle(), fiber()}; }

  entropy::Scale scale() const {
    const json s = has("scale") ? params_.at("scale") : json("exponential");
    if (has_base() && system().contains("cocycle")) {
      const auto b = base();
      const auto t = cocycle();
      return io::scale_from_json(s, &b, &t);
    }
    return io::scale_from_json(s, nullptr, nullptr);
  }

  entropy::SequenceSpec sequence() const { return io::sequence_from_json(need("sequence")); }

 private:
  const json& need(const char* key) const {
    if (!params_.contains(key))
      throw SchemaError("command '" + command_ + "' needs parameter '" + std::string(key) + "'");
    return params_.at(key);
  }
  json system() const { return doc_.value("system", json::object()); }
  json need_system(const char* key) const {
    const json s = system();
    if (!s.contains(key)) throw SchemaError("command '" + command_ + "' needs system." + key);
    return s.at(key);
  }

  json doc_;
  json params_;
  std::string command_;
  std::size_t word_cap_ = symbolic::kDefaultWordCap;
  std::size_t pair_cap_ = fiber::kDefaultPairCap;
};

}  // namespace entroscope::cli
