#pragma once

// Named configs for the standard examples at desk scale.

#include <map>
#include <string>
#include <vector>

#include "entroscope/cli/config.hpp"

namespace entroscope::cli {

namespace detail {

inline json pm_full() { return {{"type", "full"}, {"alphabet", {-1, 1}}}; }
inline json binary_full() { return {{"type", "full"}, {"alphabet", 2}}; }
inline json golden_sturmian() { return {{"type", "sturmian"}, {"alpha", "golden-conjugate"}, {"coding_length", "1/2"}}; }

/// Sequence-toolkit defaults shared by every preset.
inline json toolkit_commands() {
  return {
      {"k-estimate",
       {{"sequence", {{"type", "arithmetic"}, {"start", 2}, {"step", 2}}},
        {"n_schedule", {100, 1000, 10000}},
        {"m_max", 16}}},
      {"goodwyn",
       {{"alphabet_size", 2},
        {"sequences",
         {{{"type", "arithmetic"}, {"start", 1}, {"step", 1}},
          {{"type", "arithmetic"}, {"start", 2}, {"step", 2}},
          {{"type", "squares"}, {"up_to", 400}}}},
        {"n", 20},
        {"n_schedule", {10000}},
        {"m_max", 64}}},
      {"hamming", {{"alphabet_size", 2}, {"radius", "3/10"}, {"n_list", {100, 250, 500, 1000, 2000}}}},
      {"folner",
       {{"sequence", {{"type", "arithmetic"}, {"start", 2}, {"step", 2}}},
        {"m", 2},
        {"n_list", {1, 10, 100, 1000, 10000}}}},
  };
}

inline json make_preset(const std::string& name, const std::string& description, json system, json parameters,
                        json commands) {
  json c = toolkit_commands();
  c.merge_patch(commands);
  return {{"preset", name},   {"description", description}, {"system", std::move(system)},
          {"parameters", std::move(parameters)}, {"commands", std::move(c)}};
}

}  // namespace detail

inline const std::map<std::string, json>& presets() {
  using detail::make_preset;
  static const std::map<std::string, json> table = [] {
    std::map<std::string, json> t;
    const json grid = {{"lo", 0.3}, {"hi", 1.1}, {"step", 0.05}};
    t["tt-inverse"] = make_preset(
        "tt-inverse", "full 2-shift base, tau(y) = y(0), full 2-shift fiber",
        {{"base", detail::pm_full()},
         {"cocycle", {{"type", "coordinate"}}},
         {"fiber", {{"type", "symbolic"}, {"shift", detail::binary_full()}}}},
        {{"n_min", 2}, {"n_max", 6}, {"epsilon", {0.25}}, {"scale", "paper-a"}, {"t_grid", grid}, {"threshold", 1e-3}},
        {{"language", {{"n_min", 1}, {"n_max", 12}}},
         {"cocycle-stats", {{"n_min", 1}, {"n_max", 14}}},
         {"unbounded-profile", {{"n_min", 10}, {"n_max", 60}, {"big_n", 4}, {"lambda", 0.5}}},
         {"sep", {{"n_list", {1, 2, 3, 4}}, {"epsilon", {0.5, 0.25}}}},
         {"slow-entropy", {{"n_max", 200}, {"epsilon", {0.5}}, {"curve_n", {50, 100, 150}}}},
         {"h-top", {{"n_max", 200}, {"epsilon", {0.5}}}},
         {"birkhoff", {{"n_list", {10, 100, 1000}}}}});
    t["sturmian-walk"] = make_preset(
        "sturmian-walk", "Sturmian base of type (1/2, (sqrt 5 - 1)/2), tau(y) = y(0), full 2-shift fiber",
        {{"base", detail::golden_sturmian()},
         {"cocycle", {{"type", "coordinate"}}},
         {"fiber", {{"type", "symbolic"}, {"shift", detail::binary_full()}}}},
        {{"n_min", 2}, {"n_max", 6}, {"epsilon", {0.25}}, {"scale", "paper-a"}, {"t_grid", grid}, {"threshold", 1e-3}},
        {{"language", {{"n_min", 1}, {"n_max", 30}}},
         {"cocycle-stats", {{"n_list", {10, 100, 1000}}}},
         {"unbounded-profile", {{"n_list", {10, 100, 1000}}, {"big_n", 4}, {"lambda", 0.5}}},
         {"sep", {{"n_list", {10, 100, 1000, 2000}}, {"epsilon", {0.5}}}},
         {"slow-entropy", {{"n_max", 400}, {"epsilon", {0.5}}, {"curve_n", {100, 200, 300}}}},
         {"h-top", {{"n_max", 200}, {"epsilon", {0.5}}}},
         {"birkhoff", {{"n_list", {10, 100, 1000}}}}});
    t["sturmian-product"] = make_preset(
        "sturmian-product", "Sturmian x full 2-shift base, tau = Sturmian coordinate, full 2-shift fiber",
        {{"base", {{"type", "product"}, {"left", detail::golden_sturmian()}, {"right", detail::pm_full()}}},
         {"cocycle", {{"type", "left-coordinate"}}},
         {"fiber", {{"type", "symbolic"}, {"shift", detail::binary_full()}}}},
        {{"n_min", 2}, {"n_max", 4}, {"epsilon", {0.25}}, {"scale", "paper-a"}, {"t_grid", grid}, {"threshold", 1e-3}},
        {{"language", {{"n_min", 1}, {"n_max", 12}}},
         {"cocycle-stats", {{"n_min", 1}, {"n_max", 10}}},
         {"unbounded-profile", {{"n_min", 4}, {"n_max", 12}, {"big_n", 3}, {"lambda", 0.5}}},
         {"sep", {{"n_list", {2, 4, 8, 12}}, {"epsilon", {0.5}}}},
         {"slow-entropy", {{"n_max", 12}, {"epsilon", {0.5}}, {"curve_n", {4, 8}}}},
         {"h-top", {{"n_max", 50}, {"epsilon", {0.5}}}},
         {"birkhoff", {{"n_list", {4, 8, 12}}}}});
    t["identity-fiber-smoke"] = make_preset(
        "identity-fiber-smoke", "full 2-shift base, tau(y) = y(0), one-point fiber",
        {{"base", detail::pm_full()}, {"cocycle", {{"type", "coordinate"}}}, {"fiber", {{"type", "singleton"}}}},
        {{"n_min", 2}, {"n_max", 6}, {"epsilon", {0.25}}, {"scale", "exponential"}, {"t_grid", grid}, {"threshold", 1e-3}},
        {{"language", {{"n_min", 1}, {"n_max", 8}}},
         {"cocycle-stats", {{"n_min", 1}, {"n_max", 8}}},
         {"unbounded-profile", {{"n_min", 4}, {"n_max", 20}, {"big_n", 3}, {"lambda", 0.5}}},
         {"sep", {{"n_list", {1, 2, 3}}, {"epsilon", {0.5}}}},
         {"slow-entropy", {{"n_max", 60}, {"epsilon", {0.5}}}},
         {"h-top", {{"n_max", 50}, {"epsilon", {0.5}}}},
         {"birkhoff", {{"n_list", {10, 100}}}}});
    t["golden-mean"] = make_preset(
        "golden-mean", "golden-mean base on {-1, 1}, tau(y) = y(0), full 2-shift fiber",
        {{"base", {{"type", "sft"}, {"alphabet", {-1, 1}}, {"forbidden", {{1, 1}}}}},
         {"cocycle", {{"type", "coordinate"}}},
         {"fiber", {{"type", "symbolic"}, {"shift", {{"type", "golden-mean"}}}}}},
        {{"n_min", 2}, {"n_max", 6}, {"epsilon", {0.25}}, {"scale", "paper-a"}, {"t_grid", grid}, {"threshold", 1e-3}},
        {{"language", {{"n_min", 1}, {"n_max", 20}}},
         {"cocycle-stats", {{"n_min", 1}, {"n_max", 14}}},
         {"unbounded-profile", {{"n_min", 10}, {"n_max", 60}, {"big_n", 4}, {"lambda", 0.5}}},
         {"sep", {{"n_list", {1, 2, 3, 4}}, {"epsilon", {0.5, 0.25}}}},
         {"slow-entropy", {{"n_max", 200}, {"epsilon", {0.5}}, {"curve_n", {50, 100, 150}}}},
         {"h-top", {{"n_max", 100}, {"epsilon", {0.5}}}},
         {"birkhoff", {{"n_list", {10, 100, 1000}}}}});
    return t;
  }();
  return table;
}

inline json preset(const std::string& name) {
  const auto& t = presets();
  const auto it = t.find(name);
  if (it == t.end()) throw SchemaError("unknown preset '" + name + "'");
  return it->second;
}

}  // namespace entroscope::cli
