#pragma once

// Subcommand dispatch. Every command reads an ExperimentConfig and fills a
// Report; errors are caught at the top and mapped to exit codes.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <string>

#include "entroscope/cli/config.hpp"
#include "entroscope/cli/presets.hpp"
#include "entroscope/cli/report.hpp"
#include "entroscope/cocycle.hpp"
#include "entroscope/entropy/birkhoff.hpp"
#include "entroscope/entropy/sequence.hpp"
#include "entroscope/entropy/slow_entropy.hpp"
#include "entroscope/skew.hpp"

namespace entroscope::cli {

using io::fmt;

namespace detail {

inline std::string num(std::size_t x) { return std::to_string(x); }
inline std::string real(long double x) { return io::fmt(x); }

/// Words checked against enumeration when the fast path is used.
inline constexpr std::size_t kCrossCheckWords = std::size_t{1} << 16;

inline void cmd_language(const ExperimentConfig& c, Report& r) {
  const auto base = c.base();
  auto& t = r.table("language", {"n", "complexity", "log_complexity_over_n"});
  for (auto n : c.n_values()) {
    const Integer count = symbolic::complexity(base, n);
    t.add({num(n), fmt(count), real(log_of(count) / static_cast<long double>(n))});
  }
  r.values["base"] = base.kind();
  r.verdict("complexity", Status::Observed, std::to_string(t.rows.size()) + " lengths counted");
}

inline void cmd_cocycle_stats(const ExperimentConfig& c, Report& r) {
  const auto base = c.base();
  const auto tau = c.cocycle();
  const bool fast = cocycle::walk_fast_path_applies(base, tau);
  auto& t = r.table("range_distribution", {"n", "r", "count"});
  auto& mean = r.table("range_summary", {"n", "words", "mean_r", "max_r"});
  std::size_t cross_checked = 0;
  for (auto n : c.n_values()) {
    const auto dist = fast ? cocycle::walk_range_distribution(base, tau, n, n)
                           : cocycle::range_distribution_by_enumeration(base, tau, n, c.word_cap());
    if (fast && symbolic::interval_count(base, n + 2 * tau.radius()) <= kCrossCheckWords) {
      const auto oracle = cocycle::range_distribution_by_enumeration(base, tau, n, c.word_cap());
      if (oracle.counts != dist.counts || dist.overflow != 0)
        throw InconsistencyError("range DP disagrees with enumeration at n = " + std::to_string(n));
      ++cross_checked;
    }
    Integer words = 0;
    Rational weighted = 0;
    std::size_t max_r = 0;
    for (const auto& [rr, count] : dist.counts) {
      t.add({num(n), num(rr), fmt(count)});
      words += count;
      weighted += Rational(count) * Rational(static_cast<long>(rr));
      max_r = std::max(max_r, rr);
    }
    mean.add({num(n), fmt(words), real(to_long_double(weighted / Rational(words))), num(max_r)});
  }
  r.values["radius_s"] = tau.radius();
  r.values["bound_m"] = tau.bound();
  r.values["fast_path"] = fast;
  r.values["cross_checked_lengths"] = cross_checked;
  r.verdict("cocycle_profile", Status::Observed,
            fast ? "walk DP, " + std::to_string(cross_checked) + " lengths matched enumeration" : "enumerated");
}

inline void cmd_unbounded_profile(const ExperimentConfig& c, Report& r) {
  const auto base = c.base();
  const auto tau = c.cocycle();
  const std::size_t big_n = c.size("big_n");
  const double lambda = c.real_or("lambda", 0.5);
  auto& t = r.table("unbounded_profile", {"n", "N", "proportion", "proportion_exact"});
  Rational min_p = 1;
  for (auto n : c.n_values()) {
    const Rational p = cocycle::unbounded_profile(base, tau, big_n, n, c.word_cap());
    min_p = std::min(min_p, p);
    t.add({num(n), num(big_n), real(to_long_double(p)), fmt(p)});
  }
  r.values["lambda"] = lambda;
  r.values["min_proportion"] = fmt(min_p);
  const bool supported = to_long_double(min_p) >= lambda;
  r.values["supported"] = supported;
  r.verdict("unbounded_profile", Status::Observed,
            std::string("min proportion ") + real(to_long_double(min_p)) + (supported ? " >= " : " < ") + "lambda");
}

inline void cmd_sep(const ExperimentConfig& c, Report& r) {
  const auto eps_list = c.reals("epsilon");
  const auto ns = c.n_values();
  if (c.has_fiber()) {
    const auto f = c.fiber();
    auto& t = r.table("fiber_spa", {"n", "epsilon", "spa_lower", "spa_upper"});
    for (auto n : ns)
      for (double eps : eps_list) {
        const auto b = fiber::spa_bracket(f, cocycle::FiniteIntSet::interval(0, static_cast<std::int64_t>(n) - 1), eps,
                                          c.spa_options());
        t.add({num(n), real(eps), fmt(b.lower), fmt(b.upper)});
      }
  }
  if (c.has_base() && c.has_fiber()) {
    const auto sys = c.skew_system();
    const std::size_t direct_max = c.size_or("direct_max_n", 4);
    auto& t = r.table("capacity", {"n", "epsilon", "A_lower", "A_upper", "log_A_upper_over_n", "fast_path", "skew_sep"});
    for (auto n : ns)
      for (double eps : eps_list) {
        const auto a = skew::capacity_A(sys, n, eps, c.skew_options());
        std::string direct = "";
        if (n <= direct_max && eps < 2) direct = fmt(skew::skew_sep_direct(sys, n, eps, c.skew_options()));
        t.add({num(n), real(eps), fmt(a.lower), fmt(a.upper), real(log_of(a.upper) / static_cast<long double>(n)),
               a.fast_path ? "1" : "0", direct});
      }
  }
  r.verdict("sep", Status::Observed, "separated and spanning brackets tabulated");
}

inline void cmd_sandwich(const ExperimentConfig& c, Report& r) {
  const auto sys = c.skew_system();
  const double eps = c.reals("epsilon").front();
  const auto rep = skew::sandwich_check(sys, c.n_values(2), eps, c.skew_options());
  auto& t = r.table("sandwich", {"n", "epsilon", "A_lo_2eps", "A_hi_2eps", "sep_skew_2eps", "sep_skew_eps",
                                 "A_lo_half_eps", "A_hi_half_eps", "E_inferred", "left_certified"});
  for (const auto& row : rep.rows)
    t.add({num(row.n), real(row.epsilon), fmt(row.a_lo_2eps), fmt(row.a_hi_2eps), fmt(row.skew_lo), fmt(row.skew_hi),
           fmt(row.a_lo_halfeps), fmt(row.a_hi_halfeps), fmt(row.e_inferred), row.left_certified ? "1" : "0"});
  r.values["epsilon"] = eps;
  r.values["E_max"] = fmt(rep.e_max);
  r.values["left_holds"] = rep.left_holds;
  r.values["E_nonincreasing"] = rep.e_nonincreasing;
  r.verdict("sandwich_check", rep.pass ? Status::Pass : Status::Fail,
            std::string("A(2eps) <= sep(skew, 2eps) ") + (rep.left_holds ? "holds" : "fails") + "; E " +
                (rep.e_nonincreasing ? "non-increasing" : "grows") + ", max " + fmt(rep.e_max));
}

inline entropy::Source source_of(const ExperimentConfig& c) {
  if (c.has_base()) return c.skew_system();
  return c.fiber();
}

inline void cmd_slow_entropy(const ExperimentConfig& c, Report& r) {
  const auto source = source_of(c);
  const auto scale = c.scale();
  const double eps = c.reals("epsilon").front();
  const std::size_t n_max = c.size("n_max");
  const auto grid = c.t_grid();
  const double threshold = c.real_or("threshold", entropy::kDefaultThreshold);
  std::vector<std::size_t> curve_n;
  if (c.has("curve_n"))
    for (const auto& x : c.parameters().at("curve_n")) curve_n.push_back(x.get<std::size_t>());
  const auto rep = entropy::slow_entropy_report(source, scale, eps, n_max, grid, threshold, curve_n, c.skew_options());
  auto& t = r.table("ratio_curves", {"t", "n", "lo", "hi", "log_lo", "log_hi"});
  for (const auto& curve : rep.curves)
    for (const auto& row : curve.rows)
      t.add({real(curve.t), num(row.n), real(row.lower()), real(row.upper()), real(row.log_lower), real(row.log_upper)});
  r.values["label"] = rep.label;
  r.values["scale"] = rep.scale;
  r.values["epsilon"] = eps;
  r.values["n_max"] = n_max;
  r.values["threshold"] = threshold;
  r.values["t_grid"] = grid;
  r.values["t_upper"] = rep.t_upper;
  r.values["t_lower"] = rep.t_lower;
  r.values["upper_empty"] = rep.upper_empty;
  r.values["lower_empty"] = rep.lower_empty;
  r.verdict("slow_entropy_report", Status::Observed,
            "t_upper " + real(rep.t_upper) + ", t_lower " + real(rep.t_lower) + " (" + rep.label + ")");
}

inline void cmd_h_top(const ExperimentConfig& c, Report& r) {
  const auto f = c.fiber();
  const double eps = c.reals("epsilon").front();
  std::vector<std::size_t> ns = c.has("n_list") ? c.n_values() : std::vector<std::size_t>{c.size("n_max")};
  auto& t = r.table("h_top", {"n", "epsilon", "lower_nats", "upper_nats", "lower_bits", "upper_bits"});
  entropy::EntropyBracket last;
  for (auto n : ns) {
    last = entropy::h_top_estimate(f, eps, n, c.spa_options());
    const long double ln2 = std::log(2.0L);
    t.add({num(n), real(eps), real(last.lower), real(last.upper), real(last.lower / ln2), real(last.upper / ln2)});
  }
  r.values["lower_nats"] = static_cast<double>(last.lower);
  r.values["upper_nats"] = static_cast<double>(last.upper);
  r.verdict("h_top_estimate", Status::Observed, "[" + real(last.lower) + ", " + real(last.upper) + "] nats");
}

inline entropy::KEstimate k_for(const ExperimentConfig& c, const entropy::SequenceSpec& a) {
  std::vector<std::size_t> ns;
  if (c.has("n_schedule")) {
    for (const auto& x : c.parameters().at("n_schedule")) ns.push_back(x.get<std::size_t>());
  } else {
    ns = {c.size_or("n_max", 10000)};
  }
  return entropy::k_estimate(a, ns, entropy::doubling_schedule(c.size_or("m_max", 16)));
}

inline void cmd_k_estimate(const ExperimentConfig& c, Report& r) {
  const auto a = c.sequence();
  const auto k = k_for(c, a);
  auto& t = r.table("k_estimate", {"m", "n", "value", "limit"});
  for (const auto& row : k.rows)
    t.add({num(row.m), num(row.n), fmt(row.value), row.limit ? fmt(*row.limit) : std::string()});
  r.values["sequence"] = c.parameters().at("sequence");
  r.values["stabilized"] = k.stabilized;
  r.values["divergent"] = k.divergent;
  if (k.stabilized) {
    r.values["K"] = fmt(k.value);
    r.values["m_stable"] = k.m_stable;
  } else {
    r.values["K"] = "inf";
  }
  r.verdict("k_estimate", Status::Observed,
            k.stabilized ? "K = " + fmt(k.value) + " stabilized at m = " + num(k.m_stable)
                         : (k.divergent ? std::string("divergent") : std::string("not stabilized")));
}

inline void cmd_hamming(const ExperimentConfig& c, Report& r) {
  const std::size_t k = c.size("alphabet_size");
  const Rational radius = io::rational_from_json(c.parameters().at("radius"), "radius");
  const double rd = static_cast<double>(to_long_double(radius));
  std::optional<double> exponent;
  if (rd <= static_cast<double>(k - 1) / static_cast<double>(k)) exponent = entropy::hamming_exponent(k, rd);
  auto& t = r.table("hamming", {"n", "count", "log_count_over_n", "exponent", "gap"});
  for (auto n : c.n_values()) {
    const auto count = entropy::hamming_ball_count(k, n, radius);
    const long double v = log_of(count) / static_cast<long double>(n);
    t.add({num(n), fmt(count), real(v), exponent ? real(*exponent) : "", exponent ? real(*exponent - v) : ""});
  }
  r.values["radius"] = fmt(radius);
  r.values["alphabet_size"] = k;
  if (exponent) r.values["exponent"] = *exponent;
  r.verdict("hamming_ball_count", Status::Observed, "exact counts for " + std::to_string(t.rows.size()) + " lengths");
}

inline void cmd_goodwyn(const ExperimentConfig& c, Report& r) {
  const std::size_t k = c.size_or("alphabet_size", 2);
  if (!c.has("sequences") && !c.has("sequence")) throw SchemaError("goodwyn needs 'sequences' or 'sequence'");
  const io::json list = c.has("sequences") ? c.parameters().at("sequences") : io::json::array({c.parameters().at("sequence")});
  auto& t = r.table("goodwyn", {"sequence", "n", "h_seq", "K_log_k", "holds"});
  for (const auto& desc : list) {
    const auto a = io::sequence_from_json(desc);
    std::size_t n = c.size_or("n", 1000);
    if (const auto len = a.length()) n = std::min(n, *len);
    const auto kest = k_for(c, a);
    const auto g = entropy::goodwyn_check(k, a, n, kest);
    t.add({desc.dump(), num(n), real(g.lhs), real(g.rhs), g.holds ? "1" : "0"});
    r.verdict("goodwyn_check", g.holds ? Status::Pass : Status::Fail,
              desc.dump() + ": " + real(g.lhs) + " <= " + real(g.rhs));
  }
}

inline void cmd_folner(const ExperimentConfig& c, Report& r) {
  const auto a = c.sequence();
  const std::size_t m = c.size("m");
  const auto rows = entropy::folner_defect(a, m, c.n_values());
  auto& t = r.table("folner", {"n", "defect", "defect_exact"});
  for (const auto& row : rows) t.add({num(row.n), real(to_long_double(row.defect)), fmt(row.defect)});
  r.values["m"] = m;
  r.values["family"] = c.parameters().at("sequence");
  r.verdict("folner_defect", Status::Observed, "last defect " + fmt(rows.back().defect));
}

inline void cmd_birkhoff(const ExperimentConfig& c, Report& r) {
  const auto base = c.base();
  const auto tau = c.cocycle();
  auto& t = r.table("birkhoff", {"n", "sup", "sup_exact"});
  bool decreasing = true;
  std::optional<Rational> prev;
  for (auto n : c.n_values()) {
    const Rational b = entropy::birkhoff_sup(base, tau, n, c.word_cap());
    if (prev && !(b < *prev)) decreasing = false;
    prev = b;
    t.add({num(n), real(to_long_double(b)), fmt(b)});
  }
  r.values["decreasing"] = decreasing;
  r.verdict("birkhoff_sup", Status::Observed, decreasing ? "strictly decreasing in n" : "not strictly decreasing");
}

inline void cmd_preset_list(const ExperimentConfig&, Report& r) {
  auto& t = r.table("presets", {"name", "description"});
  for (const auto& [name, doc] : presets()) t.add({name, doc.value("description", std::string())});
  r.verdict("preset_list", Status::Observed, std::to_string(t.rows.size()) + " presets");
}

}  // namespace detail

using CommandFn = std::function<void(const ExperimentConfig&, Report&)>;

inline const std::map<std::string, CommandFn>& commands() {
  static const std::map<std::string, CommandFn> table{
      {"language", detail::cmd_language},
      {"cocycle-stats", detail::cmd_cocycle_stats},
      {"unbounded-profile", detail::cmd_unbounded_profile},
      {"sep", detail::cmd_sep},
      {"sandwich", detail::cmd_sandwich},
      {"slow-entropy", detail::cmd_slow_entropy},
      {"h-top", detail::cmd_h_top},
      {"k-estimate", detail::cmd_k_estimate},
      {"hamming", detail::cmd_hamming},
      {"goodwyn", detail::cmd_goodwyn},
      {"folner", detail::cmd_folner},
      {"birkhoff", detail::cmd_birkhoff},
      {"preset-list", detail::cmd_preset_list},
  };
  return table;
}

/// Merges preset defaults under `doc` (the preset named by doc["preset"]).
inline json resolve(json doc) {
  if (!doc.is_object()) throw SchemaError("config must be a JSON object");
  if (doc.contains("preset")) {
    if (!doc.at("preset").is_string()) throw SchemaError("'preset' must be a string");
    json merged = preset(doc.at("preset").get<std::string>());
    merged.merge_patch(doc);
    return merged;
  }
  return doc;
}

/// Runs `command` (or doc["command"] when command is "run") and never throws:
/// errors are recorded on the report with their exit code. Tables completed
/// before an error stay on the report.
inline Report run(const json& raw, std::string command) {
  const auto start = std::chrono::steady_clock::now();
  Report report;
  report.command = command;
  report.config = raw;
  const auto fail = [&](ExitCode code, const std::string& kind, const std::string& what) {
    report.error_code = code;
    report.error = kind + ": " + what;
  };
  try {
    const json doc = resolve(raw);
    report.config = doc;
    if (command == "run") {
      if (!doc.contains("command") || !doc.at("command").is_string()) throw SchemaError("'run' needs config.command");
      command = doc.at("command").get<std::string>();
      if (command == "run") throw SchemaError("config.command cannot be 'run'");
      report.command = command;
    }
    const auto it = commands().find(command);
    if (it == commands().end()) throw SchemaError("unknown command '" + command + "'");
    report.config["command"] = command;
    const ExperimentConfig cfg(doc, command);
    it->second(cfg, report);
  } catch (const CapExceeded& e) {
    fail(ExitCode::CapExceeded, "cap exceeded", e.what());
  } catch (const InconsistencyError& e) {
    fail(ExitCode::Inconsistency, "inconsistency", e.what());
  } catch (const DomainError& e) {
    fail(ExitCode::Schema, "invalid config", e.what());
  } catch (const json::exception& e) {
    fail(ExitCode::Schema, "invalid config", e.what());
  } catch (const std::exception& e) {
    fail(ExitCode::Failed, "error", e.what());
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace entroscope::cli
