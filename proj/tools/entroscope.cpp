// entroscope: experiment runner.
//
//   entroscope <command> [--preset NAME] [--config FILE] [flags]
//
// Exit codes: 0 all verdicts PASS/OBSERVED, 1 a verdict failed, 2 invalid
// config, 3 cap exceeded (partial report written), 4 internal inconsistency.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entroscope/cli/runner.hpp"

namespace {

using entroscope::cli::json;

struct Flags {
  std::string config;
  std::string preset;
  std::string out;
  std::size_t n_max = 0;
  std::size_t n_min = 0;
  std::vector<std::size_t> n_list;
  std::vector<double> eps;
  std::string t_grid;
  double threshold = 0;
  std::string scale;
  std::size_t cap_words = 0;
  std::size_t cap_pairs = 0;
  std::string sequence;
  std::size_t m = 0;
  std::string radius;
  std::size_t alphabet_size = 0;
  bool quiet = false;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw entroscope::io::SchemaError("bad number '" + s + "'");
}

// "lo:hi:step" or "a,b,c"
json parse_grid(const std::string& s) {
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw entroscope::io::SchemaError("--t-grid expects lo:hi:step");
    return {{"lo", to_double(parts[0])}, {"hi", to_double(parts[1])}, {"step", to_double(parts[2])}};
  }
  json g = json::array();
  for (const auto& p : split(s, ',')) g.push_back(to_double(p));
  return g;
}

// "arithmetic:2,2" | "geometric:2" | "squares:400" | "explicit:1,4,9"
json parse_sequence(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  const auto args = colon == std::string::npos ? std::vector<std::string>{} : split(s.substr(colon + 1), ',');
  const auto at = [&](std::size_t i) {
    if (i >= args.size()) throw entroscope::io::SchemaError("--sequence '" + s + "' is missing arguments");
    return args[i];
  };
  if (kind == "arithmetic") return {{"type", "arithmetic"}, {"start", at(0)}, {"step", at(1)}};
  if (kind == "geometric") return {{"type", "geometric"}, {"base", at(0)}};
  if (kind == "squares") return {{"type", "squares"}, {"up_to", std::stol(at(0))}};
  if (kind == "explicit") return {{"type", "explicit"}, {"terms", args}};
  throw entroscope::io::SchemaError("unknown sequence kind '" + kind + "'");
}

json parse_scale(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return s;
  return {{"kind", s.substr(0, colon)}, {"inner", s.substr(colon + 1)}};
}

json build_config(const Flags& f) {
  json doc = f.config.empty() ? json::object() : entroscope::cli::read_json_file(f.config);
  if (!doc.is_object()) throw entroscope::io::SchemaError("config must be a JSON object");
  if (!f.preset.empty()) doc["preset"] = f.preset;
  json& o = doc["overrides"];
  if (!o.is_object()) o = json::object();
  if (f.n_max) {
    o["n_max"] = f.n_max;
    o["n_list"] = nullptr;
  }
  if (f.n_min) {
    o["n_min"] = f.n_min;
    o["n_list"] = nullptr;
  }
  if (!f.n_list.empty()) o["n_list"] = f.n_list;
  if (!f.eps.empty()) o["epsilon"] = f.eps;
  if (!f.t_grid.empty()) o["t_grid"] = parse_grid(f.t_grid);
  if (f.threshold > 0) o["threshold"] = f.threshold;
  if (!f.scale.empty()) o["scale"] = parse_scale(f.scale);
  if (!f.sequence.empty()) o["sequence"] = parse_sequence(f.sequence);
  if (f.m) o["m"] = f.m;
  if (!f.radius.empty()) o["radius"] = f.radius;
  if (f.alphabet_size) o["alphabet_size"] = f.alphabet_size;
  if (o.empty()) doc.erase("overrides");
  if (f.cap_words) doc["caps"]["words"] = f.cap_words;
  if (f.cap_pairs) doc["caps"]["pairs"] = f.cap_pairs;
  if (!f.out.empty()) doc["output"] = f.out;
  return doc;
}

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file");
  sub->add_option("--preset", f.preset, "named preset (see preset-list)");
  sub->add_option("--out", f.out, "directory for summary.json and CSV tables");
  sub->add_option("--n-max", f.n_max, "largest n");
  sub->add_option("--n-min", f.n_min, "smallest n");
  sub->add_option("--n-list", f.n_list, "explicit n values")->delimiter(',');
  sub->add_option("--eps", f.eps, "epsilon values")->delimiter(',');
  sub->add_option("--t-grid", f.t_grid, "t grid as lo:hi:step or a,b,c");
  sub->add_option("--threshold", f.threshold, "slow-entropy ratio threshold");
  sub->add_option("--scale", f.scale, "exponential | polynomial | paper-a | paper-c[:inner]");
  sub->add_option("--cap-words", f.cap_words, "word enumeration cap");
  sub->add_option("--cap-pairs", f.cap_pairs, "brute-force pair cap");
  sub->add_option("--sequence", f.sequence, "arithmetic:a,d | geometric:b | squares:N | explicit:t1,t2,...");
  sub->add_option("--m", f.m, "thickening m for folner");
  sub->add_option("--radius", f.radius, "Hamming radius, e.g. 3/10");
  sub->add_option("--alphabet-size", f.alphabet_size, "alphabet size for hamming/goodwyn");
  sub->add_flag("--quiet", f.quiet, "print only the summary, not the tables");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entropy invariants of subshifts, cocycles and skew products"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::string> names;
  for (const auto& [name, fn] : entroscope::cli::commands()) names.push_back(name);
  names.push_back("run");
  for (const auto& name : names) add_flags(app.add_subcommand(name, name == "run" ? "run config.command" : name), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(entroscope::cli::ExitCode::Schema);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  json doc;
  try {
    doc = build_config(flags);
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return static_cast<int>(entroscope::cli::ExitCode::Schema);
  }
  auto report = entroscope::cli::run(doc, command);
  const std::string out = report.config.is_object() ? report.config.value("output", std::string()) : std::string();
  if (!out.empty()) {
    try {
      report.write(out);
    } catch (const std::exception& e) {
      std::cerr << "cannot write report: " << e.what() << '\n';
      return static_cast<int>(entroscope::cli::ExitCode::Failed);
    }
  }
  report.print(std::cout, out.empty() && !flags.quiet);
  if (!report.error.empty()) std::cerr << report.error << '\n';
  return static_cast<int>(report.exit_code());
}
