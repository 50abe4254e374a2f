#pragma once

// Experiment reports: echoed config, CSV tables, verdicts and a JSON summary.

#include <chrono>
#include <deque>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "entroscope/io.hpp"

namespace entroscope::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Status { Pass, Fail, Observed };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Observed: return "OBSERVED";
  }
  return "?";
}

struct Verdict {
  std::string check;  // producing operation
  Status status = Status::Observed;
  std::string detail;
};

enum class ExitCode : int { Ok = 0, Failed = 1, Schema = 2, CapExceeded = 3, Inconsistency = 4 };

struct Report {
  std::string command;
  io::json config;                 // merged config, re-runnable
  io::json values = io::json::object();
  std::deque<io::Table> tables;    // deque: table() references stay valid
  std::vector<Verdict> verdicts;
  std::string error;               // set when the run stopped early
  ExitCode error_code = ExitCode::Ok;
  double wall_seconds = 0;

  io::Table& table(std::string name, std::vector<std::string> header) {
    tables.push_back({std::move(name), std::move(header), {}});
    return tables.back();
  }
  void verdict(std::string check, Status status, std::string detail) {
    verdicts.push_back({std::move(check), status, std::move(detail)});
  }

  ExitCode exit_code() const {
    if (error_code != ExitCode::Ok) return error_code;
    for (const auto& v : verdicts)
      if (v.status == Status::Fail) return ExitCode::Failed;
    return ExitCode::Ok;
  }

  io::json summary() const {
    io::json v = io::json::array();
    for (const auto& x : verdicts) v.push_back({{"check", x.check}, {"status", to_string(x.status)}, {"detail", x.detail}});
    io::json t = io::json::array();
    for (const auto& x : tables) t.push_back({{"name", x.name}, {"file", x.name + ".csv"}, {"rows", x.rows.size()}});
    io::json out = {{"command", command},
                    {"values", values},
                    {"verdicts", v},
                    {"tables", t},
                    {"config", config},
                    {"metadata",
                     {{"version", kVersion}, {"wall_seconds", wall_seconds}, {"exit_code", static_cast<int>(exit_code())}}}};
    if (!error.empty()) out["error"] = error;
    return out;
  }

  void write(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    for (const auto& t : tables) io::write_csv_file((std::filesystem::path(dir) / (t.name + ".csv")).string(), t);
    std::ofstream f(std::filesystem::path(dir) / "summary.json");
    if (!f) throw Error("cannot write summary to " + dir);
    f << summary().dump(2) << '\n';
  }

  /// Human-readable summary; tables are printed as CSV when `tables_inline`.
  void print(std::ostream& os, bool tables_inline) const {
    os << "command: " << command << '\n';
    for (const auto& [k, v] : values.items()) os << "  " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    for (const auto& v : verdicts) os << to_string(v.status) << "  " << v.check << ": " << v.detail << '\n';
    if (!error.empty()) os << "error: " << error << '\n';
    if (tables_inline)
      for (const auto& t : tables) {
        os << "# " << t.name << '\n';
        io::write_csv(os, t);
      }
  }
};

}  // namespace entroscope::cli
