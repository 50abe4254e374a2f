#pragma once

// Ratio curves spa / a_n(t), the threshold-crossing slow-entropy estimator
// and the spanning-count estimate of h_top.

#include <cmath>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "entroscope/entropy/scale.hpp"
#include "entroscope/fiber.hpp"
#include "entroscope/parallel.hpp"
#include "entroscope/skew.hpp"

namespace entroscope::entropy {

using Source = std::variant<fiber::FiberSystem, skew::SkewSystem>;

inline constexpr double kDefaultThreshold = 1e-3;
inline constexpr double kDefaultGridStep = 0.05;
inline constexpr const char* kDiagnosticLabel = "finite-n diagnostic, not a limit";

struct CountBracket {
  Integer lower;
  Integer upper;
};

/// Spanning-count bracket on {0, ..., n-1}: spa_bracket for a fiber,
/// capacity_A for a skew product.
inline CountBracket count_bracket(const Source& source, std::size_t n, double eps, const skew::Options& options = {}) {
  if (n == 0) throw DomainError("count_bracket: n must be positive");
  if (const auto* f = std::get_if<fiber::FiberSystem>(&source)) {
    const auto b = fiber::spa_bracket(*f, cocycle::FiniteIntSet::interval(0, static_cast<std::int64_t>(n) - 1), eps,
                                      {options.word_cap, options.pair_cap});
    return {b.lower, b.upper};
  }
  const auto c = skew::capacity_A(std::get<skew::SkewSystem>(source), n, eps, options);
  return {c.lower, c.upper};
}

struct RatioRow {
  std::size_t n = 0;
  long double log_lower = 0;  // log(count lower / a_n(t))
  long double log_upper = 0;
  long double lower() const { return std::exp(log_lower); }
  long double upper() const { return std::exp(log_upper); }
};

struct RatioCurve {
  double t = 0;
  std::vector<RatioRow> rows;
};

namespace detail {

inline RatioCurve make_curve(double t, const std::vector<std::size_t>& ns, const std::vector<CountBracket>& counts,
                             ScaleEvaluator& scale) {
  RatioCurve curve{t, {}};
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const long double log_a = scale.log_value(ns[i], t);
    RatioRow row{ns[i], log_of(counts[i].lower) - log_a, log_of(counts[i].upper) - log_a};
    if (row.log_lower > row.log_upper) throw InconsistencyError("ratio bracket inverted");
    curve.rows.push_back(row);
  }
  return curve;
}

inline std::vector<CountBracket> brackets_for(const Source& source, const std::vector<std::size_t>& ns, double eps,
                                              const skew::Options& options) {
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) throw DomainError("n list must be strictly increasing");
  return parallel_map(ns.size(), [&](std::size_t i) { return count_bracket(source, ns[i], eps, options); });
}

}  // namespace detail

inline RatioCurve ratio_curve(const Source& source, const Scale& scale, double eps, const std::vector<std::size_t>& ns,
                              double t, const skew::Options& options = {}) {
  if (ns.empty()) throw DomainError("ratio_curve: empty n list");
  ScaleEvaluator ev(scale, options.word_cap);
  return detail::make_curve(t, ns, detail::brackets_for(source, ns, eps, options), ev);
}

/// t in [lo, hi] with the given step, hi included when it falls on the grid.
inline std::vector<double> t_grid(double lo, double hi, double step = kDefaultGridStep) {
  if (!(step > 0) || !(lo > 0) || hi < lo) throw DomainError("t grid needs 0 < lo <= hi and step > 0");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  // Snap to 12 decimals so 0.3 + 6 * 0.05 reads back as 0.6.
  for (std::size_t i = 0; i <= count; ++i) out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
  return out;
}

struct SlowEntropyReport {
  std::string label = kDiagnosticLabel;
  std::string scale;
  double epsilon = 0;
  std::size_t n_max = 0;
  double threshold = kDefaultThreshold;
  std::vector<double> grid;
  double t_upper = 0;
  double t_lower = 0;
  bool upper_empty = false;  // no grid t had an upper ratio above threshold
  bool lower_empty = false;
  std::vector<std::size_t> ns;
  std::vector<RatioCurve> curves;  // one per grid t, in grid order
};

/// Threshold-crossing estimator: t_upper is the largest grid t whose upper
/// ratio at n_max exceeds the threshold, t_lower likewise with lower ratios.
/// An empty crossing set reports the grid minimum and sets the flag.
/// Curves are evaluated at `ns` (n_max is appended when missing).
inline SlowEntropyReport slow_entropy_report(const Source& source, const Scale& scale, double eps, std::size_t n_max,
                                             const std::vector<double>& grid, double threshold = kDefaultThreshold,
                                             std::vector<std::size_t> ns = {}, const skew::Options& options = {}) {
  if (grid.empty()) throw DomainError("slow_entropy_report: empty t grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("t grid must be increasing");
  if (!(threshold > 0)) throw DomainError("threshold must be positive");
  if (n_max == 0) throw DomainError("n_max must be positive");
  if (ns.empty() || ns.back() < n_max) ns.push_back(n_max);
  if (ns.back() != n_max) throw DomainError("n list extends past n_max");

  SlowEntropyReport report;
  report.scale = scale.name();
  report.epsilon = eps;
  report.n_max = n_max;
  report.threshold = threshold;
  report.grid = grid;
  report.ns = ns;

  const auto counts = detail::brackets_for(source, ns, eps, options);
  ScaleEvaluator ev(scale, options.word_cap);
  for (auto n : ns) ev.log_value(n, grid.front());  // fill the class cache before fanning out
  report.curves = parallel_map(grid.size(), [&](std::size_t i) { return detail::make_curve(grid[i], ns, counts, ev); });

  const long double log_threshold = std::log(static_cast<long double>(threshold));
  report.upper_empty = report.lower_empty = true;
  report.t_upper = report.t_lower = grid.front();
  for (const auto& curve : report.curves) {
    const auto& last = curve.rows.back();
    if (last.log_upper > log_threshold) {
      report.t_upper = curve.t;
      report.upper_empty = false;
    }
    if (last.log_lower > log_threshold) {
      report.t_lower = curve.t;
      report.lower_empty = false;
    }
  }
  return report;
}

struct EntropyBracket {
  long double lower = 0;
  long double upper = 0;
};

/// ((1/n) log lower, (1/n) log upper) for the spanning bracket on [0, n).
inline EntropyBracket h_top_estimate(const fiber::FiberSystem& system, double eps, std::size_t n_max,
                                     const fiber::SpaOptions& options = {}) {
  if (n_max < 2) throw DomainError("h_top_estimate needs n_max >= 2");
  const auto b = fiber::spa_bracket(system, cocycle::FiniteIntSet::interval(0, static_cast<std::int64_t>(n_max) - 1),
                                    eps, options);
  const auto n = static_cast<long double>(n_max);
  return {log_of(b.lower) / n, log_of(b.upper) / n};
}

}  // namespace entroscope::entropy
