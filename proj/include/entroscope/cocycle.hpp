#pragma once

// Integer cocycles of finite radius over a subshift: ergodic-sum profiles,
// the sparseness constant C_m, and the distribution of walk ranges.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "entroscope/errors.hpp"
#include "entroscope/exact.hpp"
#include "entroscope/symbolic.hpp"

namespace entroscope::cocycle {

using symbolic::Block;
using symbolic::Symbol;
using symbolic::SubshiftSpec;
using symbolic::Word;

/// A strictly increasing list of integers.
class FiniteIntSet {
 public:
  FiniteIntSet() = default;
  /// Sorts and deduplicates.
  explicit FiniteIntSet(std::vector<std::int64_t> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
  }
  static FiniteIntSet interval(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> v;
    for (auto i = lo; i <= hi; ++i) v.push_back(i);
    return FiniteIntSet(std::move(v));
  }

  const std::vector<std::int64_t>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::int64_t min() const { return values_.front(); }
  std::int64_t max() const { return values_.back(); }
  bool is_interval() const {
    return !empty() && static_cast<std::size_t>(max() - min() + 1) == size();
  }
  FiniteIntSet translated(std::int64_t k) const {
    auto v = values_;
    for (auto& x : v) x += k;
    return FiniteIntSet(std::move(v));
  }
  /// F + {-r, ..., r}
  FiniteIntSet thickened(std::int64_t r) const {
    std::vector<std::int64_t> v;
    for (auto x : values_)
      for (auto d = -r; d <= r; ++d) v.push_back(x + d);
    return FiniteIntSet(std::move(v));
  }

  friend bool operator==(const FiniteIntSet&, const FiniteIntSet&) = default;
  friend auto operator<=>(const FiniteIntSet&, const FiniteIntSet&) = default;

 private:
  std::vector<std::int64_t> values_;
};

struct CmResult {
  bool bounded_gaps = false;  // F + {0..m-1} is an interval
  Rational cm;
};

/// C_m(F) = |F + {0, ..., m-1}| / |F|.
inline CmResult c_m(const FiniteIntSet& f, std::int64_t m) {
  if (f.empty()) throw DomainError("c_m: empty set");
  if (m < 1) throw DomainError("c_m: m must be positive");
  const auto& v = f.values();
  std::int64_t covered = m;
  bool bounded = true;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const auto gap = v[i + 1] - v[i];
    covered += std::min(gap, m);
    if (gap > m) bounded = false;
  }
  return {bounded, Rational(covered, static_cast<std::int64_t>(v.size()))};
}

/// A locally determined integer function tau(y) = rule(y[-s..s]).
class Cocycle {
 public:
  Cocycle(std::size_t alphabet_size, std::size_t radius, std::map<Block, long> rule)
      : k_(alphabet_size), radius_(radius) {
    if (k_ < 2) throw DomainError("cocycle alphabet must have at least 2 symbols");
    const std::size_t width = 2 * radius_ + 1;
    if (static_cast<double>(width) * std::log2(static_cast<double>(k_)) > 24)
      throw DomainError("cocycle window table too large");
    std::size_t entries = 1;
    for (std::size_t i = 0; i < width; ++i) entries *= k_;
    table_.assign(entries, std::nullopt);
    long bound = 0;
    for (const auto& [window, value] : rule) {
      if (window.size() != width) throw DomainError("cocycle rule window has wrong length");
      table_[encode(window)] = value;
      bound = std::max(bound, std::labs(value));
    }
    // tau == 0 is allowed; m stays at least 1 so that C_m is defined.
    bound_ = std::max(bound, 1L);
    rule_ = std::move(rule);
  }

  /// tau(y) = value of the symbol y(0).
  static Cocycle coordinate(const symbolic::Alphabet& alphabet) {
    std::map<Block, long> rule;
    for (std::size_t a = 0; a < alphabet.size(); ++a)
      rule[{static_cast<Symbol>(a)}] = alphabet.value(static_cast<Symbol>(a));
    return {alphabet.size(), 0, std::move(rule)};
  }
  static Cocycle constant(std::size_t alphabet_size, long value) {
    std::map<Block, long> rule;
    for (std::size_t a = 0; a < alphabet_size; ++a) rule[{static_cast<Symbol>(a)}] = value;
    return {alphabet_size, 0, std::move(rule)};
  }
  /// tau((a, b)) = values[a] on a product alphabet whose right factor has size k_right.
  static Cocycle left_coordinate(const symbolic::Alphabet& left, std::size_t k_right) {
    std::map<Block, long> rule;
    for (std::size_t a = 0; a < left.size(); ++a)
      for (std::size_t b = 0; b < k_right; ++b)
        rule[{static_cast<Symbol>(a * k_right + b)}] = left.value(static_cast<Symbol>(a));
    return {left.size() * k_right, 0, std::move(rule)};
  }

  std::size_t alphabet_size() const { return k_; }
  std::size_t radius() const { return radius_; }
  /// m: max |tau|, at least 1.
  long bound() const { return bound_; }
  const std::map<Block, long>& rule() const { return rule_; }

  /// True when every defined value lies in {-1, 0, 1}.
  bool unit_steps() const {
    return std::all_of(rule_.begin(), rule_.end(),
                       [](const auto& kv) { return kv.second >= -1 && kv.second <= 1; });
  }

  long eval(std::span<const Symbol> window) const {
    const auto& v = table_.at(encode(window));
    if (!v) throw DomainError("cocycle rule undefined on a window of the base");
    return *v;
  }

  /// tau(S^j w) for a word whose coordinate j is stored at w.at(j).
  long eval_at(const Word& w, std::int64_t j) const {
    const auto r = static_cast<std::int64_t>(radius_);
    if (j - r < w.start || j + r >= w.end()) throw DomainError("word too short for cocycle window");
    const auto offset = static_cast<std::size_t>(j - r - w.start);
    return eval(std::span<const Symbol>(w.symbols).subspan(offset, 2 * radius_ + 1));
  }

 private:
  std::size_t encode(std::span<const Symbol> window) const {
    std::size_t code = 0;
    for (Symbol s : window) {
      if (s >= k_) throw DomainError("cocycle window symbol out of range");
      code = code * k_ + s;
    }
    return code;
  }

  std::size_t k_;
  std::size_t radius_;
  long bound_ = 1;
  std::map<Block, long> rule_;
  std::vector<std::optional<long>> table_;
};

struct CocycleProfile {
  std::vector<std::int64_t> partial_sums;  // tau^0, ..., tau^{n-1}
  FiniteIntSet visited;
  std::size_t r = 0;
  Rational cm;
  Rational q;
};

/// Profile of a word of length n + 2s supported on [-s, n+s-1].
inline CocycleProfile cocycle_profile(const Cocycle& tau, const Word& w) {
  const auto s = static_cast<std::int64_t>(tau.radius());
  if (w.size() < 2 * tau.radius() + 1) throw DomainError("cocycle_profile: word too short");
  const auto n = static_cast<std::int64_t>(w.size()) - 2 * s;
  // Accept words given with start at -s; reinterpret other starts accordingly.
  const Word local{-s, w.symbols};
  CocycleProfile p;
  p.partial_sums.reserve(static_cast<std::size_t>(n));
  std::int64_t sum = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    p.partial_sums.push_back(sum);
    if (i + 1 < n) sum += tau.eval_at(local, i);
  }
  p.visited = FiniteIntSet(p.partial_sums);
  p.r = p.visited.size();
  p.cm = c_m(p.visited, tau.bound()).cm;
  p.q = Rational(static_cast<long>(p.r)) * p.cm;
  return p;
}

/// tau^n(w) for w in L_{n,s} (uses all n windows).
inline std::int64_t ergodic_sum(const Cocycle& tau, const Word& w) {
  const auto s = static_cast<std::int64_t>(tau.radius());
  const auto n = static_cast<std::int64_t>(w.size()) - 2 * s;
  const Word local{-s, w.symbols};
  std::int64_t sum = 0;
  for (std::int64_t i = 0; i < n; ++i) sum += tau.eval_at(local, i);
  return sum;
}

// ---------------------------------------------------------------------------
// Walk ranges

struct RangeDistribution {
  std::map<std::size_t, Integer> counts;  // r -> number of words
  Integer overflow = 0;                   // words whose range exceeded r_max

  Integer total() const {
    Integer t = overflow;
    for (const auto& [r, c] : counts) t += c;
    return t;
  }
};

/// True when walk_range_distribution accepts (spec, tau).
inline bool walk_fast_path_applies(const SubshiftSpec& spec, const Cocycle& tau) {
  return tau.radius() == 0 && tau.unit_steps() &&
         (spec.get<symbolic::FullShift>() || spec.get<symbolic::Sft>());
}

/// Number of words of L_{n,0} by visited-set size, via a DP over
/// (SFT block, current - min, max - current). Ranges above r_max go to the
/// overflow bucket; pass r_max >= n for exact results.
inline RangeDistribution walk_range_distribution(const SubshiftSpec& spec, const Cocycle& tau,
                                                 std::size_t n, std::size_t r_max = 0) {
  if (tau.radius() != 0) throw DomainError("walk_range_distribution needs a radius-0 cocycle");
  if (!tau.unit_steps()) throw DomainError("walk_range_distribution needs steps in {-1,0,1}");
  if (n == 0) throw DomainError("walk_range_distribution: n must be positive");
  if (r_max == 0) r_max = n;

  symbolic::detail::BlockGraph graph;
  if (const auto* sft = spec.get<symbolic::Sft>()) {
    graph = symbolic::detail::BlockGraph::build(*sft);
  } else if (const auto* full = spec.get<symbolic::FullShift>()) {
    graph = symbolic::detail::BlockGraph::build(symbolic::Sft{full->alphabet, {}});
  } else {
    throw DomainError("walk_range_distribution needs a full shift or SFT base");
  }

  RangeDistribution out;
  if (n < graph.block) {
    for (const auto& w : graph.words(n, symbolic::kDefaultWordCap)) {
      const auto p = cocycle_profile(tau, Word{0, w});
      if (p.r > r_max) {
        out.overflow += 1;
      } else {
        out.counts[p.r] += 1;
      }
    }
    return out;
  }

  const std::size_t side = r_max;  // a, b in [0, r_max - 1] with a + b + 1 <= r_max
  const std::size_t vcount = graph.vertices.size();
  auto idx = [side](std::size_t v, std::size_t a, std::size_t b) { return (v * side + a) * side + b; };
  std::vector<Integer> cur(vcount * side * side), next(cur.size());
  std::vector<Integer> overflow_by_vertex(vcount), next_overflow(vcount);

  // Apply one walk step; returns false when the range leaves [1, r_max].
  auto step = [&](std::size_t& a, std::size_t& b, long delta) {
    if (delta > 0) {
      ++a;
      if (b > 0) --b;
    } else if (delta < 0) {
      ++b;
      if (a > 0) --a;
    }
    return a + b + 1 <= r_max;
  };

  const std::size_t last_step = n - 1;  // steps use positions 0..n-2
  for (std::size_t v = 0; v < vcount; ++v) {
    std::size_t a = 0, b = 0;
    bool inside = true;
    for (std::size_t p = 0; p < graph.block && p < last_step && inside; ++p)
      inside = step(a, b, tau.eval(std::span<const Symbol>(&graph.vertices[v][p], 1)));
    if (inside) {
      cur[idx(v, a, b)] += 1;
    } else {
      overflow_by_vertex[v] += 1;
    }
  }
  std::size_t reach = std::min(graph.block, last_step);  // a + b <= reach
  for (std::size_t p = graph.block; p < n; ++p) {
    const bool walks = p < last_step;
    const std::size_t lim = std::min(reach, side - 1);
    const std::size_t next_lim = std::min(reach + 1, side - 1);
    for (std::size_t v = 0; v < vcount; ++v) {
      next_overflow[v] = 0;
      for (std::size_t a = 0; a <= next_lim; ++a)
        for (std::size_t b = 0; a + b <= next_lim; ++b) next[idx(v, a, b)] = 0;
    }
    for (std::size_t u = 0; u < vcount; ++u) {
      for (auto v : graph.successors[u]) {
        const long delta = walks ? tau.eval(std::span<const Symbol>(&graph.vertices[v].back(), 1)) : 0;
        next_overflow[v] += overflow_by_vertex[u];
        for (std::size_t a = 0; a <= lim; ++a)
          for (std::size_t b = 0; a + b <= lim; ++b) {
            const Integer& c = cur[idx(u, a, b)];
            if (c == 0) continue;
            std::size_t a2 = a, b2 = b;
            if (step(a2, b2, delta)) {
              next[idx(v, a2, b2)] += c;
            } else {
              next_overflow[v] += c;
            }
          }
      }
    }
    std::swap(cur, next);
    std::swap(overflow_by_vertex, next_overflow);
    if (walks) ++reach;
  }
  for (std::size_t v = 0; v < vcount; ++v) {
    out.overflow += overflow_by_vertex[v];
    for (std::size_t a = 0; a < side; ++a)
      for (std::size_t b = 0; a + b < side; ++b)
        if (cur[idx(v, a, b)] != 0) out.counts[a + b + 1] += cur[idx(v, a, b)];
  }
  return out;
}

/// Exhaustive range distribution over L_{n,s}; the oracle for the DP.
inline RangeDistribution range_distribution_by_enumeration(const SubshiftSpec& spec,
                                                           const Cocycle& tau, std::size_t n,
                                                           std::size_t cap = symbolic::kDefaultWordCap) {
  RangeDistribution out;
  for (const auto& w : symbolic::enumerate_language(spec, n, tau.radius(), cap))
    out.counts[cocycle_profile(tau, w).r] += 1;
  return out;
}

/// Words of L_{n,s} grouped by (r, q); the classes behind the a_n(t) scale.
inline std::map<std::pair<std::size_t, Rational>, Integer> profile_classes(
    const SubshiftSpec& spec, const Cocycle& tau, std::size_t n,
    std::size_t cap = symbolic::kDefaultWordCap) {
  std::map<std::pair<std::size_t, Rational>, Integer> out;
  if (walk_fast_path_applies(spec, tau)) {
    // Visited sets are intervals, so q = r * (r + m - 1) / r = r + m - 1.
    const auto dist = walk_range_distribution(spec, tau, n, n);
    for (const auto& [r, c] : dist.counts)
      out[{r, Rational(static_cast<long>(r + static_cast<std::size_t>(tau.bound()) - 1))}] += c;
    return out;
  }
  for (const auto& w : symbolic::enumerate_language(spec, n, tau.radius(), cap)) {
    const auto p = cocycle_profile(tau, w);
    out[{p.r, p.q}] += 1;
  }
  return out;
}

/// |{w in L_{n,s} : r_n(w) >= N}| / |L_{n,s}|, exactly.
inline Rational unbounded_profile(const SubshiftSpec& spec, const Cocycle& tau, std::size_t big_n,
                                  std::size_t n, std::size_t cap = symbolic::kDefaultWordCap) {
  const RangeDistribution dist = walk_fast_path_applies(spec, tau)
                                     ? walk_range_distribution(spec, tau, n, n)
                                     : range_distribution_by_enumeration(spec, tau, n, cap);
  const Integer total = dist.total();
  if (total == 0) throw DomainError("unbounded_profile: empty language");
  Integer hits = dist.overflow;
  for (const auto& [r, c] : dist.counts)
    if (r >= big_n) hits += c;
  return Rational(hits, total);
}

/// Finite-horizon evidence for lambda-unboundedness: the smallest proportion
/// over n in [n_min, n_max] of words with range >= N.
struct UnboundednessEvidence {
  double lambda = 0;
  std::size_t big_n = 0;
  std::size_t n_max = 0;
  Rational min_proportion;
  bool supported = false;  // min_proportion >= lambda
};

inline UnboundednessEvidence unboundedness_evidence(const SubshiftSpec& spec, const Cocycle& tau,
                                                    double lambda, std::size_t big_n,
                                                    std::size_t n_min, std::size_t n_max,
                                                    std::size_t cap = symbolic::kDefaultWordCap) {
  UnboundednessEvidence e{lambda, big_n, n_max, Rational(1), false};
  for (std::size_t n = n_min; n <= n_max; ++n)
    e.min_proportion = std::min(e.min_proportion, unbounded_profile(spec, tau, big_n, n, cap));
  e.supported = to_long_double(e.min_proportion) >= lambda;
  return e;
}

}  // namespace entroscope::cocycle
