#pragma once

// The skew product (y, x) -> (S y, T^{tau(y)} x) over a subshift base: orbits,
// Bowen distances, the capacity A_n(eps), direct separated counts and the
// sandwich check between them.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "entroscope/cocycle.hpp"
#include "entroscope/fiber.hpp"
#include "entroscope/parallel.hpp"
#include "entroscope/symbolic.hpp"

namespace entroscope::skew {

using cocycle::Cocycle;
using cocycle::FiniteIntSet;
using fiber::FiberPoint;
using fiber::FiberSystem;
using symbolic::Block;
using symbolic::SubshiftSpec;
using symbolic::SymbolicPoint;
using symbolic::Word;

struct SkewSystem {
  SubshiftSpec base;
  Cocycle tau;
  FiberSystem fiber;

  SkewSystem(SubshiftSpec b, Cocycle t, FiberSystem f) : base(std::move(b)), tau(std::move(t)), fiber(std::move(f)) {
    if (tau.alphabet_size() != base.alphabet().size())
      throw DomainError("cocycle alphabet size does not match the base alphabet");
  }
};

struct Options {
  std::size_t word_cap = symbolic::kDefaultWordCap;
  std::size_t pair_cap = fiber::kDefaultPairCap;
  bool force_enumeration = false;  // skip grouped fast paths (cross-checks)
};

/// tau^0(y), ..., tau^{n-1}(y) for a base point known on [-s, n-2+s].
inline std::vector<std::int64_t> exponents(const Cocycle& tau, const SymbolicPoint& y, std::size_t n) {
  const auto s = static_cast<std::int64_t>(tau.radius());
  std::vector<std::int64_t> out;
  out.reserve(n);
  std::int64_t sum = 0;
  Block window(2 * tau.radius() + 1);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(sum);
    if (k + 1 == n) break;
    const auto j = static_cast<std::int64_t>(k);
    for (std::int64_t d = -s; d <= s; ++d) window[static_cast<std::size_t>(d + s)] = y.at(j + d);
    sum += tau.eval(window);
  }
  return out;
}

struct SkewState {
  SymbolicPoint base;
  FiberPoint fiber;
  std::int64_t exponent;
};

/// k-th state is (S^k y, T^{tau^k(y)} x) for k < n.
inline std::vector<SkewState> skew_orbit(const SkewSystem& sys, const SymbolicPoint& y, const FiberPoint& x,
                                         std::size_t n) {
  if (n == 0) throw DomainError("skew_orbit: n must be positive");
  const auto e = exponents(sys.tau, y, n);
  std::vector<SkewState> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    out.push_back({y.shifted(static_cast<std::int64_t>(k)), fiber::iterate(sys.fiber, x, e[k]), e[k]});
  return out;
}

struct SkewPoint {
  SymbolicPoint base;
  FiberPoint fiber;
};

enum class BowenMode { Raw, Decomposition };

/// Bowen distance of the skew product on {0, ..., n-1} with the max product
/// metric. Raw mode evaluates the definition step by step; decomposition
/// mode requires the base points to agree on [-s, n-1+s] and returns
/// max(d^B_[0,n)(y, y'), d^B_{visited}(x, x')).
inline long double skew_bowen_distance(const SkewSystem& sys, const SkewPoint& p, const SkewPoint& q, std::size_t n,
                                       BowenMode mode = BowenMode::Raw) {
  if (n == 0) throw DomainError("skew_bowen_distance: n must be positive");
  const auto need_exact = [](const symbolic::DistanceBound& d) {
    if (!d.exact) throw WindowError("skew_bowen_distance: base windows too short");
    return d.value;
  };
  long double best = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = static_cast<std::int64_t>(k);
    best = std::max(best, need_exact(symbolic::standard_distance(p.base, c, q.base, c)));
  }
  const auto ep = exponents(sys.tau, p.base, n);
  const auto eq = exponents(sys.tau, q.base, n);
  if (mode == BowenMode::Decomposition) {
    const auto s = static_cast<std::int64_t>(sys.tau.radius());
    for (std::int64_t i = -s; i < static_cast<std::int64_t>(n) + s; ++i)
      if (p.base.at(i) != q.base.at(i))
        throw DomainError("decomposition mode needs base points agreeing on [-s, n-1+s]");
    return std::max(best, fiber::bowen_distance(sys.fiber, p.fiber, q.fiber, FiniteIntSet(ep)));
  }
  for (std::size_t k = 0; k < n; ++k) {
    const auto d = fiber::distance(sys.fiber, fiber::iterate(sys.fiber, p.fiber, ep[k]),
                                   fiber::iterate(sys.fiber, q.fiber, eq[k]));
    best = std::max(best, need_exact(d));
  }
  return best;
}

/// Raw-definition test d^B_n((y,x), (y',x')) <= eps; stops at the first far step.
inline bool skew_within(const SkewSystem& sys, const SkewPoint& p, const std::vector<std::int64_t>& ep,
                        const SkewPoint& q, const std::vector<std::int64_t>& eq, double eps) {
  for (std::size_t k = 0; k < ep.size(); ++k) {
    const auto c = static_cast<std::int64_t>(k);
    const auto d = symbolic::standard_distance(p.base, c, q.base, c);
    if (d.value > eps) {
      if (!d.exact) throw WindowError("skew_within: base windows too short");
      return false;
    }
    if (const auto* px = std::get_if<SymbolicPoint>(&p.fiber)) {
      const auto dx = symbolic::standard_distance(*px, ep[k], std::get<SymbolicPoint>(q.fiber), eq[k]);
      if (dx.value <= eps) continue;
      if (!dx.exact) throw WindowError("skew_within: fiber windows too short");
      return false;
    }
    if (!fiber::within(sys.fiber, fiber::iterate(sys.fiber, p.fiber, ep[k]), fiber::iterate(sys.fiber, q.fiber, eq[k]),
                       eps))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Capacity A_n(eps)

struct CapacityBracket {
  std::size_t n = 0;
  double epsilon = 0;
  Integer lower;
  Integer upper;
  bool fast_path = false;
};

namespace detail {

/// Fibers whose spa bracket on an interval depends only on its length.
inline bool length_only_brackets(const FiberSystem& f) { return f.get<fiber::ToralAutoFiber>() == nullptr; }

}  // namespace detail

/// Sum over w in L_{n,s} of spa_bracket(fiber, visited(w), eps).
inline CapacityBracket capacity_A(const SkewSystem& sys, std::size_t n, double eps, const Options& options = {}) {
  if (n == 0) throw DomainError("capacity_A: n must be positive");
  if (!(eps > 0)) throw DomainError("epsilon must be positive");
  const fiber::SpaOptions spa_options{options.word_cap, options.pair_cap};
  CapacityBracket out{n, eps, 0, 0, false};
  if (!options.force_enumeration && cocycle::walk_fast_path_applies(sys.base, sys.tau) &&
      detail::length_only_brackets(sys.fiber)) {
    out.fast_path = true;
    const auto dist = cocycle::walk_range_distribution(sys.base, sys.tau, n, n);
    for (const auto& [r, count] : dist.counts) {
      const auto b = fiber::spa_bracket(sys.fiber, FiniteIntSet::interval(0, static_cast<std::int64_t>(r) - 1), eps,
                                        spa_options);
      out.lower += count * b.lower;
      out.upper += count * b.upper;
    }
    return out;
  }
  const auto words = symbolic::enumerate_language(sys.base, n, sys.tau.radius(), options.word_cap);
  const auto visited =
      parallel_map(words.size(), [&](std::size_t i) { return cocycle::cocycle_profile(sys.tau, words[i]).visited; });
  // Brackets are translation invariant, so cache by the normalized visited set.
  std::map<FiniteIntSet, Integer> multiplicity;
  for (const auto& v : visited) multiplicity[v.translated(-v.min())] += 1;
  std::vector<const std::pair<const FiniteIntSet, Integer>*> classes;
  for (const auto& entry : multiplicity) classes.push_back(&entry);
  const auto brackets = parallel_map(classes.size(), [&](std::size_t i) {
    return fiber::spa_bracket(sys.fiber, classes[i]->first, eps, spa_options);
  });
  for (std::size_t i = 0; i < classes.size(); ++i) {
    out.lower += classes[i]->second * brackets[i].lower;
    out.upper += classes[i]->second * brackets[i].upper;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Direct separated counts of the skew product

/// Exact sep(S x_tau T, {0..n-1}, eps) for eps < 2 and fibers with an exact
/// separated count. For symbolic fibers eps-closeness along the orbit is an
/// equivalence relation (max of ultrametrics), so sep counts the distinct
/// orbit signatures: base symbols on [-rho, n-1+rho] together with the fiber
/// windows [e_k - rho, e_k + rho] at the exponents e_k = tau^k(y).
/// Base windows span [-rho_hat, n-1+rho_hat] with rho_hat = max(rho, s).
inline Integer skew_sep_direct(const SkewSystem& sys, std::size_t n, double eps, const Options& options = {}) {
  if (n == 0) throw DomainError("skew_sep_direct: n must be positive");
  if (!(eps > 0) || eps >= 2) throw DomainError("skew_sep_direct needs 0 < eps < 2");
  const auto rho = static_cast<std::int64_t>(symbolic::window_radius(eps));
  const auto s = static_cast<std::int64_t>(sys.tau.radius());
  const auto rho_hat = std::max(rho, s);
  const auto words =
      symbolic::interval_language(sys.base, n + 2 * static_cast<std::size_t>(rho_hat), options.word_cap);

  // base part -> set of exponent sequences
  std::map<Block, std::set<std::vector<std::int64_t>>> groups;
  for (const auto& w : words) {
    const SymbolicPoint y(Word{-rho_hat, w});
    Block part(w.begin() + (rho_hat - rho), w.end() - (rho_hat - rho));
    groups[std::move(part)].insert(exponents(sys.tau, y, n));
  }

  const auto& f = sys.fiber;
  if (const auto* id = f.get<fiber::IdentityFiber>())
    return Integer(groups.size()) * fiber::max_separated_points(*id, eps);
  if (f.get<fiber::RotationFiber>()) {
    for (const auto& [part, seqs] : groups)
      if (seqs.size() != 1)
        throw DomainError("rotation fiber: exact direct count needs eps < 2^-s (base part must fix the exponents)");
    return Integer(groups.size()) * fiber::rotation_sep_analytic(eps);
  }
  const auto* sym = f.get<fiber::SymbolicFiber>();
  if (!sym) throw DomainError("skew_sep_direct: no exact separated count for a " + f.kind() + " fiber");

  std::vector<const std::set<std::vector<std::int64_t>>*> group_list;
  for (const auto& [part, seqs] : groups) group_list.push_back(&seqs);
  const auto counts = parallel_map(group_list.size(), [&](std::size_t g) -> Integer {
    const auto& seqs = *group_list[g];
    if (seqs.size() == 1)
      return symbolic::language_count_on(sym->spec, FiniteIntSet(*seqs.begin()).thickened(rho).values(),
                                         options.word_cap);
    // Different exponent sequences under one base part: count distinct
    // tuples of fiber windows explicitly.
    std::set<Block> signatures;
    for (const auto& e : seqs) {
      const FiniteIntSet hull = FiniteIntSet(e).thickened(rho);
      const auto lo = hull.min();
      for (const auto& x : symbolic::interval_language(sym->spec, static_cast<std::size_t>(hull.max() - lo + 1),
                                                       options.word_cap)) {
        Block sig;
        sig.reserve(e.size() * static_cast<std::size_t>(2 * rho + 1));
        for (auto ek : e)
          for (std::int64_t d = -rho; d <= rho; ++d) sig.push_back(x[static_cast<std::size_t>(ek + d - lo)]);
        signatures.insert(std::move(sig));
        if (signatures.size() > options.word_cap) throw CapExceeded("skew_sep_direct: signature set exceeds cap");
      }
    }
    return Integer(signatures.size());
  });
  Integer total = 0;
  for (const auto& c : counts) total += c;
  return total;
}

/// Oracle for skew_sep_direct: greedy eps-separated selection with the raw
/// Bowen test over exhaustive representatives (base cylinders one symbol wider
/// than needed, fiber cylinders covering the visited windows plus a margin).
/// Symbolic and identity fibers only; cost is quadratic in the number of
/// representatives and bounded by the pair cap.
inline std::size_t skew_sep_pairwise(const SkewSystem& sys, std::size_t n, double eps, const Options& options = {}) {
  if (n == 0) throw DomainError("skew_sep_pairwise: n must be positive");
  if (!(eps > 0) || eps >= 2) throw DomainError("skew_sep_pairwise needs 0 < eps < 2");
  const auto rho = static_cast<std::int64_t>(symbolic::window_radius(eps));
  const auto s = static_cast<std::int64_t>(sys.tau.radius());
  const auto margin = std::max(rho, s) + 1;
  const auto* sym = sys.fiber.get<fiber::SymbolicFiber>();
  const auto* id = sys.fiber.get<fiber::IdentityFiber>();
  if (!sym && !id) throw DomainError("skew_sep_pairwise supports symbolic and identity fibers");

  struct Rep {
    SkewPoint point;
    std::vector<std::int64_t> e;
  };
  std::vector<Rep> reps;
  for (const auto& w : symbolic::interval_language(sys.base, n + 2 * static_cast<std::size_t>(margin), options.word_cap)) {
    const SymbolicPoint y(Word{-margin, w});
    const auto e = exponents(sys.tau, y, n);
    if (id) {
      for (std::size_t i = 0; i < id->distances.size(); ++i) reps.push_back({{y, i}, e});
    } else {
      const auto lo = *std::min_element(e.begin(), e.end()) - rho - 1;
      const auto hi = *std::max_element(e.begin(), e.end()) + rho + 1;
      for (auto& x : fiber::cylinder_sample(sym->spec, lo, hi, options.word_cap)) reps.push_back({{y, std::move(x)}, e});
    }
    if (reps.size() > options.word_cap) throw CapExceeded("skew_sep_pairwise: too many representatives");
  }
  // Close points agree on the base at every step 0..n-1 (eps < 2), so only
  // candidates with equal base symbols there need comparing.
  std::map<Block, std::vector<std::size_t>> chosen;
  std::size_t count = 0, pairs = 0;
  for (std::size_t c = 0; c < reps.size(); ++c) {
    Block key;
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(n); ++k) key.push_back(reps[c].point.base.at(k));
    auto& bucket = chosen[key];
    bool separated = true;
    for (auto j : bucket) {
      if (++pairs > options.pair_cap) throw CapExceeded("skew_sep_pairwise exceeded the pair cap");
      if (skew_within(sys, reps[c].point, reps[c].e, reps[j].point, reps[j].e, eps)) {
        separated = false;
        break;
      }
    }
    if (separated) {
      bucket.push_back(c);
      ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Sandwich check

struct SandwichRow {
  std::size_t n = 0;
  double epsilon = 0;
  Integer a_lo_2eps, a_hi_2eps;        // A_n(2 eps) bracket
  Integer skew_lo, skew_hi;            // sep(skew, 2 eps) <= spa(skew, eps) <= sep(skew, eps)
  Integer a_lo_halfeps, a_hi_halfeps;  // A_n(eps / 2) bracket
  Rational e_inferred;                 // skew_hi / a_lo_halfeps
  bool left_certified = false;         // a_hi_2eps <= skew_lo
};

struct SandwichReport {
  std::vector<SandwichRow> rows;
  bool left_holds = false;
  bool e_nonincreasing = false;       // no later E exceeds the E at the first n
  Rational e_max;
  bool pass = false;
};

/// Checks A_n(2 eps) <= spa(skew, {0..n-1}, eps) <= E * A_n(eps / 2) with
/// certified endpoints: the left side as A_hi(2 eps) <= sep(skew, 2 eps), the
/// right side by the smallest E with sep(skew, eps) <= E * A_lo(eps / 2).
inline SandwichReport sandwich_check(const SkewSystem& sys, const std::vector<std::size_t>& ns, double eps,
                                     const Options& options = {}) {
  if (ns.empty()) throw DomainError("sandwich_check: empty n range");
  if (!(eps > 0)) throw DomainError("epsilon must be positive");
  const double limit = std::ldexp(1.0, -static_cast<int>(sys.tau.radius()) - 1);
  if (!(eps < limit)) throw DomainError("sandwich_check needs eps < 2^(-s-1)");
  SandwichReport report;
  report.left_holds = true;
  report.e_nonincreasing = true;
  for (std::size_t idx = 0; idx < ns.size(); ++idx) {
    const std::size_t n = ns[idx];
    SandwichRow row;
    row.n = n;
    row.epsilon = eps;
    const auto a2 = capacity_A(sys, n, 2 * eps, options);
    const auto ah = capacity_A(sys, n, eps / 2, options);
    row.a_lo_2eps = a2.lower;
    row.a_hi_2eps = a2.upper;
    row.a_lo_halfeps = ah.lower;
    row.a_hi_halfeps = ah.upper;
    row.skew_lo = skew_sep_direct(sys, n, 2 * eps, options);
    row.skew_hi = skew_sep_direct(sys, n, eps, options);
    if (row.skew_lo > row.skew_hi) throw InconsistencyError("sep(skew, 2 eps) exceeds sep(skew, eps)");
    row.e_inferred = Rational(row.skew_hi, row.a_lo_halfeps);
    row.left_certified = row.a_hi_2eps <= row.skew_lo;
    report.left_holds = report.left_holds && row.left_certified;
    if (idx > 0 && row.e_inferred > report.rows.front().e_inferred) report.e_nonincreasing = false;
    report.e_max = idx == 0 ? row.e_inferred : std::max(report.e_max, row.e_inferred);
    report.rows.push_back(std::move(row));
  }
  report.pass = report.left_holds && report.e_nonincreasing;
  return report;
}

}  // namespace entroscope::skew
