#pragma once

// sup over w in L_{n,s} of |tau^n(w)| / n, the finite-n witness for uniform
// convergence of ergodic averages.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>

#include "entroscope/cocycle.hpp"
#include "entroscope/symbolic.hpp"

namespace entroscope::entropy {

namespace detail {

/// Max and min of tau^n over paths of an SFT block graph (radius-0 tau).
inline std::pair<std::int64_t, std::int64_t> extreme_sums(const symbolic::detail::BlockGraph& g,
                                                          const cocycle::Cocycle& tau, std::size_t n) {
  constexpr auto lo_init = std::numeric_limits<std::int64_t>::min();
  constexpr auto hi_init = std::numeric_limits<std::int64_t>::max();
  const std::size_t vcount = g.vertices.size();
  std::vector<std::int64_t> best(vcount), worst(vcount), nb(vcount), nw(vcount);
  const auto weight = [&](symbolic::Symbol a) { return tau.eval(std::span<const symbolic::Symbol>(&a, 1)); };
  for (std::size_t v = 0; v < vcount; ++v) {
    std::int64_t s = 0;
    for (auto a : g.vertices[v]) s += weight(a);
    best[v] = worst[v] = s;
  }
  for (std::size_t p = g.block; p < n; ++p) {
    std::fill(nb.begin(), nb.end(), lo_init);
    std::fill(nw.begin(), nw.end(), hi_init);
    for (std::size_t u = 0; u < vcount; ++u)
      for (auto v : g.successors[u]) {
        const auto w = weight(g.vertices[v].back());
        nb[v] = std::max(nb[v], best[u] + w);
        nw[v] = std::min(nw[v], worst[u] + w);
      }
    std::swap(best, nb);
    std::swap(worst, nw);
  }
  return {*std::max_element(best.begin(), best.end()), *std::min_element(worst.begin(), worst.end())};
}

}  // namespace detail

inline Rational birkhoff_sup(const symbolic::SubshiftSpec& spec, const cocycle::Cocycle& tau, std::size_t n,
                             std::size_t cap = symbolic::kDefaultWordCap) {
  if (n == 0) throw DomainError("birkhoff_sup: n must be positive");
  if (tau.radius() == 0) {
    std::optional<symbolic::Sft> sft;
    if (const auto* s = spec.get<symbolic::Sft>()) sft = *s;
    if (const auto* full = spec.get<symbolic::FullShift>()) sft = symbolic::Sft{full->alphabet, {}};
    if (sft) {
      const auto g = symbolic::detail::BlockGraph::build(*sft);
      if (g.vertices.empty()) throw DomainError("birkhoff_sup: empty language");
      if (n >= g.block) {
        const auto [hi, lo] = detail::extreme_sums(g, tau, n);
        return Rational(std::max(std::abs(hi), std::abs(lo)), static_cast<std::int64_t>(n));
      }
    }
  }
  std::int64_t best = 0;
  for (const auto& w : symbolic::enumerate_language(spec, n, tau.radius(), cap))
    best = std::max(best, std::abs(cocycle::ergodic_sum(tau, w)));
  return Rational(best, static_cast<std::int64_t>(n));
}

}  // namespace entroscope::entropy
