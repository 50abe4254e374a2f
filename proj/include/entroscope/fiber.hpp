#pragma once

// Invertible fiber systems, Bowen distances over arbitrary finite index
// sets, and separated / spanning counts (exact where possible, certified
// brackets otherwise).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <variant>
#include <vector>

#include "entroscope/cocycle.hpp"
#include "entroscope/errors.hpp"
#include "entroscope/exact.hpp"
#include "entroscope/symbolic.hpp"

namespace entroscope::fiber {

using cocycle::FiniteIntSet;
using symbolic::DistanceBound;
using symbolic::SubshiftSpec;
using symbolic::SymbolicPoint;

/// Brute-force pair budget (2^24).
inline constexpr std::size_t kDefaultPairCap = std::size_t{1} << 24;

struct SymbolicFiber {
  SubshiftSpec spec;
};

/// x -> x + angle on R/Z with d(x, y) = min(|x - y|, 1 - |x - y|).
struct RotationFiber {
  QuadNumber angle;
};

/// The identity map on a finite metric space given by its distance matrix.
struct IdentityFiber {
  std::vector<std::vector<double>> distances;

  static IdentityFiber singleton() { return {{{0.0}}}; }
};

/// v -> M v on the N x N grid of the 2-torus, max of circle distances.
struct ToralAutoFiber {
  std::array<std::array<long, 2>, 2> matrix;
  long grid = 64;
};

struct TorusPoint {
  long u = 0;
  long v = 0;
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
  friend auto operator<=>(const TorusPoint&, const TorusPoint&) = default;
};

using FiberPoint = std::variant<SymbolicPoint, QuadNumber, std::size_t, TorusPoint>;

class FiberSystem {
 public:
  using Variant = std::variant<SymbolicFiber, RotationFiber, IdentityFiber, ToralAutoFiber>;

  FiberSystem(Variant v) : variant_(std::move(v)) { validate(); }  // NOLINT

  static FiberSystem symbolic(SubshiftSpec spec) { return FiberSystem(SymbolicFiber{std::move(spec)}); }
  static FiberSystem rotation(QuadNumber angle) { return FiberSystem(RotationFiber{std::move(angle)}); }
  static FiberSystem identity(std::vector<std::vector<double>> d) { return FiberSystem(IdentityFiber{std::move(d)}); }
  static FiberSystem singleton() { return FiberSystem(IdentityFiber::singleton()); }
  static FiberSystem toral(std::array<std::array<long, 2>, 2> m, long grid) {
    return FiberSystem(ToralAutoFiber{m, grid});
  }

  const Variant& variant() const { return variant_; }
  template <class T>
  const T* get() const {
    return std::get_if<T>(&variant_);
  }
  std::string kind() const {
    static const char* names[] = {"symbolic", "rotation", "identity", "toral"};
    return names[variant_.index()];
  }

 private:
  void validate() const {
    if (const auto* id = get<IdentityFiber>()) {
      const auto n = id->distances.size();
      if (n == 0) throw DomainError("identity fiber needs at least one point");
      for (std::size_t i = 0; i < n; ++i) {
        if (id->distances[i].size() != n) throw DomainError("identity fiber distances must be square");
        if (id->distances[i][i] != 0) throw DomainError("identity fiber: d(x, x) must be 0");
        for (std::size_t j = 0; j < n; ++j)
          if (id->distances[i][j] != id->distances[j][i] || id->distances[i][j] < 0)
            throw DomainError("identity fiber distances must be symmetric and nonnegative");
      }
    }
    if (const auto* t = get<ToralAutoFiber>()) {
      const long det = t->matrix[0][0] * t->matrix[1][1] - t->matrix[0][1] * t->matrix[1][0];
      if (det != 1 && det != -1) throw DomainError("toral automorphism must have determinant +-1");
      if (t->grid < 2) throw DomainError("toral grid must be at least 2");
    }
  }

  Variant variant_;
};

namespace detail {

inline long mod(long a, long n) {
  const long r = a % n;
  return r < 0 ? r + n : r;
}

using Matrix2 = std::array<std::array<Integer, 2>, 2>;

inline Matrix2 mul(const Matrix2& a, const Matrix2& b) {
  Matrix2 c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

inline Matrix2 toral_power(const ToralAutoFiber& t, std::int64_t k) {
  Matrix2 base{{{t.matrix[0][0], t.matrix[0][1]}, {t.matrix[1][0], t.matrix[1][1]}}};
  if (k < 0) {
    const long det = t.matrix[0][0] * t.matrix[1][1] - t.matrix[0][1] * t.matrix[1][0];
    base = Matrix2{{{det * t.matrix[1][1], -det * t.matrix[0][1]},
                    {-det * t.matrix[1][0], det * t.matrix[0][0]}}};
    k = -k;
  }
  Matrix2 result{{{1, 0}, {0, 1}}};
  while (k) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return result;
}

inline long circle_steps(long a, long n) {
  const long r = mod(a, n);
  return std::min(r, n - r);
}

/// Exact closed-ball test d <= eps on the circle for d = circle distance of x, y.
inline bool circle_within(const QuadNumber& x, const QuadNumber& y, const Rational& eps) {
  const QuadNumber f = (x - y).frac();
  return f <= QuadNumber(eps) || f >= QuadNumber(Rational(1) - eps);
}

}  // namespace detail

/// T^k x.
inline FiberPoint iterate(const FiberSystem& system, const FiberPoint& x, std::int64_t k) {
  return std::visit(
      [&](const auto& t) -> FiberPoint {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SymbolicFiber>) {
          return std::get<SymbolicPoint>(x).shifted(k);
        } else if constexpr (std::is_same_v<T, RotationFiber>) {
          return (std::get<QuadNumber>(x) + Rational(static_cast<long>(k)) * t.angle).frac();
        } else if constexpr (std::is_same_v<T, IdentityFiber>) {
          return std::get<std::size_t>(x);
        } else {
          const auto m = detail::toral_power(t, k);
          const auto& p = std::get<TorusPoint>(x);
          const Integer n = t.grid;
          auto reduce = [&](const Integer& z) {
            Integer r = z % n;
            if (r < 0) r += n;
            return r.convert_to<long>();
          };
          return TorusPoint{reduce(m[0][0] * p.u + m[0][1] * p.v), reduce(m[1][0] * p.u + m[1][1] * p.v)};
        }
      },
      system.variant());
}

/// d(x, y) in the fiber's own metric.
inline DistanceBound distance(const FiberSystem& system, const FiberPoint& x, const FiberPoint& y) {
  return std::visit(
      [&](const auto& t) -> DistanceBound {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SymbolicFiber>) {
          return symbolic::standard_distance(std::get<SymbolicPoint>(x), std::get<SymbolicPoint>(y));
        } else if constexpr (std::is_same_v<T, RotationFiber>) {
          const long double f = (std::get<QuadNumber>(x) - std::get<QuadNumber>(y)).frac().approx();
          return {std::min(f, 1.0L - f), true};
        } else if constexpr (std::is_same_v<T, IdentityFiber>) {
          return {t.distances.at(std::get<std::size_t>(x)).at(std::get<std::size_t>(y)), true};
        } else {
          const auto& p = std::get<TorusPoint>(x);
          const auto& q = std::get<TorusPoint>(y);
          const long steps = std::max(detail::circle_steps(p.u - q.u, t.grid),
                                      detail::circle_steps(p.v - q.v, t.grid));
          return {static_cast<long double>(steps) / static_cast<long double>(t.grid), true};
        }
      },
      system.variant());
}

/// d(x, y) <= eps, decided exactly. Throws WindowError when a truncated
/// symbolic point does not carry enough coordinates to decide.
inline bool within(const FiberSystem& system, const FiberPoint& x, const FiberPoint& y, double eps) {
  if (const auto* rot = system.get<RotationFiber>()) {
    (void)rot;
    return detail::circle_within(std::get<QuadNumber>(x), std::get<QuadNumber>(y), rational_from_double(eps));
  }
  if (const auto* t = system.get<ToralAutoFiber>()) {
    const auto& p = std::get<TorusPoint>(x);
    const auto& q = std::get<TorusPoint>(y);
    const long steps = std::max(detail::circle_steps(p.u - q.u, t->grid), detail::circle_steps(p.v - q.v, t->grid));
    return Rational(steps, t->grid) <= rational_from_double(eps);
  }
  const DistanceBound d = distance(system, x, y);
  if (d.value <= eps) return true;
  if (!d.exact) throw WindowError("truncated points: distance undetermined at this resolution");
  return false;
}

/// d^B_F(x, y) = max over i in F of d(T^i x, T^i y); must be determined exactly.
inline long double bowen_distance(const FiberSystem& system, const FiberPoint& x, const FiberPoint& y,
                                  const FiniteIntSet& f) {
  if (f.empty()) throw DomainError("bowen_distance: empty index set");
  long double best = 0;
  for (auto i : f.values()) {
    const DistanceBound d = distance(system, iterate(system, x, i), iterate(system, y, i));
    if (!d.exact) throw WindowError("bowen_distance: iterate beyond the representable window");
    best = std::max(best, d.value);
  }
  return best;
}

inline bool bowen_within(const FiberSystem& system, const FiberPoint& x, const FiberPoint& y,
                         const FiniteIntSet& f, double eps) {
  for (auto i : f.values())
    if (!within(system, iterate(system, x, i), iterate(system, y, i), eps)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Separated and spanning counts

/// Exact sep for a subshift: eps,F-close points are those agreeing on
/// F + [-rho, rho], so sep is the number of such restrictions.
inline Integer sep_exact_symbolic(const SubshiftSpec& spec, const FiniteIntSet& f, double eps,
                                  std::size_t cap = symbolic::kDefaultWordCap) {
  if (f.empty()) throw DomainError("sep_exact_symbolic: empty index set");
  if (!(eps > 0)) throw DomainError("epsilon must be positive");
  if (eps >= 2) return 1;
  const auto rho = static_cast<std::int64_t>(symbolic::window_radius(eps));
  return symbolic::language_count_on(spec, f.thickened(rho).values(), cap);
}

/// All realized cylinders on [lo, hi], as truncated points.
inline std::vector<FiberPoint> cylinder_sample(const SubshiftSpec& spec, std::int64_t lo, std::int64_t hi,
                                               std::size_t cap = symbolic::kDefaultWordCap) {
  std::vector<FiberPoint> out;
  for (auto& b : symbolic::interval_language(spec, static_cast<std::size_t>(hi - lo + 1), cap))
    out.emplace_back(SymbolicPoint(symbolic::Word{lo, std::move(b)}));
  return out;
}

inline std::vector<FiberPoint> circle_grid(std::size_t grid) {
  std::vector<FiberPoint> out;
  for (std::size_t i = 0; i < grid; ++i)
    out.emplace_back(QuadNumber(Rational(static_cast<long>(i), static_cast<long>(grid))));
  return out;
}

inline std::vector<FiberPoint> torus_grid(long grid) {
  std::vector<FiberPoint> out;
  for (long u = 0; u < grid; ++u)
    for (long v = 0; v < grid; ++v) out.emplace_back(TorusPoint{u, v});
  return out;
}

inline std::vector<FiberPoint> identity_points(const IdentityFiber& id) {
  std::vector<FiberPoint> out;
  for (std::size_t i = 0; i < id.distances.size(); ++i) out.emplace_back(i);
  return out;
}

/// Size of the eps,F-separated subset grown greedily over the sorted sample.
/// A certified lower bound on sep(T, F, eps); the result is also maximal
/// within the sample, so it is eps,F-spanning for the sample.
inline std::size_t sep_greedy(const FiberSystem& system, std::vector<FiberPoint> sample,
                              const FiniteIntSet& f, double eps, std::size_t pair_cap = kDefaultPairCap) {
  if (sample.empty()) throw DomainError("sep_greedy: empty sample");
  if (f.empty()) throw DomainError("sep_greedy: empty index set");
  std::sort(sample.begin(), sample.end());
  sample.erase(std::unique(sample.begin(), sample.end()), sample.end());

  std::vector<std::vector<FiberPoint>> orbits;
  orbits.reserve(sample.size());
  for (const auto& x : sample) {
    std::vector<FiberPoint> orbit;
    for (auto i : f.values()) orbit.push_back(iterate(system, x, i));
    orbits.push_back(std::move(orbit));
  }

  // Points at standard distance < 2 agree at the center, so symbolic
  // candidates only need comparing against chosen points with the same
  // symbols along the orbit.
  const bool symbolic_buckets = system.get<SymbolicFiber>() != nullptr && eps < 2;
  std::map<symbolic::Block, std::vector<std::size_t>> chosen;
  std::size_t count = 0;
  std::size_t pairs = 0;
  for (std::size_t c = 0; c < sample.size(); ++c) {
    symbolic::Block key;
    if (symbolic_buckets)
      for (const auto& p : orbits[c]) key.push_back(std::get<SymbolicPoint>(p).at(0));
    auto& bucket = chosen[key];
    bool separated = true;
    for (auto j : bucket) {
      if (++pairs > pair_cap) throw CapExceeded("sep_greedy exceeded the pair cap");
      bool close = true;
      for (std::size_t i = 0; i < orbits[c].size() && close; ++i)
        close = within(system, orbits[c][i], orbits[j][i], eps);
      if (close) {
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

/// Exact maximum eps-separated subset of a small finite metric space.
inline std::size_t max_separated_points(const IdentityFiber& id, double eps) {
  const std::size_t n = id.distances.size();
  if (n > 24) throw CapExceeded("identity fiber too large for exact separated count");
  std::vector<std::uint32_t> conflict(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && id.distances[i][j] <= eps) conflict[i] |= 1u << j;
  std::size_t best = 0;
  auto search = [&](auto&& self, std::size_t i, std::uint32_t taken, std::uint32_t banned, std::size_t size) -> void {
    if (size + (n - i) <= best) return;
    if (i == n) {
      best = std::max(best, size);
      return;
    }
    if (!(banned & (1u << i))) self(self, i + 1, taken | (1u << i), banned | conflict[i], size + 1);
    self(self, i + 1, taken, banned, size);
  };
  search(search, 0, 0, 0, 0);
  return best;
}

/// Separated count on the circle: ceil(1/eps) - 1 points fit with all gaps > eps.
inline Integer rotation_sep_analytic(double eps) {
  if (!(eps > 0)) throw DomainError("epsilon must be positive");
  const Rational e = rational_from_double(eps);
  if (e >= Rational(1, 2)) return 1;
  return ceil_of(Rational(1) / e) - 1;
}

/// Spanning count of the circle by closed eps-balls: ceil(1 / (2 eps)).
inline Integer rotation_spa_analytic(double eps) {
  if (!(eps > 0)) throw DomainError("epsilon must be positive");
  const Rational e = rational_from_double(eps);
  if (e >= Rational(1, 2)) return 1;
  return ceil_of(Rational(1) / (2 * e));
}

struct SpaBracket {
  Integer lower;
  Integer upper;
};

struct SpaOptions {
  std::size_t word_cap = symbolic::kDefaultWordCap;
  std::size_t pair_cap = kDefaultPairCap;
};

namespace detail {

inline Integer toral_lipschitz(const ToralAutoFiber& t, const FiniteIntSet& f) {
  Integer best = 1;
  for (auto i : f.values()) {
    const auto m = toral_power(t, i);
    for (int r = 0; r < 2; ++r) best = std::max<Integer>(best, abs(m[r][0]) + abs(m[r][1]));
  }
  return best;
}

}  // namespace detail

/// [lower, upper] containing spa(T, F, eps). Symbolic, rotation and identity
/// fibers use sep(2 eps) <= spa(eps) <= sep(eps) with exact sep; the toral
/// fiber uses a greedy grid lower bound and a Lipschitz-certified grid cover.
inline SpaBracket spa_bracket(const FiberSystem& system, const FiniteIntSet& f, double eps,
                              const SpaOptions& options = {}) {
  if (!(eps > 0)) throw DomainError("epsilon must be positive");
  if (f.empty()) throw DomainError("spa_bracket: empty index set");
  return std::visit(
      [&](const auto& t) -> SpaBracket {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, SymbolicFiber>) {
          return {sep_exact_symbolic(t.spec, f, 2 * eps, options.word_cap),
                  sep_exact_symbolic(t.spec, f, eps, options.word_cap)};
        } else if constexpr (std::is_same_v<T, RotationFiber>) {
          return {rotation_sep_analytic(2 * eps), rotation_sep_analytic(eps)};
        } else if constexpr (std::is_same_v<T, IdentityFiber>) {
          return {max_separated_points(t, 2 * eps), max_separated_points(t, eps)};
        } else {
          const auto grid = torus_grid(t.grid);
          const Integer lower = sep_greedy(system, grid, f, 2 * eps, options.pair_cap);
          const Rational slack = Rational(detail::toral_lipschitz(t, f)) / Rational(2 * t.grid);
          const Rational inner = rational_from_double(eps) - slack;
          if (inner <= 0) throw DomainError("toral grid too coarse to certify a spanning bound at this epsilon");
          const Integer upper = sep_greedy(system, grid, f, static_cast<double>(to_long_double(inner)), options.pair_cap);
          if (lower > upper) throw InconsistencyError("toral spanning bracket inverted");
          return {lower, upper};
        }
      },
      system.variant());
}

}  // namespace entroscope::fiber
