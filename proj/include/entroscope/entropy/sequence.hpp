#pragma once

// Sequence-entropy toolkit: S_A(n, m), K(A), Hamming balls, the Bernoulli
// sequence entropy used for Goodwyn checks, and Folner defects C_m(F_n) - 1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "entroscope/errors.hpp"
#include "entroscope/exact.hpp"

namespace entroscope::entropy {

struct Arithmetic {
  Integer start;
  Integer step;
};
struct Geometric {
  Integer base;
};
struct Explicit {
  std::vector<Integer> terms;
};

/// A = (t_1, t_2, ...), strictly increasing naturals. Geometric(b) is t_i = b^i.
class SequenceSpec {
 public:
  using Variant = std::variant<Arithmetic, Geometric, Explicit>;

  explicit SequenceSpec(Variant v) : v_(std::move(v)) { validate(); }
  static SequenceSpec arithmetic(Integer start, Integer step) { return SequenceSpec(Arithmetic{start, step}); }
  static SequenceSpec geometric(Integer base) { return SequenceSpec(Geometric{base}); }
  static SequenceSpec explicit_terms(std::vector<Integer> terms) { return SequenceSpec(Explicit{std::move(terms)}); }

  const Variant& variant() const { return v_; }
  template <class T>
  const T* get() const {
    return std::get_if<T>(&v_);
  }

  /// Number of available terms (unbounded generators report nullopt).
  std::optional<std::size_t> length() const {
    if (const auto* e = get<Explicit>()) return e->terms.size();
    return std::nullopt;
  }

  /// t_i for i >= 1.
  Integer term(std::size_t i) const {
    if (i == 0) throw DomainError("sequence terms are indexed from 1");
    if (const auto* a = get<Arithmetic>()) return a->start + Integer(i - 1) * a->step;
    if (const auto* g = get<Geometric>()) return ipow(g->base, i);
    const auto& t = get<Explicit>()->terms;
    if (i > t.size()) throw DomainError("explicit sequence has only " + std::to_string(t.size()) + " terms");
    return t[i - 1];
  }

  /// t_{i+1} - t_i for i = 1, ..., n-1.
  std::vector<Integer> gaps(std::size_t n) const {
    if (const auto* e = get<Explicit>(); e && n > e->terms.size())
      throw DomainError("explicit sequence has only " + std::to_string(e->terms.size()) + " terms");
    std::vector<Integer> out;
    if (n < 2) return out;
    out.reserve(n - 1);
    if (const auto* a = get<Arithmetic>()) {
      out.assign(n - 1, a->step);
    } else if (const auto* g = get<Geometric>()) {
      Integer power = g->base;  // b^i
      for (std::size_t i = 1; i < n; ++i) {
        out.push_back(power * (g->base - 1));
        power *= g->base;
      }
    } else {
      const auto& t = get<Explicit>()->terms;
      for (std::size_t i = 1; i < n; ++i) out.push_back(t[i] - t[i - 1]);
    }
    return out;
  }

 private:
  void validate() const {
    if (const auto* a = get<Arithmetic>()) {
      if (a->start < 0 || a->step < 1) throw DomainError("arithmetic sequence needs start >= 0 and step >= 1");
    } else if (const auto* g = get<Geometric>()) {
      if (g->base < 2) throw DomainError("geometric sequence needs base >= 2");
    } else {
      const auto& t = get<Explicit>()->terms;
      if (t.empty()) throw DomainError("explicit sequence is empty");
      if (t.front() < 0) throw DomainError("sequence terms must be natural numbers");
      for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] <= t[i - 1]) throw DomainError("sequence must be strictly increasing");
    }
  }

  Variant v_;
};

/// |S_A(n, m)| = |{t_i + j : i <= n, 0 <= j < m}|, exactly.
inline Integer sa_size(const SequenceSpec& a, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw DomainError("sa_size needs n, m >= 1");
  const Integer mm(m);
  Integer total = mm;
  for (const auto& g : a.gaps(n)) total += g < mm ? g : mm;
  return total;
}

/// |S_A(n, m)| for every n in [1, n_max] in one pass.
inline std::vector<Integer> sa_size_series(const SequenceSpec& a, std::size_t n_max, std::size_t m) {
  if (n_max == 0 || m == 0) throw DomainError("sa_size needs n, m >= 1");
  const Integer mm(m);
  std::vector<Integer> out;
  out.reserve(n_max);
  Integer total = mm;
  out.push_back(total);
  for (const auto& g : a.gaps(n_max)) {
    total += g < mm ? g : mm;
    out.push_back(total);
  }
  return out;
}

/// lim_n (1/n)|S_A(n, m)| where it has a closed form: min(m, d) for
/// Arithmetic(a, d) and m for Geometric (gaps eventually exceed m).
inline std::optional<Rational> sa_density_limit(const SequenceSpec& a, std::size_t m) {
  if (const auto* ar = a.get<Arithmetic>()) return Rational(ar->step < Integer(m) ? ar->step : Integer(m));
  if (a.get<Geometric>()) return Rational(Integer(m));
  return std::nullopt;
}

struct KRow {
  std::size_t m = 0;
  std::size_t n = 0;
  Rational value;                  // (1/n)|S_A(n, m)| at the largest scheduled n
  std::optional<Rational> limit;   // closed-form limit in n, when known
  Rational estimate() const { return limit ? *limit : value; }
};

struct KEstimate {
  std::vector<KRow> rows;
  bool stabilized = false;
  std::size_t m_stable = 0;
  Rational value;          // meaningful when stabilized
  bool divergent = false;  // estimates grow with m without stabilizing
  double as_double() const {
    if (!stabilized) return std::numeric_limits<double>::infinity();
    return static_cast<double>(to_long_double(value));
  }
};

/// K(A) = lim_m limsup_n (1/n)|S_A(n, m)| over a schedule. Stabilization
/// is declared at the first consecutive pair of m-values whose estimates
/// differ by < 1e-2; K is the earlier of the two. Explicit sequences are
/// truncated to their available terms.
inline KEstimate k_estimate(const SequenceSpec& a, const std::vector<std::size_t>& n_schedule,
                            const std::vector<std::size_t>& m_schedule, double tolerance = 1e-2) {
  if (n_schedule.empty() || m_schedule.empty()) throw DomainError("k_estimate: empty schedule");
  for (std::size_t i = 1; i < n_schedule.size(); ++i)
    if (n_schedule[i] <= n_schedule[i - 1]) throw DomainError("n schedule must be increasing");
  for (std::size_t i = 1; i < m_schedule.size(); ++i)
    if (m_schedule[i] <= m_schedule[i - 1]) throw DomainError("m schedule must be increasing");
  std::size_t n = n_schedule.back();
  if (const auto len = a.length()) n = std::min(n, *len);
  if (n == 0 || m_schedule.front() == 0) throw DomainError("k_estimate: n and m must be positive");

  KEstimate out;
  for (auto m : m_schedule) {
    KRow row{m, n, Rational(sa_size(a, n, m), Integer(n)), sa_density_limit(a, m)};
    if (const auto* ar = a.get<Arithmetic>()) {
      // |S_A(n, m)| = (n - 1) min(m, d) + m
      const Integer d = std::min(ar->step, Integer(m));
      if (row.value * Integer(n) != Rational(Integer(n - 1) * d + Integer(m)))
        throw InconsistencyError("S_A count disagrees with its closed form");
    }
    out.rows.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < out.rows.size() && !out.stabilized; ++i) {
    const auto d = to_long_double(out.rows[i].estimate() - out.rows[i - 1].estimate());
    if (std::fabs(static_cast<double>(d)) < tolerance) {
      out.stabilized = true;
      out.m_stable = out.rows[i - 1].m;
      out.value = out.rows[i - 1].estimate();
    }
  }
  if (!out.stabilized) {
    bool growing = out.rows.size() >= 2;
    for (std::size_t i = 1; i < out.rows.size(); ++i)
      growing = growing && out.rows[i].estimate() > out.rows[i - 1].estimate();
    out.divergent = growing;
  }
  return out;
}

/// m = 1, 2, 4, ..., up to m_max.
inline std::vector<std::size_t> doubling_schedule(std::size_t m_max) {
  std::vector<std::size_t> out;
  for (std::size_t m = 1; m <= m_max; m *= 2) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------------------
// Hamming balls

/// |B^H(u, r)| in F^n: sum over j < r n of C(n, j) (kF - 1)^j.
inline Integer hamming_ball_count(std::size_t k, std::size_t n, const Rational& r) {
  if (k < 2) throw DomainError("hamming_ball_count needs an alphabet of size >= 2");
  if (n == 0) throw DomainError("hamming_ball_count: n must be positive");
  if (r <= 0 || r >= 1) throw DomainError("hamming radius must lie in (0, 1)");
  const Integer limit = numerator_of(r) * Integer(n);  // j < r n  <=>  j * den < num * n
  const Integer den = denominator_of(r);
  Integer binom = 1, power = 1, total = 0;
  const Integer km1(k - 1);
  for (std::size_t j = 0; j <= n && Integer(j) * den < limit; ++j) {
    total += binom * power;
    binom = binom * Integer(n - j) / Integer(j + 1);
    power *= km1;
  }
  return total;
}

/// r log(kF - 1) - r log r - (1 - r) log(1 - r), natural logs. Accepts
/// 0 < r <= (kF - 1)/kF; the endpoint gives log kF.
inline double hamming_exponent(std::size_t k, double r) {
  if (k < 2) throw DomainError("hamming_exponent needs an alphabet of size >= 2");
  const double top = static_cast<double>(k - 1) / static_cast<double>(k);
  if (!(r > 0) || r > top + 1e-15) throw DomainError("hamming_exponent needs 0 < r <= (kF-1)/kF");
  return r * std::log(static_cast<double>(k - 1)) - r * std::log(r) - (1 - r) * std::log1p(-r);
}

// ---------------------------------------------------------------------------
// Bernoulli sequence entropy and Goodwyn

/// (1/n) H(xi^{t_1..t_n}) for the uniform Bernoulli measure on the full
/// k-shift with the zero-coordinate partition: distinct times are
/// independent, so H = |{t_1, ..., t_n}| log k.
inline double bernoulli_seq_entropy(std::size_t k, const SequenceSpec& a, std::size_t n) {
  if (k < 2) throw DomainError("bernoulli_seq_entropy needs k >= 2");
  if (n == 0) throw DomainError("bernoulli_seq_entropy: n must be positive");
  if (const auto len = a.length(); len && n > *len) throw DomainError("explicit sequence too short");
  // Terms are strictly increasing, hence distinct.
  return std::log(static_cast<double>(k));
}

struct GoodwynCheck {
  double lhs = 0;  // h^A_mu
  double rhs = 0;  // K(A) log k (infinite when divergent)
  bool holds = false;
};

inline GoodwynCheck goodwyn_check(std::size_t k, const SequenceSpec& a, std::size_t n, const KEstimate& k_est,
                                  double slack = 1e-9) {
  GoodwynCheck out;
  out.lhs = bernoulli_seq_entropy(k, a, n);
  out.rhs = k_est.stabilized ? k_est.as_double() * std::log(static_cast<double>(k))
                             : std::numeric_limits<double>::infinity();
  if (!k_est.stabilized && !k_est.divergent) {
    out.holds = false;  // no usable estimate
    return out;
  }
  out.holds = out.lhs <= out.rhs + slack;
  return out;
}

// ---------------------------------------------------------------------------
// Folner defect

struct FolnerRow {
  std::size_t n = 0;
  Rational defect;  // C_m(F_n) - 1
};

/// F_n = {t_1, ..., t_n}; C_m(F_n) = |F_n + {0..m-1}| / |F_n| = |S_A(n, m)| / n.
/// The interval [0, n) is Arithmetic(0, 1).
inline std::vector<FolnerRow> folner_defect(const SequenceSpec& family, std::size_t m,
                                            const std::vector<std::size_t>& ns) {
  if (ns.empty()) return {};
  const std::size_t n_max = *std::max_element(ns.begin(), ns.end());
  if (n_max == 0) throw DomainError("folner_defect: n must be positive");
  const auto series = sa_size_series(family, n_max, m);
  std::vector<FolnerRow> out;
  for (auto n : ns) {
    if (n == 0) throw DomainError("folner_defect: n must be positive");
    out.push_back({n, Rational(series[n - 1], Integer(n)) - 1});
  }
  return out;
}

}  // namespace entroscope::entropy
