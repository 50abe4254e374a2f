#pragma once

// Scales a_n(t) for slow entropy: e^{nt}, n^t, and the word-sum scales
// a_n(t) = sum_w e^{t q_n(w)} and c_n(t) = sum_w b_{r_n(w)}(t) over a
// cocycle's base language. Evaluated in the log domain; exact big-rational
// evaluation when e^t is rational (or t is a nonnegative integer for n^t).

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "entroscope/cocycle.hpp"
#include "entroscope/exact.hpp"
#include "entroscope/symbolic.hpp"

namespace entroscope::entropy {

using cocycle::Cocycle;
using symbolic::SubshiftSpec;

enum class ScaleKind { Exponential, Polynomial, PaperA, PaperC };

inline std::string to_string(ScaleKind k) {
  switch (k) {
    case ScaleKind::Exponential: return "exponential";
    case ScaleKind::Polynomial: return "polynomial";
    case ScaleKind::PaperA: return "paper-a";
    case ScaleKind::PaperC: return "paper-c";
  }
  return "?";
}

inline ScaleKind scale_kind_from_string(const std::string& s) {
  if (s == "exponential") return ScaleKind::Exponential;
  if (s == "polynomial") return ScaleKind::Polynomial;
  if (s == "paper-a") return ScaleKind::PaperA;
  if (s == "paper-c") return ScaleKind::PaperC;
  throw DomainError("unknown scale '" + s + "'");
}

struct Scale {
  ScaleKind kind = ScaleKind::Exponential;
  std::shared_ptr<const SubshiftSpec> base;  // PaperA / PaperC
  std::shared_ptr<const Cocycle> tau;        // PaperA / PaperC
  std::shared_ptr<const Scale> inner;        // PaperC

  static Scale exponential() { return {ScaleKind::Exponential, nullptr, nullptr, nullptr}; }
  static Scale polynomial() { return {ScaleKind::Polynomial, nullptr, nullptr, nullptr}; }
  static Scale paper_a(SubshiftSpec base, Cocycle tau) {
    return {ScaleKind::PaperA, std::make_shared<const SubshiftSpec>(std::move(base)),
            std::make_shared<const Cocycle>(std::move(tau)), nullptr};
  }
  static Scale paper_c(SubshiftSpec base, Cocycle tau, Scale inner) {
    if (inner.kind == ScaleKind::PaperA || inner.kind == ScaleKind::PaperC)
      throw DomainError("paper-c inner scale must be exponential or polynomial");
    return {ScaleKind::PaperC, std::make_shared<const SubshiftSpec>(std::move(base)),
            std::make_shared<const Cocycle>(std::move(tau)), std::make_shared<const Scale>(std::move(inner))};
  }

  std::string name() const {
    if (kind == ScaleKind::PaperC) return "paper-c(" + inner->name() + ")";
    return to_string(kind);
  }
};

/// Words of L_{n,s} by (r_n(w), q_n(w)); q is always an integer since
/// r * C_m(F) = |F + {0, ..., m-1}|.
using ClassTable = std::map<std::pair<std::size_t, Rational>, Integer>;

/// Evaluates a scale with the per-n word classes cached.
class ScaleEvaluator {
 public:
  explicit ScaleEvaluator(Scale scale, std::size_t word_cap = symbolic::kDefaultWordCap)
      : scale_(std::move(scale)), cap_(word_cap) {
    if ((scale_.kind == ScaleKind::PaperA || scale_.kind == ScaleKind::PaperC) && (!scale_.base || !scale_.tau))
      throw DomainError("word-sum scales need a base subshift and cocycle");
  }

  const Scale& scale() const { return scale_; }

  /// log a_n(t).
  long double log_value(std::size_t n, double t) {
    check(n, t);
    switch (scale_.kind) {
      case ScaleKind::Exponential: return static_cast<long double>(n) * t;
      case ScaleKind::Polynomial: return static_cast<long double>(t) * std::log(static_cast<long double>(n));
      case ScaleKind::PaperA: {
        LogSumExp acc;
        for (const auto& [key, count] : classes(n)) acc.add(log_of(count) + t * to_long_double(key.second));
        return acc.value();
      }
      case ScaleKind::PaperC: {
        ScaleEvaluator inner(*scale_.inner, cap_);
        LogSumExp acc;
        for (const auto& [r, count] : ranges(n)) acc.add(log_of(count) + inner.log_value(r, t));
        return acc.value();
      }
    }
    return 0;
  }

  long double value(std::size_t n, double t) { return std::exp(log_value(n, t)); }

  /// Exact a_n(t) with e^t = exp_t (Exponential, PaperA, PaperC over an
  /// exponential inner scale) or integer t = power (Polynomial, PaperC over a
  /// polynomial inner scale).
  Rational exact_value(std::size_t n, const std::optional<Rational>& exp_t, const std::optional<unsigned>& power) {
    if (n == 0) throw DomainError("scale: n must be positive");
    const auto need_exp = [&] {
      if (!exp_t || *exp_t <= 1) throw DomainError("exact evaluation needs e^t > 1 as a rational");
      return *exp_t;
    };
    const auto need_power = [&] {
      if (!power) throw DomainError("exact polynomial evaluation needs an integer t");
      return *power;
    };
    switch (scale_.kind) {
      case ScaleKind::Exponential: return rpow(need_exp(), n);
      case ScaleKind::Polynomial: return Rational(ipow(Integer(n), need_power()));
      case ScaleKind::PaperA: {
        const Rational b = need_exp();
        Rational sum = 0;
        for (const auto& [key, count] : classes(n)) {
          if (denominator_of(key.second) != 1) throw InconsistencyError("non-integer q in PaperA class");
          sum += Rational(count) * rpow(b, numerator_of(key.second).convert_to<std::uint64_t>());
        }
        return sum;
      }
      case ScaleKind::PaperC: {
        ScaleEvaluator inner(*scale_.inner, cap_);
        Rational sum = 0;
        for (const auto& [r, count] : ranges(n)) sum += Rational(count) * inner.exact_value(r, exp_t, power);
        return sum;
      }
    }
    return 0;
  }

  const ClassTable& classes(std::size_t n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(n);
    if (it == cache_.end()) it = cache_.emplace(n, cocycle::profile_classes(*scale_.base, *scale_.tau, n, cap_)).first;
    return it->second;
  }

  std::map<std::size_t, Integer> ranges(std::size_t n) {
    std::map<std::size_t, Integer> out;
    for (const auto& [key, count] : classes(n)) out[key.first] += count;
    return out;
  }

 private:
  static void check(std::size_t n, double t) {
    if (n == 0) throw DomainError("scale: n must be positive");
    if (!(t > 0)) throw DomainError("scale: t must be positive");
  }

  Scale scale_;
  std::size_t cap_;
  std::mutex mutex_;
  std::map<std::size_t, ClassTable> cache_;
};

/// a_n(t) as a floating value (may overflow to infinity for huge n t).
inline long double scale_eval(const Scale& scale, std::size_t n, double t,
                              std::size_t word_cap = symbolic::kDefaultWordCap) {
  ScaleEvaluator ev(scale, word_cap);
  return ev.value(n, t);
}

inline Rational scale_eval_exact(const Scale& scale, std::size_t n, const std::optional<Rational>& exp_t,
                                 const std::optional<unsigned>& power = std::nullopt,
                                 std::size_t word_cap = symbolic::kDefaultWordCap) {
  ScaleEvaluator ev(scale, word_cap);
  return ev.exact_value(n, exp_t, power);
}

}  // namespace entroscope::entropy
