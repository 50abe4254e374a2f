#pragma once

// Subshift descriptions, exact language enumeration, and the standard
// subshift metric.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "entroscope/errors.hpp"
#include "entroscope/exact.hpp"

namespace entroscope::symbolic {

using Symbol = std::uint16_t;
using Block = std::vector<Symbol>;

/// Word-count budget shared by all enumerations (2^20).
inline constexpr std::size_t kDefaultWordCap = std::size_t{1} << 20;

class Alphabet {
 public:
  explicit Alphabet(std::size_t size, std::optional<std::vector<long>> labels = std::nullopt)
      : size_(size), labels_(std::move(labels)) {
    if (size_ < 2) throw DomainError("alphabet must have at least 2 symbols");
    if (labels_) {
      if (labels_->size() != size_) throw DomainError("alphabet labels must match its size");
      auto sorted = *labels_;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DomainError("alphabet labels must be distinct");
    }
  }

  /// {-1, +1}, index 0 is -1.
  static Alphabet plus_minus() { return Alphabet(2, std::vector<long>{-1, 1}); }

  std::size_t size() const { return size_; }
  const std::optional<std::vector<long>>& labels() const { return labels_; }

  /// Integer value carried by a symbol: its label, or its index when unlabeled.
  long value(Symbol s) const { return labels_ ? (*labels_)[s] : static_cast<long>(s); }

  std::string name(Symbol s) const { return std::to_string(value(s)); }

  Symbol parse_symbol(const std::string& token) const {
    long v = 0;
    try {
      std::size_t used = 0;
      v = std::stol(token, &used);
      if (used != token.size()) throw DomainError("");
    } catch (const std::exception&) {
      throw DomainError("bad symbol '" + token + "'");
    }
    for (std::size_t i = 0; i < size_; ++i)
      if (value(static_cast<Symbol>(i)) == v) return static_cast<Symbol>(i);
    throw DomainError("symbol '" + token + "' not in alphabet");
  }

  /// Single-character names concatenate; anything else is comma separated.
  std::string format(std::span<const Symbol> word) const {
    bool compact = true;
    for (std::size_t i = 0; i < size_; ++i)
      if (name(static_cast<Symbol>(i)).size() != 1) compact = false;
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (!compact && i) out.push_back(',');
      out += name(word[i]);
    }
    return out;
  }

  Block parse(const std::string& text) const {
    Block out;
    if (text.find(',') != std::string::npos) {
      std::size_t pos = 0;
      while (pos <= text.size()) {
        const auto next = std::min(text.find(',', pos), text.size());
        out.push_back(parse_symbol(text.substr(pos, next - pos)));
        pos = next + 1;
      }
      return out;
    }
    for (std::size_t i = 0; i < size_; ++i)
      if (name(static_cast<Symbol>(i)) == text) return {static_cast<Symbol>(i)};
    for (char c : text) out.push_back(parse_symbol(std::string(1, c)));
    return out;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
  std::optional<std::vector<long>> labels_;
};

/// A finite pattern supported on [start, start + size()).
struct Word {
  std::int64_t start = 0;
  Block symbols;

  std::size_t size() const { return symbols.size(); }
  std::int64_t end() const { return start + static_cast<std::int64_t>(symbols.size()); }
  Symbol at(std::int64_t i) const {
    if (i < start || i >= end()) throw WindowError("word index out of support");
    return symbols[static_cast<std::size_t>(i - start)];
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    if (auto c = a.start <=> b.start; c != 0) return c;
    return a.symbols <=> b.symbols;
  }
};

class SubshiftSpec;

struct FullShift {
  Alphabet alphabet;
};

struct Sft {
  Alphabet alphabet;
  std::vector<Block> forbidden;
};

/// Closure of the codings of x -> x + alpha by [0, beta) -> +1, [beta, 1) -> -1.
/// beta = 1/2 is the shift of type (1/2, alpha); beta = alpha gives the
/// classical Sturmian shift of complexity n + 1.
struct Sturmian {
  QuadNumber alpha;
  QuadNumber coding_length{Rational(1, 2)};
};

struct Product {
  std::shared_ptr<const SubshiftSpec> left;
  std::shared_ptr<const SubshiftSpec> right;
};

class SubshiftSpec {
 public:
  using Variant = std::variant<FullShift, Sft, Sturmian, Product>;

  SubshiftSpec(Variant v) : variant_(std::move(v)) { validate(); }  // NOLINT

  static SubshiftSpec full(std::size_t k) { return SubshiftSpec(FullShift{Alphabet(k)}); }
  static SubshiftSpec full(Alphabet a) { return SubshiftSpec(FullShift{std::move(a)}); }
  static SubshiftSpec sft(Alphabet a, std::vector<Block> forbidden) {
    return SubshiftSpec(Sft{std::move(a), std::move(forbidden)});
  }
  static SubshiftSpec sturmian(QuadNumber alpha, QuadNumber coding_length = QuadNumber(Rational(1, 2))) {
    return SubshiftSpec(Sturmian{std::move(alpha), std::move(coding_length)});
  }
  static SubshiftSpec product(SubshiftSpec left, SubshiftSpec right) {
    return SubshiftSpec(Product{std::make_shared<const SubshiftSpec>(std::move(left)),
                                std::make_shared<const SubshiftSpec>(std::move(right))});
  }
  /// Binary shift forbidding "11".
  static SubshiftSpec golden_mean() { return sft(Alphabet(2), {{1, 1}}); }

  const Variant& variant() const { return variant_; }
  template <class T>
  const T* get() const {
    return std::get_if<T>(&variant_);
  }

  Alphabet alphabet() const {
    return std::visit(
        [](const auto& v) -> Alphabet {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Sturmian>) {
            return Alphabet::plus_minus();
          } else if constexpr (std::is_same_v<T, Product>) {
            return Alphabet(v.left->alphabet().size() * v.right->alphabet().size());
          } else {
            return v.alphabet;
          }
        },
        variant_);
  }

  std::string kind() const {
    static const char* names[] = {"full", "sft", "sturmian", "product"};
    return names[variant_.index()];
  }

 private:
  void validate() const {
    if (const auto* sft = get<Sft>()) {
      for (const auto& f : sft->forbidden) {
        if (f.empty()) throw DomainError("SFT forbidden words must be nonempty");
        for (Symbol s : f)
          if (s >= sft->alphabet.size()) throw DomainError("forbidden word uses unknown symbol");
      }
    }
    if (const auto* st = get<Sturmian>()) {
      if (!(st->coding_length > QuadNumber(0L)) || !(st->coding_length < QuadNumber(1L)))
        throw DomainError("Sturmian coding length must lie in (0, 1)");
    }
    if (const auto* p = get<Product>()) {
      if (!p->left || !p->right) throw DomainError("product needs two factors");
    }
  }

  Variant variant_;
};

// ---------------------------------------------------------------------------
// SFT block graph

namespace detail {

inline bool contains_factor(std::span<const Symbol> word, const Block& f) {
  if (f.size() > word.size()) return false;
  return std::search(word.begin(), word.end(), f.begin(), f.end()) != word.end();
}

inline bool locally_legal(std::span<const Symbol> word, const std::vector<Block>& forbidden) {
  return std::none_of(forbidden.begin(), forbidden.end(),
                      [&](const Block& f) { return contains_factor(word, f); });
}

/// Higher-block presentation of an SFT restricted to its essential part:
/// every vertex lies on a bi-infinite path, so every path is a realized word.
struct BlockGraph {
  std::size_t block = 1;
  std::vector<Block> vertices;                        // lexicographic
  std::vector<std::vector<std::size_t>> successors;   // ordered by appended symbol

  static BlockGraph build(const Sft& sft) {
    const std::size_t k = sft.alphabet.size();
    std::size_t longest = 1;
    for (const auto& f : sft.forbidden) longest = std::max(longest, f.size());
    BlockGraph g;
    g.block = std::max<std::size_t>(longest - 1, 1);

    std::vector<Block> blocks;
    Block cur(g.block, 0);
    while (true) {
      if (locally_legal(cur, sft.forbidden)) blocks.push_back(cur);
      std::size_t i = g.block;
      while (i > 0 && cur[i - 1] + 1u == k) cur[--i] = 0;
      if (i == 0) break;
      ++cur[i - 1];
    }
    std::map<Block, std::size_t> index;
    for (std::size_t i = 0; i < blocks.size(); ++i) index[blocks[i]] = i;

    std::vector<std::vector<std::size_t>> succ(blocks.size());
    for (std::size_t u = 0; u < blocks.size(); ++u) {
      Block ext = blocks[u];
      ext.push_back(0);
      for (std::size_t a = 0; a < k; ++a) {
        ext.back() = static_cast<Symbol>(a);
        if (!locally_legal(ext, sft.forbidden)) continue;
        Block tail(ext.begin() + 1, ext.end());
        if (auto it = index.find(tail); it != index.end()) succ[u].push_back(it->second);
      }
    }

    // Prune to the essential subgraph.
    std::vector<bool> alive(blocks.size(), true);
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::size_t> indeg(blocks.size(), 0), outdeg(blocks.size(), 0);
      for (std::size_t u = 0; u < blocks.size(); ++u) {
        if (!alive[u]) continue;
        for (auto v : succ[u])
          if (alive[v]) {
            ++outdeg[u];
            ++indeg[v];
          }
      }
      for (std::size_t u = 0; u < blocks.size(); ++u)
        if (alive[u] && (indeg[u] == 0 || outdeg[u] == 0)) {
          alive[u] = false;
          changed = true;
        }
    }
    std::vector<std::size_t> remap(blocks.size(), SIZE_MAX);
    for (std::size_t u = 0; u < blocks.size(); ++u)
      if (alive[u]) {
        remap[u] = g.vertices.size();
        g.vertices.push_back(blocks[u]);
      }
    g.successors.resize(g.vertices.size());
    for (std::size_t u = 0; u < blocks.size(); ++u) {
      if (!alive[u]) continue;
      for (auto v : succ[u])
        if (alive[v]) g.successors[remap[u]].push_back(remap[v]);
    }
    return g;
  }

  Integer count_words(std::size_t length) const {
    if (vertices.empty() || length == 0) return vertices.empty() ? 0 : 1;
    if (length < block) {
      std::vector<Block> prefixes;
      for (const auto& v : vertices) prefixes.emplace_back(v.begin(), v.begin() + static_cast<long>(length));
      std::sort(prefixes.begin(), prefixes.end());
      prefixes.erase(std::unique(prefixes.begin(), prefixes.end()), prefixes.end());
      return prefixes.size();
    }
    std::vector<Integer> paths(vertices.size(), 1);
    for (std::size_t step = block; step < length; ++step) {
      std::vector<Integer> next(vertices.size(), 0);
      for (std::size_t u = 0; u < vertices.size(); ++u)
        for (auto v : successors[u]) next[u] += paths[v];
      paths = std::move(next);
    }
    Integer total = 0;
    for (const auto& p : paths) total += p;
    return total;
  }

  std::vector<Block> words(std::size_t length, std::size_t cap) const {
    std::vector<Block> out;
    if (vertices.empty()) return out;
    if (length < block) {
      for (const auto& v : vertices) out.emplace_back(v.begin(), v.begin() + static_cast<long>(length));
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      if (out.size() > cap) throw CapExceeded("SFT language exceeds word cap");
      return out;
    }
    Block cur;
    auto dfs = [&](auto&& self, std::size_t v) -> void {
      if (cur.size() == length) {
        if (out.size() >= cap) throw CapExceeded("SFT language exceeds word cap");
        out.push_back(cur);
        return;
      }
      for (auto w : successors[v]) {
        cur.push_back(vertices[w].back());
        self(self, w);
        cur.pop_back();
      }
    };
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      cur = vertices[v];
      dfs(dfs, v);
    }
    return out;
  }
};

inline void check_sturmian_horizon(const QuadNumber& alpha, std::size_t length, bool strict) {
  if (!alpha.is_rational()) return;
  const Integer q = denominator_of(alpha.rational_part());
  const bool ok = strict ? Integer(length) < q : Integer(length) <= q;
  if (!ok)
    throw HorizonError("rational Sturmian approximant with denominator " + q.str() +
                       " is not valid for windows of length " + std::to_string(length));
}

inline Symbol sturmian_symbol(const QuadNumber& point, const QuadNumber& beta) {
  return point.frac() < beta ? Symbol{1} : Symbol{0};
}

/// All codings of length L of the rotation, by sweeping the exact breakpoints
/// {-j alpha, beta - j alpha} mod 1; the coding is constant on each half-open cell.
inline std::vector<Block> sturmian_words(const Sturmian& st, std::size_t length) {
  check_sturmian_horizon(st.alpha, length, /*strict=*/true);
  if (length == 0) return {Block{}};
  struct Breakpoint {
    QuadNumber at;
    std::size_t index;
    Symbol becomes;
  };
  std::vector<Breakpoint> cuts;
  cuts.reserve(2 * length);
  for (std::size_t j = 0; j < length; ++j) {
    const QuadNumber shift = Rational(static_cast<long>(j)) * st.alpha;
    cuts.push_back({(-shift).frac(), j, 1});
    cuts.push_back({(st.coding_length - shift).frac(), j, 0});
  }
  std::sort(cuts.begin(), cuts.end(), [](const Breakpoint& a, const Breakpoint& b) {
    return a.at < b.at;
  });

  Block cur(length);
  for (std::size_t j = 0; j < length; ++j)
    cur[j] = sturmian_symbol(Rational(static_cast<long>(j)) * st.alpha, st.coding_length);

  std::vector<Block> out;
  out.push_back(cur);
  std::size_t i = 0;
  const QuadNumber zero(0L);
  while (i < cuts.size() && cuts[i].at == zero) ++i;
  while (i < cuts.size()) {
    const QuadNumber& at = cuts[i].at;
    std::size_t j = i;
    while (j < cuts.size() && cuts[j].at == at) {
      cur[cuts[j].index] = cuts[j].becomes;
      ++j;
    }
    out.push_back(cur);
    i = j;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Languages

/// Realized words of the given length (the language on any interval of that
/// length), in lexicographic order of symbol indices.
inline std::vector<Block> interval_language(const SubshiftSpec& spec, std::size_t length,
                                            std::size_t cap = kDefaultWordCap) {
  return std::visit(
      [&](const auto& v) -> std::vector<Block> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FullShift>) {
          const std::size_t k = v.alphabet.size();
          if (Integer(k) > 0 && ipow(Integer(k), length) > Integer(cap))
            throw CapExceeded("full-shift language exceeds word cap");
          std::vector<Block> out;
          Block cur(length, 0);
          while (true) {
            out.push_back(cur);
            std::size_t i = length;
            while (i > 0 && cur[i - 1] + 1u == k) cur[--i] = 0;
            if (i == 0) break;
            ++cur[i - 1];
          }
          return out;
        } else if constexpr (std::is_same_v<T, Sft>) {
          return detail::BlockGraph::build(v).words(length, cap);
        } else if constexpr (std::is_same_v<T, Sturmian>) {
          auto out = detail::sturmian_words(v, length);
          if (out.size() > cap) throw CapExceeded("Sturmian language exceeds word cap");
          return out;
        } else {
          const auto left = interval_language(*v.left, length, cap);
          const auto right = interval_language(*v.right, length, cap);
          if (Integer(left.size()) * right.size() > Integer(cap))
            throw CapExceeded("product language exceeds word cap");
          const std::size_t k2 = v.right->alphabet().size();
          std::vector<Block> out;
          out.reserve(left.size() * right.size());
          for (const auto& a : left)
            for (const auto& b : right) {
              Block w(length);
              for (std::size_t i = 0; i < length; ++i)
                w[i] = static_cast<Symbol>(a[i] * k2 + b[i]);
              out.push_back(std::move(w));
            }
          std::sort(out.begin(), out.end());
          return out;
        }
      },
      spec.variant());
}

/// Number of realized words of the given length. Full shifts and SFTs use
/// closed forms / transfer-matrix counting; Sturmian shifts are enumerated.
inline Integer interval_count(const SubshiftSpec& spec, std::size_t length) {
  return std::visit(
      [&](const auto& v) -> Integer {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FullShift>) {
          return ipow(Integer(v.alphabet.size()), length);
        } else if constexpr (std::is_same_v<T, Sft>) {
          return detail::BlockGraph::build(v).count_words(length);
        } else if constexpr (std::is_same_v<T, Sturmian>) {
          return detail::sturmian_words(v, length).size();
        } else {
          return interval_count(*v.left, length) * interval_count(*v.right, length);
        }
      },
      spec.variant());
}

/// L_{n,s}: realized words supported on [-s, n+s-1].
inline std::vector<Word> enumerate_language(const SubshiftSpec& spec, std::size_t n,
                                            std::size_t s, std::size_t cap = kDefaultWordCap) {
  if (n == 0) throw DomainError("enumerate_language: n must be positive");
  auto blocks = interval_language(spec, n + 2 * s, cap);
  std::vector<Word> out;
  out.reserve(blocks.size());
  for (auto& b : blocks) out.push_back(Word{-static_cast<std::int64_t>(s), std::move(b)});
  return out;
}

/// |L_n|.
inline Integer complexity(const SubshiftSpec& spec, std::size_t n) {
  if (n == 0) throw DomainError("complexity: n must be positive");
  return interval_count(spec, n);
}

/// |L_G| for an arbitrary finite index set G (sorted, distinct).
inline Integer language_count_on(const SubshiftSpec& spec, const std::vector<std::int64_t>& set,
                                 std::size_t cap = kDefaultWordCap) {
  if (set.empty()) return 1;
  const auto lo = set.front(), hi = set.back();
  const auto hull = static_cast<std::size_t>(hi - lo + 1);
  if (hull == set.size()) return interval_count(spec, hull);
  if (const auto* full = spec.get<FullShift>()) return ipow(Integer(full->alphabet.size()), set.size());
  if (const auto* p = spec.get<Product>())
    return language_count_on(*p->left, set, cap) * language_count_on(*p->right, set, cap);
  auto words = interval_language(spec, hull, cap);
  std::vector<Block> projected;
  projected.reserve(words.size());
  for (const auto& w : words) {
    Block b;
    b.reserve(set.size());
    for (auto i : set) b.push_back(w[static_cast<std::size_t>(i - lo)]);
    projected.push_back(std::move(b));
  }
  std::sort(projected.begin(), projected.end());
  projected.erase(std::unique(projected.begin(), projected.end()), projected.end());
  return projected.size();
}

/// Coding of the orbit of x0 on the index interval [lo, hi]: +1 where
/// frac(x0 + n alpha) lies in [0, beta). Uses symbol indices (1 is +1).
inline Word sturmian_code(const QuadNumber& alpha, const QuadNumber& x0, std::int64_t lo,
                          std::int64_t hi, const QuadNumber& beta = QuadNumber(Rational(1, 2))) {
  if (hi < lo) throw DomainError("sturmian_code: empty range");
  detail::check_sturmian_horizon(alpha, static_cast<std::size_t>(hi - lo + 1), /*strict=*/false);
  Word w{lo, {}};
  for (auto n = lo; n <= hi; ++n)
    w.symbols.push_back(detail::sturmian_symbol(x0 + Rational(static_cast<long>(n)) * alpha, beta));
  return w;
}

// ---------------------------------------------------------------------------
// Points and the standard metric

/// A point of A^Z known on a finite window, optionally extended by a constant
/// background symbol. Reading an unknown coordinate is an error.
class SymbolicPoint {
 public:
  SymbolicPoint(Word window, std::optional<Symbol> background = std::nullopt)  // NOLINT
      : window_(std::move(window)), background_(background) {}

  bool defined(std::int64_t i) const {
    return background_ || (i >= window_.start && i < window_.end());
  }
  Symbol at(std::int64_t i) const {
    if (i >= window_.start && i < window_.end()) return window_.at(i);
    if (background_) return *background_;
    throw WindowError("symbolic point evaluated outside its window at index " + std::to_string(i));
  }
  /// S^k: (S^k x)(i) = x(i + k).
  SymbolicPoint shifted(std::int64_t k) const {
    Word w = window_;
    w.start -= k;
    return {std::move(w), background_};
  }
  const Word& window() const { return window_; }
  const std::optional<Symbol>& background() const { return background_; }

  friend bool operator==(const SymbolicPoint&, const SymbolicPoint&) = default;
  friend auto operator<=>(const SymbolicPoint& a, const SymbolicPoint& b) {
    if (auto c = a.window_ <=> b.window_; c != 0) return c;
    return a.background_ <=> b.background_;
  }

 private:
  Word window_;
  std::optional<Symbol> background_;
};

/// A value of the standard metric, or an upper bound when the windows ran out
/// before a disagreement was found.
struct DistanceBound {
  long double value = 0;
  bool exact = true;
};

/// d(x, y) = inf({2^-n : x(i) = y(i) for |i| <= n} u {2}), evaluated at
/// coordinates relative to `center` in both points.
inline DistanceBound standard_distance(const SymbolicPoint& x, std::int64_t x_center,
                                       const SymbolicPoint& y, std::int64_t y_center) {
  if (x.at(x_center) != y.at(y_center)) return {2.0L, true};
  const auto extent = [](const SymbolicPoint& p, std::int64_t c) {
    return std::max(c - p.window().start, p.window().end() - c) + 1;
  };
  const std::int64_t limit = std::max(extent(x, x_center), extent(y, y_center));
  for (std::int64_t r = 1; r <= limit; ++r) {
    const bool known = x.defined(x_center - r) && x.defined(x_center + r) &&
                       y.defined(y_center - r) && y.defined(y_center + r);
    if (!known) return {std::ldexp(1.0L, -static_cast<int>(r - 1)), false};
    if (x.at(x_center - r) != y.at(y_center - r) || x.at(x_center + r) != y.at(y_center + r))
      return {std::ldexp(1.0L, -static_cast<int>(r - 1)), true};
  }
  // Both points are fully specified and agree everywhere.
  return {0.0L, true};
}

inline DistanceBound standard_distance(const SymbolicPoint& x, const SymbolicPoint& y) {
  return standard_distance(x, 0, y, 0);
}

/// Smallest R >= 0 with 2^-R <= eps (for eps <= 1), and 0 for eps in (1, 2):
/// two points are eps-close iff they agree on [-R, R].
inline std::size_t window_radius(double eps) {
  if (!(eps > 0)) throw DomainError("epsilon must be positive");
  if (eps > 1) return 0;
  std::size_t r = 0;
  while (std::ldexp(1.0, -static_cast<int>(r)) > eps) ++r;
  return r;
}

}  // namespace entroscope::symbolic
