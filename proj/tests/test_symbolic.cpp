#include <gtest/gtest.h>

#include <random>
#include <set>

#include "entroscope/symbolic.hpp"

using namespace entroscope;
using namespace entroscope::symbolic;

namespace {

bool legal(const Block& w, const std::vector<Block>& forbidden) {
  return detail::locally_legal(w, forbidden);
}

// Extends w by `depth` symbols to the right (or left) keeping local legality.
bool extends(Block w, std::size_t k, const std::vector<Block>& forbidden, std::size_t depth, bool right) {
  if (depth == 0) return true;
  for (std::size_t a = 0; a < k; ++a) {
    Block e = w;
    if (right)
      e.push_back(static_cast<Symbol>(a));
    else
      e.insert(e.begin(), static_cast<Symbol>(a));
    if (legal(e, forbidden) && extends(e, k, forbidden, depth - 1, right)) return true;
  }
  return false;
}

// Independent oracle: a word of length >= M - 1 is realized iff it extends
// by more than k^(M-1) symbols on each side (pigeonhole gives a cycle). Shorter
// words are projected from realized words of length M.
std::set<Block> sft_oracle(std::size_t k, const std::vector<Block>& forbidden, std::size_t length) {
  std::size_t m = 1;
  for (const auto& f : forbidden) m = std::max(m, f.size());
  const std::size_t base = std::max(length, m);
  std::size_t depth = 1;
  for (std::size_t i = 0; i + 1 < m; ++i) depth *= k;
  depth += 1;
  std::set<Block> out;
  Block w(base, 0);
  while (true) {
    if (legal(w, forbidden) && extends(w, k, forbidden, depth, true) && extends(w, k, forbidden, depth, false))
      out.insert(Block(w.begin(), w.begin() + static_cast<long>(length)));
    std::size_t i = 0;
    while (i < base && ++w[i] == k) w[i++] = 0;
    if (i == base) break;
  }
  return out;
}

}  // namespace

TEST(Language, FullShiftCounts) {
  EXPECT_EQ(enumerate_language(SubshiftSpec::full(2), 3, 0).size(), 8u);
  EXPECT_EQ(complexity(SubshiftSpec::full(3), 4), 81);
  const auto words = enumerate_language(SubshiftSpec::full(2), 2, 1);
  ASSERT_EQ(words.size(), 16u);
  EXPECT_EQ(words.front().start, -1);
  EXPECT_TRUE(std::is_sorted(words.begin(), words.end()));
}

TEST(Language, GoldenMeanFibonacci) {
  const auto g = SubshiftSpec::golden_mean();
  EXPECT_EQ(enumerate_language(g, 4, 0).size(), 8u);
  EXPECT_EQ(complexity(g, 6), 21);
  const std::vector<int> fib = {2, 3, 5, 8, 13, 21, 34, 55, 89, 144};
  for (std::size_t n = 1; n <= fib.size(); ++n) EXPECT_EQ(complexity(g, n), fib[n - 1]) << n;
}

TEST(Language, SftRealizedWordsOnly) {
  // With 01 and 11 forbidden nothing may precede a 1, so only 0^Z survives,
  // although 100 is locally legal.
  const auto spec = SubshiftSpec::sft(Alphabet(2), {{0, 1}, {1, 1}});
  EXPECT_EQ(complexity(spec, 3), 1);
  const auto words = interval_language(spec, 3, kDefaultWordCap);
  ASSERT_EQ(words.size(), 1u);
  EXPECT_EQ(words[0], (Block{0, 0, 0}));
}

TEST(Language, ForbiddenLongerThanWindow) {
  const auto spec = SubshiftSpec::sft(Alphabet(2), {{1, 0, 1}, {0, 0, 0}});
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto words = interval_language(spec, n, kDefaultWordCap);
    const auto oracle = sft_oracle(2, {{1, 0, 1}, {0, 0, 0}}, n);
    EXPECT_EQ(std::set<Block>(words.begin(), words.end()), oracle) << n;
    EXPECT_EQ(interval_count(spec, n), Integer(oracle.size())) << n;
  }
}

TEST(Language, RandomSftsMatchExtensionOracle) {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t k = 2 + rng() % 2;
    std::vector<Block> forbidden;
    const std::size_t count = 1 + rng() % 4;
    for (std::size_t j = 0; j < count; ++j) {
      Block f(1 + rng() % 3);
      for (auto& s : f) s = static_cast<Symbol>(rng() % k);
      if (f.size() == 1 && trial % 3 != 0) f.push_back(static_cast<Symbol>(rng() % k));
      forbidden.push_back(f);
    }
    const auto spec = SubshiftSpec::sft(Alphabet(k), forbidden);
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto words = interval_language(spec, n, kDefaultWordCap);
      const auto oracle = sft_oracle(k, forbidden, n);
      ASSERT_EQ(std::set<Block>(words.begin(), words.end()), oracle) << "trial " << trial << " n " << n;
      ASSERT_EQ(interval_count(spec, n), Integer(oracle.size()));
    }
  }
}

TEST(Language, HalfIntervalCodingHasComplexity2n) {
  // Two breakpoint orbits {-j a} and {1/2 - j a} never meet for irrational a,
  // so the sweep finds 2n cells; matches a floating-point sampling of orbits.
  const auto st = SubshiftSpec::sturmian(QuadNumber::golden_conjugate());
  EXPECT_EQ(enumerate_language(st, 5, 0).size(), 10u);
  EXPECT_EQ(complexity(st, 10), 20);
  for (std::size_t n = 1; n <= 30; ++n) EXPECT_EQ(complexity(st, n), Integer(2 * n)) << n;
}

TEST(Language, ClassicalSturmianComplexityEmerges) {
  const QuadNumber a = QuadNumber::golden_conjugate();
  const auto st = SubshiftSpec::sturmian(a, a);
  EXPECT_EQ(enumerate_language(st, 5, 0).size(), 6u);
  EXPECT_EQ(complexity(st, 10), 11);
  for (std::size_t n = 1; n <= 30; ++n) EXPECT_EQ(complexity(st, n), Integer(n + 1)) << n;
  EXPECT_THROW(SubshiftSpec::sturmian(a, QuadNumber(1L)), DomainError);
}

TEST(Language, SturmianWordsAreOrbitCodings) {
  const QuadNumber alpha = QuadNumber::golden_conjugate();
  const auto st = SubshiftSpec::sturmian(alpha);
  const auto words = interval_language(st, 8, kDefaultWordCap);
  const std::set<Block> language(words.begin(), words.end());
  // Coding windows of the orbit of 0 at many offsets must all be in the language.
  const Word orbit = sturmian_code(alpha, QuadNumber(0L), 0, 400);
  for (std::size_t i = 0; i + 8 <= orbit.size(); ++i) {
    Block b(orbit.symbols.begin() + static_cast<long>(i), orbit.symbols.begin() + static_cast<long>(i + 8));
    EXPECT_TRUE(language.count(b)) << i;
  }
}

TEST(Language, ClassicalSturmianWordsAreBalanced) {
  const QuadNumber a = QuadNumber::golden_conjugate();
  const auto words = interval_language(SubshiftSpec::sturmian(a, a), 12, kDefaultWordCap);
  std::set<int> ones;
  for (const auto& w : words) ones.insert(static_cast<int>(std::count(w.begin(), w.end(), Symbol{1})));
  EXPECT_LE(*ones.rbegin() - *ones.begin(), 1);
}

TEST(Language, SturmianHorizonForRationalAngles) {
  const auto st = SubshiftSpec::sturmian(QuadNumber(Rational(1, 3)));
  // Cells cut at 0, 1/6, 1/2, 2/3 for the orbit pair (x, x + 1/3).
  EXPECT_EQ(complexity(st, 2), 4);
  EXPECT_THROW(complexity(st, 3), HorizonError);
}

TEST(Language, ProductCounts) {
  const auto p = SubshiftSpec::product(SubshiftSpec::golden_mean(), SubshiftSpec::full(2));
  EXPECT_EQ(p.alphabet().size(), 4u);
  EXPECT_EQ(complexity(p, 4), 8 * 16);
  EXPECT_EQ(interval_language(p, 3, kDefaultWordCap).size(), 5u * 8u);
}

TEST(Language, CountOnArbitrarySets) {
  const auto g = SubshiftSpec::golden_mean();
  EXPECT_EQ(language_count_on(g, {0, 1, 2}), 5);
  // {0, 2}: every pair of symbols is realized at distance 2, including (1, 1).
  EXPECT_EQ(language_count_on(g, {0, 2}), 4);
  EXPECT_EQ(language_count_on(SubshiftSpec::full(3), {0, 5, 9}), 27);
}

TEST(Language, CapIsEnforced) {
  EXPECT_THROW(interval_language(SubshiftSpec::full(2), 12, 1000), CapExceeded);
}

TEST(SturmianCode, ExactEvaluation) {
  const Word w = sturmian_code(QuadNumber(Rational(1, 3)), QuadNumber(0L), 0, 2);
  const auto pm = Alphabet::plus_minus();
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(pm.value(w.symbols[0]), 1);
  EXPECT_EQ(pm.value(w.symbols[1]), 1);
  EXPECT_EQ(pm.value(w.symbols[2]), -1);
  const QuadNumber alpha = QuadNumber::golden_conjugate();
  EXPECT_EQ(pm.value(sturmian_code(alpha, QuadNumber(0L), 0, 0).symbols[0]), 1);
  const Word g = sturmian_code(alpha, QuadNumber(0L), 0, 4);
  const auto words = interval_language(SubshiftSpec::sturmian(alpha), 5, kDefaultWordCap);
  EXPECT_NE(std::find(words.begin(), words.end(), g.symbols), words.end());
}

TEST(Metric, StandardDistance) {
  const SymbolicPoint zero(Word{0, {}}, Symbol{0});
  const SymbolicPoint at3(Word{3, {1}}, Symbol{0});
  EXPECT_DOUBLE_EQ(static_cast<double>(standard_distance(zero, at3).value), 0.25);
  EXPECT_DOUBLE_EQ(static_cast<double>(standard_distance(zero.shifted(3), at3.shifted(3)).value), 2.0);
  EXPECT_DOUBLE_EQ(static_cast<double>(standard_distance(zero, zero).value), 0.0);
  const SymbolicPoint a(Word{-1, {0, 0, 0}});
  const SymbolicPoint b(Word{-1, {0, 0, 1}});
  EXPECT_DOUBLE_EQ(static_cast<double>(standard_distance(a, b).value), 1.0);
  const auto partial = standard_distance(a, a);
  EXPECT_FALSE(partial.exact);
  EXPECT_DOUBLE_EQ(static_cast<double>(partial.value), 0.5);
  EXPECT_THROW(a.at(5), WindowError);
}

TEST(Metric, WindowRadius) {
  EXPECT_EQ(window_radius(1.5), 0u);
  EXPECT_EQ(window_radius(1.0), 0u);
  EXPECT_EQ(window_radius(0.6), 1u);
  EXPECT_EQ(window_radius(0.5), 1u);
  EXPECT_EQ(window_radius(0.3), 2u);
  EXPECT_EQ(window_radius(0.25), 2u);
  EXPECT_EQ(window_radius(0.15), 3u);
  EXPECT_THROW(window_radius(0), DomainError);
}

TEST(Alphabet, ParseAndFormat) {
  const Alphabet two(2);
  EXPECT_EQ(two.parse("0110"), (Block{0, 1, 1, 0}));
  EXPECT_EQ(two.format(Block{1, 0}), "10");
  const auto pm = Alphabet::plus_minus();
  EXPECT_EQ(pm.parse("-1,1,1"), (Block{0, 1, 1}));
  EXPECT_EQ(pm.format(Block{0, 1}), "-1,1");
  EXPECT_EQ(pm.parse("-1"), (Block{0}));
  EXPECT_THROW(two.parse("012"), DomainError);
  EXPECT_THROW(Alphabet(1), DomainError);
  EXPECT_THROW(SubshiftSpec::sft(Alphabet(2), {{2}}), DomainError);
}
