#include <gtest/gtest.h>

#include <random>

#include "entroscope/skew.hpp"

using namespace entroscope;
using namespace entroscope::skew;
using symbolic::Alphabet;
using symbolic::Symbol;

namespace {

const Alphabet kPm = Alphabet::plus_minus();

SkewSystem tt_inverse() {
  return {SubshiftSpec::full(kPm), Cocycle::coordinate(kPm), FiberSystem::symbolic(SubshiftSpec::full(2))};
}

SkewSystem golden_base() {
  return {SubshiftSpec::sft(kPm, {{1, 1}}), Cocycle::coordinate(kPm), FiberSystem::symbolic(SubshiftSpec::full(2))};
}

// tau(y) = y(0) written as a radius-1 rule, which defeats every fast path.
Cocycle coordinate_radius1() {
  std::map<Block, long> rule;
  for (Symbol a = 0; a < 2; ++a)
    for (Symbol b = 0; b < 2; ++b)
      for (Symbol c = 0; c < 2; ++c) rule[{a, b, c}] = kPm.value(b);
  return {2, 1, rule};
}

// tau(y) = y(-1) * y(1) on +-1.
Cocycle product_neighbours() {
  std::map<Block, long> rule;
  for (Symbol a = 0; a < 2; ++a)
    for (Symbol b = 0; b < 2; ++b)
      for (Symbol c = 0; c < 2; ++c) rule[{a, b, c}] = kPm.value(a) * kPm.value(c);
  return {2, 1, rule};
}

SymbolicPoint pm_point(std::initializer_list<int> values, std::int64_t start = 0) {
  Word w{start, {}};
  for (int v : values) w.symbols.push_back(v > 0 ? 1 : 0);
  return SymbolicPoint(w);
}

}  // namespace

TEST(Orbit, Examples) {
  const SkewSystem zero{SubshiftSpec::full(kPm), Cocycle::constant(2, 0), FiberSystem::symbolic(SubshiftSpec::full(2))};
  const FiberPoint x = SymbolicPoint(Word{-2, {0, 1, 1, 0, 1}}, Symbol{0});
  for (const auto& st : skew_orbit(zero, pm_point({1, -1, 1, 1}), x, 4)) EXPECT_EQ(st.fiber, x);

  const SkewSystem rot{SubshiftSpec::full(kPm), Cocycle::coordinate(kPm),
                       FiberSystem::rotation(QuadNumber::golden_conjugate())};
  const auto orbit = skew_orbit(rot, pm_point({1, 1, 1}), QuadNumber(0L), 3);
  const QuadNumber a = QuadNumber::golden_conjugate();
  EXPECT_EQ(std::get<QuadNumber>(orbit[0].fiber), QuadNumber(0L));
  EXPECT_EQ(std::get<QuadNumber>(orbit[1].fiber), a);
  EXPECT_EQ(std::get<QuadNumber>(orbit[2].fiber), (Rational(2) * a).frac());

  const auto walk = skew_orbit(tt_inverse(), pm_point({1, -1, 1}), SymbolicPoint(Word{0, {}}, Symbol{0}), 3);
  EXPECT_EQ(walk[0].exponent, 0);
  EXPECT_EQ(walk[1].exponent, 1);
  EXPECT_EQ(walk[2].exponent, 0);
  EXPECT_THROW(skew_orbit(tt_inverse(), pm_point({1}), SymbolicPoint(Word{0, {}}, Symbol{0}), 3), WindowError);
}

TEST(Orbit, ExponentsMatchCocycleProfile) {
  std::mt19937 rng(4);
  const auto tau = product_neighbours();
  for (int trial = 0; trial < 30; ++trial) {
    Word w{-1, Block(10)};
    for (auto& s : w.symbols) s = static_cast<Symbol>(rng() % 2);
    EXPECT_EQ(exponents(tau, SymbolicPoint(w), 8), cocycle::cocycle_profile(tau, w).partial_sums);
  }
}

TEST(Bowen, TrivialCases) {
  const auto sys = tt_inverse();
  const SkewPoint p{SymbolicPoint(Word{0, {1, 0, 1}}, Symbol{1}), SymbolicPoint(Word{0, {1}}, Symbol{0})};
  EXPECT_EQ(skew_bowen_distance(sys, p, p, 4), 0.0L);
  EXPECT_EQ(skew_bowen_distance(sys, p, p, 4, BowenMode::Decomposition), 0.0L);
  // Same base, fiber differs at 3: exponent set of (+1,-1,+1) on n = 2 is {0, 1},
  // so the fiber distance is max(2^-2, 2^-1).
  SkewPoint q = p;
  q.fiber = SymbolicPoint(Word{0, {1, 0, 0, 1}}, Symbol{0});
  EXPECT_DOUBLE_EQ(static_cast<double>(skew_bowen_distance(sys, p, q, 2)), 0.5);
  EXPECT_DOUBLE_EQ(static_cast<double>(skew_bowen_distance(sys, p, q, 2, BowenMode::Decomposition)), 0.5);
}

TEST(Bowen, RawEqualsDecompositionBelowThreshold) {
  std::mt19937 rng(2024);
  for (const SkewSystem& sys : {tt_inverse(), SkewSystem{SubshiftSpec::full(kPm), product_neighbours(),
                                                         FiberSystem::symbolic(SubshiftSpec::full(2))}}) {
    const double threshold = std::ldexp(1.0, -static_cast<int>(sys.tau.radius()));
    int compared = 0;
    for (int trial = 0; trial < 4000; ++trial) {
      const std::size_t n = 1 + rng() % 6;
      auto random_word = [&](std::int64_t lo, std::size_t len) {
        Word w{lo, Block(len)};
        for (auto& s : w.symbols) s = static_cast<Symbol>(rng() % 2);
        return w;
      };
      Word y = random_word(-8, n + 16);
      Word y2 = y;
      // Perturb far from the center most of the time so small distances occur.
      const std::size_t flips = rng() % 3;
      for (std::size_t f = 0; f < flips; ++f) {
        const std::size_t pos = (rng() % 2) ? rng() % 4 : y2.size() - 1 - rng() % 4;
        y2.symbols[pos] ^= 1;
      }
      Word x = random_word(-30, 60), x2 = x;
      x2.symbols[rng() % 60] ^= 1;
      const SkewPoint p{SymbolicPoint(y, Symbol{0}), SymbolicPoint(x, Symbol{0})};
      const SkewPoint q{SymbolicPoint(y2, Symbol{0}), SymbolicPoint(x2, Symbol{0})};
      const auto raw = skew_bowen_distance(sys, p, q, n);
      if (raw < threshold) {
        ++compared;
        EXPECT_EQ(raw, skew_bowen_distance(sys, p, q, n, BowenMode::Decomposition));
      }
    }
    EXPECT_GT(compared, 200);
  }
}

TEST(Bowen, DecompositionRejectsDisagreeingBases) {
  const auto sys = tt_inverse();
  const SkewPoint p{SymbolicPoint(Word{0, {1, 0}}, Symbol{1}), SymbolicPoint(Word{0, {}}, Symbol{0})};
  const SkewPoint q{SymbolicPoint(Word{0, {1, 1}}, Symbol{1}), SymbolicPoint(Word{0, {}}, Symbol{0})};
  EXPECT_THROW(skew_bowen_distance(sys, p, q, 3, BowenMode::Decomposition), DomainError);
}

TEST(Capacity, TtInverseSmall) {
  const auto a = capacity_A(tt_inverse(), 3, 0.5);
  EXPECT_TRUE(a.fast_path);
  EXPECT_EQ(a.upper, 192);  // 4 * 2^(3+2) + 4 * 2^(2+2)
  EXPECT_EQ(a.lower, 48);   // 4 * 2^3 + 4 * 2^2
  Options slow;
  slow.force_enumeration = true;
  const auto b = capacity_A(tt_inverse(), 3, 0.5, slow);
  EXPECT_FALSE(b.fast_path);
  EXPECT_EQ(b.upper, a.upper);
  EXPECT_EQ(b.lower, a.lower);
  // A radius-1 copy of the same cocycle sums over L_{3,1}: four extensions per word.
  const SkewSystem wide{SubshiftSpec::full(kPm), coordinate_radius1(), FiberSystem::symbolic(SubshiftSpec::full(2))};
  EXPECT_EQ(capacity_A(wide, 3, 0.5).upper, 4 * 192);
}

TEST(Capacity, SingletonFiberCountsWords) {
  const SkewSystem sys{SubshiftSpec::sft(kPm, {{1, 1}}), product_neighbours(), FiberSystem::singleton()};
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto a = capacity_A(sys, n, 0.1);
    EXPECT_EQ(a.lower, symbolic::complexity(sys.base, n + 2));
    EXPECT_EQ(a.upper, a.lower);
  }
}

TEST(Capacity, SturmianWalkFrozen) {
  // Independent mpmath sampling of 4e5 orbits: 20 words of length 10, sums of
  // 2^r and 2^(r+2) over their walk ranges.
  const SkewSystem sys{SubshiftSpec::sturmian(QuadNumber::golden_conjugate()), Cocycle::coordinate(kPm),
                       FiberSystem::symbolic(SubshiftSpec::full(2))};
  const auto a = capacity_A(sys, 10, 0.5);
  EXPECT_FALSE(a.fast_path);
  EXPECT_EQ(a.lower, 208);
  EXPECT_EQ(a.upper, 832);
}

TEST(Capacity, FastPathEqualsEnumeration) {
  Options slow;
  slow.force_enumeration = true;
  const std::vector<FiberSystem> fibers = {FiberSystem::symbolic(SubshiftSpec::full(2)),
                                           FiberSystem::symbolic(SubshiftSpec::golden_mean()),
                                           FiberSystem::rotation(QuadNumber::golden_conjugate()),
                                           FiberSystem::identity({{0, 0.6}, {0.6, 0}})};
  for (const auto& base : {SubshiftSpec::full(kPm), SubshiftSpec::sft(kPm, {{1, 1}})})
    for (const auto& f : fibers)
      for (std::size_t n = 1; n <= 12; ++n)
        for (double eps : {0.5, 0.2}) {
          const SkewSystem sys{base, Cocycle::coordinate(kPm), f};
          const auto fast = capacity_A(sys, n, eps);
          const auto ungrouped = capacity_A(sys, n, eps, slow);
          ASSERT_TRUE(fast.fast_path);
          EXPECT_EQ(fast.lower, ungrouped.lower) << f.kind() << " n=" << n;
          EXPECT_EQ(fast.upper, ungrouped.upper) << f.kind() << " n=" << n;
        }
}

TEST(SkewSep, SingletonFiberEqualsBaseSep) {
  const SkewSystem sys{SubshiftSpec::full(kPm), Cocycle::coordinate(kPm), FiberSystem::singleton()};
  EXPECT_EQ(skew_sep_direct(sys, 1, 0.5), 8);
  EXPECT_EQ(skew_sep_direct(sys, 1, 0.5), fiber::sep_exact_symbolic(sys.base, FiniteIntSet({0}), 0.5));
  const SkewSystem golden{SubshiftSpec::sft(kPm, {{1, 1}}), product_neighbours(), FiberSystem::singleton()};
  for (std::size_t n = 1; n <= 6; ++n)
    for (double eps : {1.5, 0.5, 0.2})
      EXPECT_EQ(skew_sep_direct(golden, n, eps),
                fiber::sep_exact_symbolic(golden.base, FiniteIntSet::interval(0, static_cast<std::int64_t>(n) - 1), eps));
}

TEST(SkewSep, PairwiseOracleAgrees) {
  const std::vector<SkewSystem> systems = {
      tt_inverse(), golden_base(),
      SkewSystem{SubshiftSpec::full(kPm), product_neighbours(), FiberSystem::symbolic(SubshiftSpec::full(2))},
      SkewSystem{SubshiftSpec::full(kPm), coordinate_radius1(), FiberSystem::symbolic(SubshiftSpec::golden_mean())},
      SkewSystem{SubshiftSpec::sft(kPm, {{0, 0}}), Cocycle::coordinate(kPm),
                 FiberSystem::identity({{0, 0.4, 1}, {0.4, 0, 0.7}, {1, 0.7, 0}})}};
  for (const auto& sys : systems)
    for (std::size_t n = 1; n <= 3; ++n)
      for (double eps : {1.5, 0.6, 0.5}) {
        EXPECT_EQ(skew_sep_direct(sys, n, eps), Integer(skew_sep_pairwise(sys, n, eps)))
            << sys.fiber.kind() << " s=" << sys.tau.radius() << " n=" << n << " eps=" << eps;
      }
  Options wide;
  wide.pair_cap = std::size_t{1} << 28;
  EXPECT_EQ(skew_sep_direct(tt_inverse(), 2, 0.25), Integer(skew_sep_pairwise(tt_inverse(), 2, 0.25, wide)));
}

TEST(SkewSep, FactorInequalities) {
  for (const auto& sys : {tt_inverse(), golden_base()})
    for (std::size_t n = 1; n <= 5; ++n)
      for (double eps : {0.5, 0.25}) {
        const auto direct = skew_sep_direct(sys, n, eps);
        EXPECT_GE(direct, fiber::sep_exact_symbolic(sys.base, FiniteIntSet::interval(0, static_cast<std::int64_t>(n) - 1), eps));
        // For the all +1 base word the visited set is [0, n).
        EXPECT_GE(direct, fiber::sep_exact_symbolic(SubshiftSpec::full(2), FiniteIntSet::interval(0, static_cast<std::int64_t>(n) - 1), eps));
      }
}

TEST(SkewSep, RotationAndErrors) {
  const SkewSystem rot{SubshiftSpec::full(kPm), Cocycle::coordinate(kPm), FiberSystem::rotation(QuadNumber::golden_conjugate())};
  EXPECT_EQ(skew_sep_direct(rot, 2, 0.1), Integer(1024) * 9);  // base parts on [-4, 5]
  const SkewSystem toral{SubshiftSpec::full(kPm), Cocycle::coordinate(kPm), FiberSystem::toral({{{2, 1}, {1, 1}}}, 8)};
  EXPECT_THROW(skew_sep_direct(toral, 2, 0.1), DomainError);
  EXPECT_THROW(skew_sep_direct(tt_inverse(), 2, 2.0), DomainError);
  Options tiny;
  tiny.word_cap = 10;
  EXPECT_THROW(skew_sep_direct(tt_inverse(), 6, 0.25, tiny), CapExceeded);
}

TEST(Sandwich, CapacityBetweenSkewBounds) {
  for (const auto& sys : {tt_inverse(), golden_base()})
    for (std::size_t n = 1; n <= 6; ++n) {
      const auto a = capacity_A(sys, n, 0.5);
      EXPECT_LE(a.upper, skew_sep_direct(sys, n, 0.5)) << n;
    }
}

TEST(Sandwich, TtInversePasses) {
  const auto report = sandwich_check(tt_inverse(), {2, 3, 4, 5, 6}, 0.25);
  EXPECT_TRUE(report.pass);
  EXPECT_TRUE(report.left_holds);
  EXPECT_TRUE(report.e_nonincreasing);
  ASSERT_EQ(report.rows.size(), 5u);
  for (const auto& row : report.rows) {
    EXPECT_LE(row.a_lo_2eps, row.skew_lo);
    EXPECT_LE(row.skew_lo, row.skew_hi);
    // Base windows grow by 2 rho(1/4) = 4 symbols, each multiplying the count by 2.
    EXPECT_EQ(row.e_inferred, Rational(16));
  }
  EXPECT_LE(report.e_max, Rational(64));
}

TEST(Sandwich, GoldenMeanBase) {
  const auto report = sandwich_check(golden_base(), {2, 3, 4, 5, 6}, 0.25);
  EXPECT_TRUE(report.left_holds);
  EXPECT_TRUE(report.pass);
  // E wobbles near 6.95 after n = 2 but never returns to its first value 7.
  EXPECT_EQ(report.rows.front().e_inferred, Rational(7));
  EXPECT_EQ(report.e_max, Rational(7));
  for (const auto& row : report.rows) EXPECT_LE(row.e_inferred, Rational(16));
}

TEST(Sandwich, SingletonFiber) {
  const SkewSystem sys{SubshiftSpec::full(kPm), Cocycle::coordinate(kPm), FiberSystem::singleton()};
  const auto report = sandwich_check(sys, {1, 2, 3}, 0.25);
  EXPECT_TRUE(report.left_holds);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.a_lo_2eps, ipow(Integer(2), row.n));
    EXPECT_GE(row.skew_lo, row.a_lo_2eps);
  }
}

TEST(Sandwich, Preconditions) {
  EXPECT_THROW(sandwich_check(tt_inverse(), {2}, 0.5), DomainError);
  const SkewSystem wide{SubshiftSpec::full(kPm), coordinate_radius1(), FiberSystem::symbolic(SubshiftSpec::full(2))};
  EXPECT_THROW(sandwich_check(wide, {2}, 0.25), DomainError);
  EXPECT_NO_THROW(sandwich_check(wide, {2}, 0.2));
}
