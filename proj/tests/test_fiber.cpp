#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "entroscope/fiber.hpp"

using namespace entroscope;
using namespace entroscope::fiber;
using symbolic::Alphabet;
using symbolic::Block;
using symbolic::Symbol;
using symbolic::Word;

namespace {

// Greedy over every cylinder on F + [-rho - 1, rho + 1]: one margin beyond the
// window the closed form claims is enough.
std::size_t greedy_oracle(const SubshiftSpec& spec, const FiniteIntSet& f, double eps) {
  const auto rho = static_cast<std::int64_t>(symbolic::window_radius(eps));
  const auto sample = cylinder_sample(spec, f.min() - rho - 1, f.max() + rho + 1);
  return sep_greedy(FiberSystem::symbolic(spec), sample, f, eps);
}

}  // namespace

TEST(Bowen, SymbolicExample) {
  const auto sys = FiberSystem::symbolic(SubshiftSpec::full(2));
  const FiberPoint x = SymbolicPoint(Word{0, {}}, Symbol{0});
  const FiberPoint y = SymbolicPoint(Word{3, {1}}, Symbol{0});
  EXPECT_DOUBLE_EQ(static_cast<double>(bowen_distance(sys, x, y, FiniteIntSet({3}))), 2.0);
  EXPECT_DOUBLE_EQ(static_cast<double>(bowen_distance(sys, x, y, FiniteIntSet({0}))), 0.25);
  EXPECT_DOUBLE_EQ(static_cast<double>(bowen_distance(sys, x, y, FiniteIntSet({-2, 0, 1}))), 0.5);
}

TEST(Bowen, TruncatedPointsReportWindowErrors) {
  const auto sys = FiberSystem::symbolic(SubshiftSpec::full(2));
  const FiberPoint x = SymbolicPoint(Word{0, {0, 1, 0}});
  EXPECT_THROW(bowen_distance(sys, x, x, FiniteIntSet({1})), WindowError);
  EXPECT_THROW(bowen_distance(sys, x, x, FiniteIntSet({8})), WindowError);
}

TEST(Bowen, IsometriesAndIdentity) {
  const auto rot = FiberSystem::rotation(QuadNumber::golden_conjugate());
  const FiberPoint a = QuadNumber(Rational(1, 10)), b = QuadNumber(Rational(9, 10));
  EXPECT_NEAR(static_cast<double>(bowen_distance(rot, a, b, FiniteIntSet::interval(0, 9))), 0.2, 1e-15);
  EXPECT_TRUE(bowen_within(rot, a, b, FiniteIntSet::interval(-5, 5), 0.2));
  EXPECT_FALSE(bowen_within(rot, a, b, FiniteIntSet::interval(-5, 5), 0.19));
  const auto id = FiberSystem::identity({{0, 0.3}, {0.3, 0}});
  EXPECT_DOUBLE_EQ(static_cast<double>(bowen_distance(id, std::size_t{0}, std::size_t{1}, FiniteIntSet({0, 4}))), 0.3);
}

TEST(Bowen, ToralAutomorphism) {
  const auto cat = FiberSystem::toral({{{2, 1}, {1, 1}}}, 10);
  const FiberPoint p = TorusPoint{3, 7};
  EXPECT_EQ(iterate(cat, iterate(cat, p, 5), -5), p);
  EXPECT_EQ(std::get<TorusPoint>(iterate(cat, p, 1)), (TorusPoint{3, 0}));
  EXPECT_DOUBLE_EQ(static_cast<double>(distance(cat, TorusPoint{0, 0}, TorusPoint{9, 4}).value), 0.4);
  EXPECT_THROW(FiberSystem::toral({{{2, 0}, {0, 1}}}, 10).kind(), DomainError);
  EXPECT_NO_THROW(FiberSystem::toral({{{0, 1}, {1, 0}}}, 10));
}

TEST(SepExact, Examples) {
  const auto full2 = SubshiftSpec::full(2);
  EXPECT_EQ(sep_exact_symbolic(full2, FiniteIntSet({0, 1, 2}), 0.5), 32);
  EXPECT_EQ(sep_exact_symbolic(full2, FiniteIntSet({0}), 1.5), 2);
  EXPECT_EQ(sep_exact_symbolic(full2, FiniteIntSet({0}), 2.5), 1);
  // F + [-1, 1] = {-1, ..., 4}: |L_6| of the golden mean shift.
  EXPECT_EQ(sep_exact_symbolic(SubshiftSpec::golden_mean(), FiniteIntSet::interval(0, 3), 0.5), 21);
  EXPECT_THROW(sep_exact_symbolic(full2, FiniteIntSet({0}), 0), DomainError);
}

TEST(SepExact, GreedyOracleAgrees) {
  const auto full2 = SubshiftSpec::full(2);
  EXPECT_EQ(greedy_oracle(full2, FiniteIntSet({0, 1, 2}), 0.5), 32u);
  const std::vector<SubshiftSpec> specs = {full2, SubshiftSpec::golden_mean(),
                                           SubshiftSpec::sft(Alphabet(3), {{0, 0}, {1, 2}, {2, 1, 0}}),
                                           SubshiftSpec::sturmian(QuadNumber::golden_conjugate())};
  const std::vector<FiniteIntSet> sets = {FiniteIntSet({0}), FiniteIntSet({0, 1}), FiniteIntSet({0, 3}),
                                          FiniteIntSet({-2, 0, 2}), FiniteIntSet({1, 2, 5})};
  for (const auto& spec : specs)
    for (const auto& f : sets)
      for (double eps : {1.5, 0.6, 0.3}) {
        const Integer exact = sep_exact_symbolic(spec, f, eps);
        EXPECT_EQ(Integer(greedy_oracle(spec, f, eps)), exact) << spec.kind() << " eps=" << eps;
      }
}

TEST(SepExact, MonotoneAndTranslationInvariant) {
  const auto g = SubshiftSpec::golden_mean();
  for (double eps : {0.9, 0.5, 0.2}) {
    EXPECT_LE(sep_exact_symbolic(g, FiniteIntSet({0, 2}), eps), sep_exact_symbolic(g, FiniteIntSet({0, 2, 3}), eps));
    EXPECT_EQ(sep_exact_symbolic(g, FiniteIntSet({0, 2, 7}), eps),
              sep_exact_symbolic(g, FiniteIntSet({0, 2, 7}).translated(-11), eps));
    for (std::int64_t n = 1; n < 8; ++n)
      EXPECT_LE(sep_exact_symbolic(g, FiniteIntSet::interval(0, n - 1), eps),
                sep_exact_symbolic(g, FiniteIntSet::interval(5, 5 + n), eps));
  }
}

TEST(SepExact, FullShiftWindowFormula) {
  const auto full3 = SubshiftSpec::full(3);
  for (std::size_t n : {1u, 5u, 40u}) {
    for (double eps : {0.7, 0.5, 0.1}) {
      const auto rho = symbolic::window_radius(eps);
      EXPECT_EQ(sep_exact_symbolic(full3, FiniteIntSet::interval(0, static_cast<std::int64_t>(n) - 1), eps),
                ipow(Integer(3), n + 2 * rho));
    }
  }
}

TEST(SepGreedy, IdentityAndRotation) {
  const auto id = FiberSystem::identity({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  EXPECT_EQ(sep_greedy(id, identity_points(*id.get<IdentityFiber>()), FiniteIntSet({0, 9}), 0.5), 3u);
  EXPECT_THROW(sep_greedy(id, {}, FiniteIntSet({0}), 0.5), DomainError);
  // On a 1024 grid the greedy spacing is 103/1024 and the ninth gap closes the circle
  // at 97/1024 < 0.1, so nine points: the packing count ceil(1/eps) - 1.
  const auto rot = FiberSystem::rotation(QuadNumber::golden_conjugate());
  const auto greedy = sep_greedy(rot, circle_grid(1024), FiniteIntSet::interval(0, 9), 0.1);
  EXPECT_EQ(greedy, 9u);
  EXPECT_EQ(Integer(greedy), rotation_sep_analytic(0.1));
}

TEST(SepGreedy, PairCap) {
  EXPECT_THROW(sep_greedy(FiberSystem::rotation(QuadNumber(Rational(1, 7))), circle_grid(2000),
                          FiniteIntSet({0}), 0.001, 1000),
               CapExceeded);
}

TEST(RotationAnalytic, Examples) {
  EXPECT_EQ(rotation_spa_analytic(0.5), 1);
  EXPECT_EQ(rotation_spa_analytic(0.1), 5);
  EXPECT_EQ(rotation_spa_analytic(0.03), 17);
  EXPECT_EQ(rotation_sep_analytic(0.25), 3);
  EXPECT_EQ(rotation_sep_analytic(0.5), 1);
}

TEST(RotationAnalytic, GreedyOnGrids) {
  const auto rot = FiberSystem::rotation(QuadNumber::golden_conjugate());
  for (double eps : {0.3, 0.1, 0.07, 0.03}) {
    // A maximal separated set on a fine grid is a spanning set of the grid, and
    // grid points are 1/2048 from every point, so the circle is spanned at eps + 1/2048.
    const auto greedy = sep_greedy(rot, circle_grid(1024), FiniteIntSet({0, 3}), eps);
    EXPECT_LE(Integer(greedy), rotation_sep_analytic(eps)) << eps;
    EXPECT_GE(Integer(greedy), rotation_spa_analytic(eps + 1.0 / 2048)) << eps;
  }
}

TEST(SpaBracket, Examples) {
  const auto full2 = FiberSystem::symbolic(SubshiftSpec::full(2));
  for (std::int64_t n : {1, 4, 10}) {
    const auto b = spa_bracket(full2, FiniteIntSet::interval(0, n - 1), 0.5);
    EXPECT_EQ(b.lower, ipow(Integer(2), static_cast<std::uint64_t>(n)));
    EXPECT_EQ(b.upper, ipow(Integer(2), static_cast<std::uint64_t>(n + 2)));
  }
  const auto s = spa_bracket(FiberSystem::singleton(), FiniteIntSet({0, 1}), 0.1);
  EXPECT_EQ(s.lower, 1);
  EXPECT_EQ(s.upper, 1);
  const auto g = spa_bracket(FiberSystem::symbolic(SubshiftSpec::golden_mean()), FiniteIntSet::interval(0, 3), 0.5);
  EXPECT_EQ(g.lower, 8);
  EXPECT_EQ(g.upper, 21);
}

TEST(SpaBracket, BracketsAreOrderedAndContainExactSpanning) {
  // Small identity space where spa is computable by exhaustive cover search.
  const std::vector<std::vector<double>> d = {{0, 0.2, 0.5, 0.9}, {0.2, 0, 0.4, 0.7}, {0.5, 0.4, 0, 0.3}, {0.9, 0.7, 0.3, 0}};
  const auto id = FiberSystem::identity(d);
  for (double eps : {0.1, 0.25, 0.35, 0.45, 0.8}) {
    std::size_t spa = d.size();
    for (unsigned mask = 1; mask < (1u << d.size()); ++mask) {
      bool covers = true;
      for (std::size_t x = 0; x < d.size(); ++x) {
        bool hit = false;
        for (std::size_t c = 0; c < d.size(); ++c)
          if ((mask >> c & 1u) && d[x][c] <= eps) hit = true;
        covers = covers && hit;
      }
      if (covers) spa = std::min<std::size_t>(spa, static_cast<std::size_t>(__builtin_popcount(mask)));
    }
    const auto b = spa_bracket(id, FiniteIntSet({0}), eps);
    EXPECT_LE(b.lower, Integer(spa)) << eps;
    EXPECT_GE(b.upper, Integer(spa)) << eps;
  }
  const auto rot = spa_bracket(FiberSystem::rotation(QuadNumber::golden_conjugate()), FiniteIntSet({0}), 0.1);
  EXPECT_LE(rot.lower, rotation_spa_analytic(0.1));
  EXPECT_GE(rot.upper, rotation_spa_analytic(0.1));
}

TEST(SpaBracket, ToralGridCertificate) {
  const auto cat = FiberSystem::toral({{{2, 1}, {1, 1}}}, 40);
  const auto b = spa_bracket(cat, FiniteIntSet({0, 1}), 0.2);
  EXPECT_GE(b.lower, 1);
  EXPECT_LE(b.lower, b.upper);
  // Larger F forces more separated orbits.
  const auto wider = spa_bracket(cat, FiniteIntSet({-1, 0, 1}), 0.2);
  EXPECT_GE(wider.lower, b.lower);
  EXPECT_THROW(spa_bracket(FiberSystem::toral({{{2, 1}, {1, 1}}}, 4), FiniteIntSet({0, 5}), 0.1), DomainError);
}
