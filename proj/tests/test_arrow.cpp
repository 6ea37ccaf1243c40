#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "parcol/arrow.hpp"

using namespace parcol;

namespace {

Presentation f2() { return Presentation::free_group(2); }

// Window values for x(e), x(a), x(A), x(b), x(B).
std::vector<std::int8_t> window(ColouringRule const& rule, std::array<int, 5> v) {
  std::array<char const*, 5> names{"1", "a", "A", "b", "B"};
  std::vector<std::int8_t> out(rule.window_ball().size(), 1);
  for (std::size_t i = 0; i < 5; ++i) {
    out[static_cast<std::size_t>(rule.window_ball().find(Word::parse(f2(), names[i])))] =
        static_cast<std::int8_t>(v[i]);
  }
  return out;
}

ColourMask allowed(ColouringRule const& rule, std::array<int, 5> v, std::array<ColourId, 4> c) {
  auto w = window(rule, v);
  return rule.allowed(Window{w, 0}, c);
}

// Brute force: the neighbours y of w with w among y's candidates.
int pdegree_by_search(Configuration const& x, VertexId w) {
  Ball const& b = x.ball();
  int deg = 0;
  for (int s = 0; s < b.num_steps(); ++s) {
    VertexId y = b.neighbour(w, s);
    if (y == kNone || b.length(y) >= b.radius()) {
      continue;
    }
    auto [c1, c2] = candidates(x, y);
    deg += (c1 == w || c2 == w) ? 1 : 0;
  }
  return deg;
}

double binomial4(int k) {
  static constexpr std::array<int, 5> c{1, 4, 6, 4, 1};
  return c[static_cast<std::size_t>(k)] / 16.0;
}

}  // namespace

TEST(Candidates, FollowTheRootSign) {
  auto b = make_ball(f2(), 2);
  auto plus = Configuration::constant(b, 1);
  auto [p1, p2] = candidates(plus, b->identity());
  EXPECT_EQ(b->word(p1).to_string(), "a");
  EXPECT_EQ(b->word(p2).to_string(), "b");
  auto minus = Configuration::constant(b, -1);
  auto [m1, m2] = candidates(minus, b->identity());
  EXPECT_EQ(b->word(m1).to_string(), "A");
  EXPECT_EQ(b->word(m2).to_string(), "B");
  EXPECT_THROW(candidates(plus, b->find(Word::parse(f2(), "ab"))), Error);
}

TEST(Pdegree, AgreesWithSearchOverNeighbours) {
  auto b = make_ball(f2(), 5);
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto x = Configuration::sample(b, RandomSource{77}, s);
    for (VertexId w = 0; w < static_cast<VertexId>(b->count_within(3)); ++w) {
      ASSERT_EQ(pdegree(x, w), pdegree_by_search(x, w)) << b->word(w).to_string();
    }
  }
}

TEST(Pdegree, ConstantConfigurationsGiveTwo) {
  auto b = make_ball(f2(), 3);
  EXPECT_EQ(pdegree(Configuration::constant(b, 1), b->identity()), 2);
  EXPECT_EQ(pdegree(Configuration::constant(b, -1), b->identity()), 2);
}

TEST(ArrowRule, NoIncomingAndUncrowdedCandidatesAllowBoth) {
  auto rule = arrow_rule();
  // x(a) = x(b) = +1 and x(A) = x(B) = -1: nobody points back.
  auto m = allowed(rule, {1, 1, -1, 1, -1}, {kA1u, kA1u, kA1u, kA1u});
  EXPECT_EQ(m, colour_bit(kA1u) | colour_bit(kA2u));
}

TEST(ArrowRule, CrowdedCandidateIsAvoided) {
  auto rule = arrow_rule();
  // Root reads +1: candidates a and b, descendants 0 and 2.
  EXPECT_EQ(allowed(rule, {1, 1, -1, 1, -1}, {kA1c, kA1u, kA2u, kA1u}), colour_bit(kA2u));
  EXPECT_EQ(allowed(rule, {1, 1, -1, 1, -1}, {kA1u, kA1u, kA2c, kA1u}), colour_bit(kA1u));
  // Both crowded: either.
  EXPECT_EQ(allowed(rule, {1, 1, -1, 1, -1}, {kA1c, kA1u, kA2c, kA1u}), colour_bit(kA1u) | colour_bit(kA2u));
  // Root reads -1: candidates A and B are descendants 1 and 3.
  EXPECT_EQ(allowed(rule, {-1, 1, -1, 1, -1}, {kA1c, kA1c, kA2u, kA1u}), colour_bit(kA2u));
}

TEST(ArrowRule, TwoIncomingArrowsMarkCrowded) {
  auto rule = arrow_rule();
  // a reads -1 with active 1 and B reads +1 with active 2: two arrows in.
  auto m = allowed(rule, {1, -1, -1, 1, 1}, {kA1u, kA1u, kA1u, kA2u});
  EXPECT_EQ(m, colour_bit(kA1c) | colour_bit(kA2c));
  // Only one of them: uncrowded.
  m = allowed(rule, {1, -1, -1, 1, 1}, {kA1u, kA1u, kA1u, kA1u});
  EXPECT_EQ(m, colour_bit(kA1u) | colour_bit(kA2u));
}

TEST(ArrowRule, ExhaustiveAgainstIncomingCount) {
  auto rule = arrow_rule();
  auto rank = classify_rank(rule);
  EXPECT_EQ(rank.rank, Rank::One);
  EXPECT_TRUE(rank.position_dependent);
  EXPECT_THROW(arrow_rule(Presentation::parse("Z2*Z3")), Error);
}

TEST(Constructive, SatisfiesRulePointsOutwardAndNeverCrowds) {
  auto b = make_ball(f2(), 7);
  auto rule = arrow_rule();
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto x = Configuration::sample(b, RandomSource{5}, s);
    auto c = constructive_solve(x);
    auto rep = check(rule, c, &x);
    EXPECT_TRUE(rep.satisfied()) << s;
    std::map<VertexId, int> hits;
    for (VertexId w = 0; w < static_cast<VertexId>(b->count_within(6)); ++w) {
      VertexId t = arrow_target(x, c, w);
      ASSERT_NE(t, kNone);
      EXPECT_EQ(b->length(t), b->length(w) + 1);
      auto [c1, c2] = candidates(x, w);
      EXPECT_TRUE(t == c1 || t == c2);
      ++hits[t];
    }
    for (auto const& [t, n] : hits) {
      EXPECT_EQ(n, 1) << b->word(t).to_string();
    }
    auto a = mass_audit(c, x);
    EXPECT_EQ(a.crowded, 0u);
    EXPECT_EQ(a.marked_crowded, 0u);
    EXPECT_EQ(a.outflow, a.interior);
    EXPECT_EQ(a.interior, b->count_within(5));
  }
}

TEST(MassAudit, DetectsPlantedCollision) {
  auto b = make_ball(f2(), 4);
  auto x = Configuration::constant(b, 1);
  Colouring c(b);
  for (VertexId w = 0; w < static_cast<VertexId>(b->size()); ++w) {
    c.set(w, kA1u);
  }
  // A -> 1 by a, and B -> 1 by b: the identity receives two arrows.
  c.set(b->find(Word::parse(f2(), "B")), kA2u);
  auto a = mass_audit(c, x);
  EXPECT_GE(a.crowded, 1u);
  auto cert = arrow_certificate(a);
  EXPECT_FALSE(cert.verification.complete());
  EXPECT_FALSE(check(arrow_rule(), c, &x).satisfied());
}

TEST(MassAudit, HistogramSumsToInterior) {
  auto a = sampled_mass_audit(6, 20, RandomSource{3});
  std::uint64_t sum = 0;
  for (auto h : a.pdegree_histogram) {
    sum += h;
  }
  EXPECT_EQ(sum, a.interior);
  EXPECT_EQ(a.capacity, a.interior - a.pdegree_histogram[0]);
  EXPECT_EQ(a.configurations, 20u);
  EXPECT_NEAR(a.inflow_capacity(), 15.0 / 16, 0.02);
  auto cert = arrow_certificate(a, 0.0);
  EXPECT_TRUE(cert.verification.complete());
  EXPECT_EQ(cert.inflow_bound, frac(15, 16));
}

TEST(MassAudit, WorkerCountDoesNotMatter) {
  auto a = sampled_mass_audit(5, 12, RandomSource{9}, 1);
  auto b = sampled_mass_audit(5, 12, RandomSource{9}, 4);
  EXPECT_EQ(a.capacity, b.capacity);
  EXPECT_EQ(a.pdegree_histogram, b.pdegree_histogram);
}

TEST(PdegreeLaw, HistogramIsBinomialFourHalf) {
  std::uint64_t n = 40000;
  auto law = pdegree_law(n, 20000, RandomSource{21});
  ASSERT_EQ(law.samples, n);
  for (int k = 0; k <= 4; ++k) {
    double p = binomial4(k);
    double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
    EXPECT_NEAR(law.fraction(k), p, 3 * sigma) << k;
  }
  // 15 degrees of freedom; 37.7 is the 0.1% tail.
  EXPECT_LT(law.chi_square(), 37.7);
}

// Given one arrow in, the other three indicators are Bernoulli(1/2): p-degree 1 + Bin(3, 1/2).
TEST(PdegreeLaw, ConditionalLawShiftsByOne) {
  auto law = pdegree_law(1000, 20000, RandomSource{22});
  ASSERT_EQ(law.conditioned, 20000u);
  EXPECT_EQ(law.conditional[0], 0u);
  double n = 20000;
  std::array<double, 5> expect{0, 1.0 / 8, 3.0 / 8, 3.0 / 8, 1.0 / 8};
  for (int k = 1; k <= 4; ++k) {
    double p = expect[static_cast<std::size_t>(k)];
    EXPECT_NEAR(law.conditional_fraction(k), p, 3 * std::sqrt(p * (1 - p) / n)) << k;
  }
}

TEST(PdegreeLaw, WorkerInvariant) {
  auto a = pdegree_law(3000, 500, RandomSource{4}, 1);
  auto b = pdegree_law(3000, 500, RandomSource{4}, 3);
  EXPECT_EQ(a.cells, b.cells);
  EXPECT_EQ(a.conditional, b.conditional);
}

TEST(Recursion, MapFactorsAndDecays) {
  auto r = chain_recursion();
  EXPECT_EQ(r.map, polynomial({0, 0, frac(3, 4), frac(-1, 4)}));
  EXPECT_EQ(r.map, r.from_branches);
  EXPECT_EQ(r.residual, polynomial({4, -3, 1}));
  EXPECT_TRUE(r.remainder.data().empty() || (r.remainder.data().size() == 1 && r.remainder.data()[0] == 0));
  EXPECT_EQ(r.factor * r.residual, r.fixed_point);
  EXPECT_EQ(r.discriminant, -7);
  EXPECT_TRUE(r.no_real_residual_roots);
  EXPECT_EQ(r.map.evaluate(Rational(1)), frac(1, 2));
  EXPECT_EQ(r.map.evaluate(Rational(0)), 0);
  ASSERT_GT(r.steps_below_threshold, 0);
  EXPECT_LE(r.steps_below_threshold, 60);
  // Independent double iteration.
  double p = 1.0;
  for (int n = 1; n <= 60; ++n) {
    p = 0.75 * p * p - 0.25 * p * p * p;
    EXPECT_DOUBLE_EQ(r.trace[static_cast<std::size_t>(n)], p);
  }
  EXPECT_EQ(to_string(r.residual), "p^2 - 3*p + 4");
}

// f(p) < p on (0, 1]: the iteration is monotone.
TEST(Recursion, MapBelowDiagonal) {
  auto r = chain_recursion();
  for (int i = 1; i <= 100; ++i) {
    Rational p = frac(i, 100);
    EXPECT_LT(r.map.evaluate(p), p);
  }
}
