#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "parcol/hausdorff.hpp"
#include "parcol/rule.hpp"

using namespace parcol;

namespace {

// The three-colour rule as stated in words: i = colour of tau^-1 x.
ColourId example1_by_hand(int k, std::vector<int> const& c) {
  int t = c[0], i = c[1];
  int next = (i + 1) % 3, prev = (i + 2) % 3;
  if (t == i || t == next) {
    return next;
  }
  EXPECT_EQ(t, prev);
  int a1 = 0;
  for (int x : c) {
    a1 += x == 0 ? 1 : 0;
  }
  return (a1 > 0 && a1 < k) ? t : next;
}

Configuration some_config(BallPtr const& b) { return Configuration::sample(b, RandomSource{1}, 0); }

}  // namespace

TEST(ColourSet, Validation) {
  EXPECT_THROW(ColourSet({"only"}), Error);
  EXPECT_THROW(ColourSet({"x", "x"}), Error);
  ColourSet c{"p", "q", "r"};
  EXPECT_EQ(c.index("q"), 1);
  EXPECT_EQ(c.all(), 0b111u);
  EXPECT_EQ(c.describe(0b101), "{p,r}");
  EXPECT_THROW(c.index("z"), Error);
}

TEST(Example1Rule, MatchesTheWrittenRuleOnEveryInput) {
  for (int k : {2, 3}) {
    auto rule = example1_rule(k);
    std::vector<int> c(static_cast<std::size_t>(k + 1), 0);
    std::size_t cases = 0;
    std::vector<ColourId> ids(c.size());
    std::size_t total = 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
      total *= 3;
    }
    for (std::size_t n = 0; n < total; ++n) {
      std::size_t r = n;
      for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = static_cast<int>(r % 3);
        ids[i] = static_cast<ColourId>(c[i]);
        r /= 3;
      }
      ColourMask m = rule.allowed(Window{}, ids);
      EXPECT_EQ(m, colour_bit(example1_by_hand(k, c)));
      ++cases;
    }
    EXPECT_EQ(cases, total);
  }
}

TEST(Example1Rule, PresentationChecks) {
  EXPECT_THROW(example1_rule(1), Error);
  EXPECT_THROW(example1_rule(2, Presentation::parse("Z4*Z")), Error);   // tau order 4
  EXPECT_THROW(example1_rule(2, Presentation::parse("Z3*Z3")), Error);  // sigma odd order
  EXPECT_NO_THROW(example1_rule(2, Presentation::parse("Z3*Z2")));
  EXPECT_NO_THROW(example1_rule(2, Presentation::parse("Z6*Z")));
}

TEST(Rank, ExampleOneIsRankOneAndHausdorffIsNot) {
  auto r1 = classify_rank(example1_rule());
  EXPECT_EQ(r1.rank, Rank::One);
  // Each colour tuple is enumerated against both values of the (unread) window.
  EXPECT_EQ(r1.cases, 54u);
  EXPECT_EQ(r1.empty_cases, 0u);
  auto r2 = classify_rank(hausdorff_rule());
  EXPECT_EQ(r2.rank, Rank::TwoOrHigher);
  // tau part forces colour(tau^-1 x)+1; the sigma part rejects it in 5 of 9 tuples.
  EXPECT_EQ(r2.cases, 18u);
  EXPECT_EQ(r2.empty_cases, 10u);
  EXPECT_FALSE(r2.first_empty.empty());
}

TEST(Rank, SplitRankTwoGivesRankOneFactorsWhoseIntersectionIsTheRule) {
  auto rule = hausdorff_rule();
  auto [f1, f2] = split_rank_two(rule);
  EXPECT_EQ(classify_rank(f1).rank, Rank::One);
  EXPECT_EQ(classify_rank(f2).rank, Rank::One);
  for (ColourId a = 0; a < 3; ++a) {
    for (ColourId b = 0; b < 3; ++b) {
      std::vector<ColourId> c{a, b};
      EXPECT_EQ(f1.allowed(Window{}, c) & f2.allowed(Window{}, c), rule.allowed(Window{}, c));
    }
  }
}

TEST(Check, ReportsPlantedViolationAtInteriorOnly) {
  auto b = make_ball(Presentation::free_group(2), 5);
  auto rule = example1_rule();
  auto c = example1_solve(b);
  ASSERT_TRUE(check(rule, c).satisfied());
  EXPECT_EQ(check(rule, c).interior_size, b->count_within(4));
  VertexId v = b->find(Word::parse(b->presentation(), "ab"));
  c.set(v, (c.get(v) + 1) % 3);
  auto rep = check(rule, c);
  EXPECT_FALSE(rep.satisfied());
  bool found = false;
  for (auto const& x : rep.violations) {
    found = found || x.vertex == v;
  }
  EXPECT_TRUE(found);
  // Recolouring the outer sphere is invisible to the interior check.
  auto d = example1_solve(b);
  for (VertexId u = static_cast<VertexId>(b->count_within(4)); u < static_cast<VertexId>(b->size()); ++u) {
    d.set(u, (d.get(u) + 1) % 3);
  }
  auto rep2 = check(rule, d);
  for (auto const& x : rep2.violations) {
    EXPECT_EQ(b->length(x.vertex), 4);
  }
}

TEST(Check, EmptyInteriorHasNoFraction) {
  auto b = make_ball(Presentation::free_group(2), 0);
  Colouring c(b);
  c.set(0, 0);
  auto rep = check(example1_rule(), c);
  EXPECT_EQ(rep.interior_size, 0u);
  EXPECT_FALSE(rep.fraction().has_value());
}

TEST(Check, UncolouredInteriorThrows) {
  auto b = make_ball(Presentation::free_group(2), 3);
  Colouring c(b);
  EXPECT_THROW(check(example1_rule(), c), Error);
}

TEST(Check, PositionRuleNeedsConfiguration) {
  auto b = make_ball(Presentation::free_group(2), 3);
  auto rule = double_space(example1_rule());
  EXPECT_THROW(check(rule, lift_doubled(example1_solve(b))), Error);
}

// Outer sphere kept from the solution, a few interior vertices scrambled.
TEST(Iterate, RepairsAPerturbedSolution) {
  auto b = make_ball(Presentation::free_group(2), 6);
  auto rule = example1_rule();
  auto init = example1_solve(b);
  std::mt19937_64 g(11);
  for (int i = 0; i < 20; ++i) {
    auto v = static_cast<VertexId>(g() % b->count_within(3));
    init.set(v, static_cast<ColourId>(g() % 3));
  }
  auto res = iterate(rule, init, 200);
  EXPECT_TRUE(res.converged);
  EXPECT_TRUE(check(rule, res.colouring).satisfied());
}

TEST(Iterate, FixedPointIsLeftAlone) {
  auto b = make_ball(Presentation::free_group(2), 6);
  auto c = example1_solve(b);
  auto res = iterate(example1_rule(), c, 5);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.rounds, 1);
  EXPECT_EQ(res.colouring, c);
}

TEST(Iterate, RankTwoRuleMayHitEmptySet) {
  auto b = make_ball(Presentation::z2_z3(), 5);
  Colouring c(b);
  for (std::size_t s = 0; s < c.sites(); ++s) {
    c.set_site(s, kClassA);
  }
  // At the root: tau^-1 reads C so tau wants A, sigma reads A so sigma wants B or C.
  c.set(b->find(Word::parse(b->presentation(), "T")), kClassC);
  EXPECT_THROW(iterate(hausdorff_rule(), c, 5), Error);
}

// Example 2: the doubled rule.
TEST(Combinators, DoubledLiftSatisfiesAndRestrictsBack) {
  auto b = make_ball(Presentation::free_group(2), 7);
  auto base_rule = example1_rule();
  auto base = example1_solve(b);
  auto rule = double_space(base_rule);
  EXPECT_EQ(rule.layers(), 2);
  auto x = some_config(b);
  auto lifted = lift_doubled(base);
  EXPECT_TRUE(check(rule, lifted, &x).satisfied());
  for (int layer : {0, 1}) {
    EXPECT_TRUE(check(base_rule, restrict_layer(lifted, layer)).satisfied());
  }
  EXPECT_EQ(classify_rank(rule).rank, Rank::One);
}

TEST(Combinators, DoubledRuleRejectsDisagreeingCopy) {
  auto b = make_ball(Presentation::free_group(2), 5);
  auto rule = double_space(example1_rule());
  auto x = some_config(b);
  auto lifted = lift_doubled(example1_solve(b));
  VertexId v = b->find(Word::parse(b->presentation(), "a"));
  lifted.set(v, (lifted.get(v, 1) + 1) % 3, 1);
  EXPECT_FALSE(check(rule, lifted, &x).satisfied());
}

// Example 3: the squared-colour rule.
TEST(Combinators, SquaredLiftSatisfiesAndProjectsBack) {
  auto b = make_ball(Presentation::free_group(2), 7);
  auto base_rule = example1_rule();
  auto base = example1_solve(b);
  Word g = Word::generator(b->presentation(), 0, 1);
  auto rule = square_colours(base_rule, g);
  EXPECT_EQ(rule.colours().size(), 9u);
  EXPECT_EQ(rule.colours().name(1), "(A1,A2)");
  auto lifted = lift_squared(base, g, 3);
  EXPECT_TRUE(check(rule, lifted).satisfied());
  EXPECT_TRUE(check(base_rule, project_first(lifted, 3)).satisfied());
  EXPECT_EQ(classify_rank(rule).rank, Rank::One);
}

TEST(Combinators, SquaredNeedsADescendant) {
  Presentation p = Presentation::free_group(2);
  EXPECT_THROW(square_colours(example1_rule(), Word::parse(p, "ab")), Error);
}

TEST(Combinators, LayerSwapRequiresTwoLayers) {
  Presentation p = Presentation::free_group(2);
  ColouringRule::Spec s{"bad", p, ColourSet{"x", "y"}, {{Word(p), true}}, 0, 1, true, -1,
                        [](Window const&, std::span<ColourId const>) { return ColourMask{1}; }};
  EXPECT_THROW(ColouringRule{s}, Error);
}
