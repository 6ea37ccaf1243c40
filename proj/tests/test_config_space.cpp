#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "parcol/arrow.hpp"
#include "parcol/config_space.hpp"

using namespace parcol;

namespace {

Presentation f2() { return Presentation::free_group(2); }

std::string slurp(std::string const& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Configuration, SeedFortyTwoMatchesGoldenFile) {
  auto x = Configuration::sample(make_ball(f2(), 2), RandomSource{42}, 0);
  std::ostringstream out;
  x.write_csv(out);
  std::string golden = slurp(std::string(PARCOL_GOLDEN_DIR) + "/config_seed42_r2.csv");
  ASSERT_FALSE(golden.empty());
  EXPECT_EQ(out.str(), golden);
}

TEST(Configuration, SameSeedSameStreamSameValues) {
  auto b = make_ball(f2(), 5);
  EXPECT_EQ(Configuration::sample(b, RandomSource{9}, 3), Configuration::sample(b, RandomSource{9}, 3));
  EXPECT_FALSE(Configuration::sample(b, RandomSource{9}, 3) == Configuration::sample(b, RandomSource{9}, 4));
  EXPECT_FALSE(Configuration::sample(b, RandomSource{9}, 3) == Configuration::sample(b, RandomSource{10}, 3));
}

TEST(Configuration, ValuesAreSigns) {
  auto x = Configuration::sample(make_ball(f2(), 4), RandomSource{1}, 0);
  for (auto v : x.values()) {
    EXPECT_TRUE(v == 1 || v == -1);
  }
  EXPECT_EQ(x.defined_count(), x.ball().size());
  EXPECT_THROW(Configuration(x.ball_ptr(), std::vector<std::int8_t>(x.ball().size(), 2)), Error);
}

TEST(Configuration, ShiftByIdentityIsIdentity) {
  auto b = make_ball(f2(), 4);
  auto x = Configuration::sample(b, RandomSource{5}, 0);
  EXPECT_EQ(x.shift(Word(f2())), x);
}

TEST(Configuration, ShiftReadsRightTranslate) {
  auto b = make_ball(f2(), 4);
  auto x = Configuration::sample(b, RandomSource{5}, 0);
  Word t1 = Word::generator(f2(), 0, 1);
  auto y = x.shift(t1);
  EXPECT_EQ(y.at(Word(f2())), x.at(t1));
  for (VertexId w = 0; w < static_cast<VertexId>(b->size()); ++w) {
    Word wg = b->word(w) * t1;
    if (wg.length() <= 4) {
      EXPECT_EQ(y.value(w), x.at(wg));
    } else {
      EXPECT_FALSE(y.defined(w));
    }
  }
}

TEST(Configuration, ShiftComposesOnCommonDomain) {
  auto b = make_ball(f2(), 4);
  auto x = Configuration::sample(b, RandomSource{17}, 0);
  std::mt19937_64 g(3);
  auto small = make_ball(f2(), 2);
  for (int t = 0; t < 40; ++t) {
    Word gw = small->word(static_cast<VertexId>(g() % small->size()));
    Word hw = small->word(static_cast<VertexId>(g() % small->size()));
    // (g.(h.x))(w) = (h.x)(w g) = x(w g h).
    auto lhs = x.shift(hw).shift(gw);
    auto rhs = x.shift(gw * hw);
    for (VertexId w = 0; w < static_cast<VertexId>(b->size()); ++w) {
      if (lhs.defined(w) && rhs.defined(w)) {
        EXPECT_EQ(lhs.value(w), rhs.value(w));
      }
    }
  }
}

TEST(Density, RootValueIsFair) {
  WindowPredicate up{"x(e)=1", 0, [](Configuration const& x) { return x.value(x.ball().identity()) == 1; }};
  auto e = empirical_density(up, 1, 20000, RandomSource{42});
  EXPECT_EQ(e.n, 20000u);
  EXPECT_NEAR(e.estimate, 0.5, 4 * 0.5 / std::sqrt(20000.0));
  EXPECT_NEAR(e.std_error, std::sqrt(0.25 / 20000), 1e-4);
}

TEST(Density, MeanAndCovarianceOfRootAndNeighbour) {
  auto b = make_ball(f2(), 1);
  struct Acc {
    double sum = 0, prod = 0;
    std::uint64_t n = 0;
    Acc& operator+=(Acc const& o) {
      sum += o.sum;
      prod += o.prod;
      n += o.n;
      return *this;
    }
  };
  VertexId t1 = b->neighbour(b->identity(), Letter{0, 1});
  auto acc = sample_reduce<Acc>(b, 100000, RandomSource{2}, 1, [&](Configuration const& x, Acc& a) {
    a.sum += x.value(b->identity());
    a.prod += x.value(b->identity()) * x.value(t1);
    ++a.n;
  });
  EXPECT_NEAR(acc.sum / 1e5, 0.0, 0.02);
  EXPECT_NEAR(acc.prod / 1e5, 0.0, 0.02);
}

TEST(Density, WindowLargerThanBallIsRejected) {
  WindowPredicate p{"wide", 3, [](Configuration const&) { return true; }};
  EXPECT_THROW(empirical_density(p, 2, 10, RandomSource{1}), Error);
}

TEST(Density, WorkerCountDoesNotChangeEstimate) {
  WindowPredicate p{"pdeg0", 1, [](Configuration const& x) { return pdegree(x, x.ball().identity()) == 0; }};
  auto a = empirical_density(p, 1, 5000, RandomSource{8}, 1);
  auto b = empirical_density(p, 1, 5000, RandomSource{8}, 3);
  EXPECT_EQ(a.hits, b.hits);
  WindowPredicate given{"x(e)=1", 0, [](Configuration const& x) { return x.value(x.ball().identity()) == 1; }};
  auto c = conditional_density(p, given, 1, 3000, RandomSource{8}, 1);
  auto d = conditional_density(p, given, 1, 3000, RandomSource{8}, 4);
  EXPECT_EQ(c.hits, d.hits);
  EXPECT_EQ(c.n, 3000u);
}

// Binomial(4, 1/2) oracle for the p-degree of the root.
TEST(Density, RootPdegreeZeroAndFourAreOneSixteenth) {
  double sigma = std::sqrt((1.0 / 16) * (15.0 / 16) / 40000);
  for (int d : {0, 4}) {
    WindowPredicate p{"pdeg", 1, [d](Configuration const& x) { return pdegree(x, x.ball().identity()) == d; }};
    auto e = empirical_density(p, 1, 40000, RandomSource{11});
    EXPECT_NEAR(e.estimate, 1.0 / 16, 3 * sigma) << d;
  }
}

// Shift invariance: a radius-1 predicate and its translate by a generator.
TEST(Density, ShiftPreservesDensity) {
  auto b = make_ball(f2(), 3);
  Word g = Word::generator(f2(), 1, 1);
  VertexId t1 = b->neighbour(b->identity(), Letter{0, 1});
  WindowPredicate p{"x(e)=x(a)", 1, [t1](Configuration const& x) {
                      return x.value(x.ball().identity()) == x.value(t1);
                    }};
  WindowPredicate q{"shifted", 2, [t1, g](Configuration const& x) {
                      auto y = x.shift(g);
                      return y.value(y.ball().identity()) == y.value(t1);
                    }};
  auto a = empirical_density(p, 3, 20000, RandomSource{4});
  auto c = empirical_density(q, 3, 20000, RandomSource{5});
  double sigma = std::sqrt(0.25 / 20000);
  EXPECT_LE(std::abs(a.estimate - c.estimate), 4 * std::sqrt(2.0) * sigma);
}
