#include <random>

#include <gtest/gtest.h>

#include "parcol/measure_audit.hpp"

using namespace parcol;

namespace {

LinearExpr expr(DensityProgram const& p, std::vector<long> c, long k = 0) {
  LinearExpr e = p.zero();
  for (std::size_t i = 0; i < c.size(); ++i) {
    e.coeffs[i] = c[i];
  }
  e.constant = k;
  return e;
}

DensityProgram simplex(std::size_t n) {
  DensityProgram p;
  for (std::size_t i = 0; i < n; ++i) {
    p.variables.push_back("X" + std::to_string(i));
  }
  LinearExpr total = p.zero();
  for (auto& a : total.coeffs) {
    a = 1;
  }
  LinearExpr one = p.zero();
  one.constant = 1;
  p.constraints.push_back({total, Relation::Equal, one, "total"});
  for (std::size_t i = 0; i < n; ++i) {
    LinearExpr v = p.zero();
    v.coeffs[i] = 1;
    p.constraints.push_back({p.zero(), Relation::LessEq, v, "nonneg"});
  }
  return p;
}

bool satisfies(DensityProgram const& p, std::vector<Rational> const& x) {
  for (auto const& c : p.constraints) {
    Rational l = c.lhs.eval(x), r = c.rhs.eval(x);
    if (c.rel == Relation::Equal ? l != r : l > r) {
      return false;
    }
  }
  return true;
}

TransportCertificate verified(CertificateKind k, ClassExpr s, ClassExpr t) {
  TransportCertificate c;
  c.kind = k;
  c.source = std::move(s);
  c.target = std::move(t);
  c.verification = {10, 10};
  c.description = "test";
  return c;
}

}  // namespace

TEST(ClassExpr, Rendering) {
  EXPECT_EQ(ClassExpr::of("A").to_string(), "A");
  EXPECT_EQ(ClassExpr::not_of("A").to_string(), "X \\ A");
  EXPECT_EQ(ClassExpr::whole().to_string(), "X");
  EXPECT_EQ((ClassExpr{{"A", "B"}, true}).to_string(), "X \\ (A u B)");
}

TEST(Translate, RejectsUnverifiedAndDuplicateClasses) {
  auto c = verified(CertificateKind::Containment, ClassExpr::of("A"), ClassExpr::of("B"));
  c.verification = {10, 9};
  EXPECT_THROW(translate({c}, {"A", "B"}), Error);
  c.verification = {0, 0};
  EXPECT_THROW(translate({c}, {"A", "B"}), Error);
  EXPECT_THROW(translate({}, {"A", "A"}), Error);
  auto d = verified(CertificateKind::Containment, ClassExpr::of("Z"), ClassExpr::of("B"));
  EXPECT_THROW(translate({d}, {"A", "B"}), Error);
}

TEST(Translate, MassFlowScalesTheSource) {
  auto c = verified(CertificateKind::MassFlow, ClassExpr::of("A"), ClassExpr::whole());
  c.outflow = 2;
  c.inflow_bound = frac(1, 2);
  auto p = translate({c}, {"A", "B"});
  EXPECT_EQ(p.render(p.constraints[0]), "2*mu(A) ≤ 1/2");
  auto fr = feasible(p);
  ASSERT_TRUE(fr.feasible);
  EXPECT_LE(fr.witness[0], frac(1, 4));
}

TEST(Feasible, RandomFeasibleProgramsGetAWitness) {
  std::mt19937_64 g(4);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + g() % 4;
    auto p = simplex(n);
    // Random point of the simplex with small denominators.
    std::vector<Rational> x(n);
    Rational left = 1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      x[i] = left * frac(static_cast<long>(g() % 5), 4);
      left -= x[i];
    }
    x[n - 1] = left;
    // Constraints that x satisfies.
    for (int k = 0; k < 4; ++k) {
      LinearExpr lhs = p.zero(), rhs = p.zero();
      for (std::size_t i = 0; i < n; ++i) {
        lhs.coeffs[i] = static_cast<long>(g() % 5) - 2;
      }
      Rational v = lhs.eval(x);
      bool eq = g() % 3 == 0;
      rhs.constant = eq ? v : v + frac(static_cast<long>(g() % 3), 2);
      p.constraints.push_back({lhs, eq ? Relation::Equal : Relation::LessEq, rhs, "c"});
    }
    auto fr = feasible(p);
    ASSERT_TRUE(fr.feasible) << t;
    EXPECT_TRUE(satisfies(p, fr.witness)) << t;
  }
}

TEST(Feasible, RandomInfeasibleProgramsReplay) {
  std::mt19937_64 g(6);
  int refuted = 0;
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 2 + g() % 4;
    auto p = simplex(n);
    for (int k = 0; k < 3; ++k) {
      LinearExpr lhs = p.zero(), rhs = p.zero();
      for (std::size_t i = 0; i < n; ++i) {
        lhs.coeffs[i] = static_cast<long>(g() % 7) - 3;
      }
      rhs.constant = frac(static_cast<long>(g() % 9) - 6, 4);
      p.constraints.push_back({lhs, g() % 4 == 0 ? Relation::Equal : Relation::LessEq, rhs, "c"});
    }
    auto fr = feasible(p);
    if (fr.feasible) {
      EXPECT_TRUE(satisfies(p, fr.witness)) << t;
      continue;
    }
    ++refuted;
    auto b = replay(p, fr.multipliers);
    ASSERT_TRUE(b.has_value()) << t;
    EXPECT_GT(fr.gap, 0);
    EXPECT_FALSE(fr.contradiction.empty());
  }
  EXPECT_GT(refuted, 20);
}

TEST(Feasible, ThreeWayRotationForcesThirds) {
  DensityProgram p = simplex(3);
  p.variables = {"A1", "A2", "A3"};
  p.constraints.push_back({expr(p, {1, 0, 0}), Relation::Equal, expr(p, {0, 1, 0}), "tau"});
  p.constraints.push_back({expr(p, {0, 1, 0}), Relation::Equal, expr(p, {0, 0, 1}), "tau"});
  auto fr = feasible(p);
  ASSERT_TRUE(fr.feasible);
  EXPECT_EQ(fr.witness, (std::vector<Rational>{frac(1, 3), frac(1, 3), frac(1, 3)}));
  p.constraints.push_back({expr(p, {-1, 0, 0}, 1), Relation::LessEq, expr(p, {1, 0, 0}), "sigma"});
  fr = feasible(p);
  EXPECT_FALSE(fr.feasible);
  EXPECT_EQ(fr.contradiction, "2/3 ≤ 1/3");
  EXPECT_EQ(fr.gap, frac(1, 3));
  EXPECT_NE(render_text(p, fr).find("infeasible: 2/3 ≤ 1/3"), std::string::npos);
}

TEST(Feasible, EqualityContradictionIsPositive) {
  DensityProgram p = simplex(2);
  p.constraints.push_back({expr(p, {1, 1}), Relation::Equal, expr(p, {0, 0}, 2), "twice"});
  auto fr = feasible(p);
  EXPECT_FALSE(fr.feasible);
  EXPECT_GT(fr.gap, 0);
  EXPECT_TRUE(replay(p, fr.multipliers).has_value());
}

TEST(Replay, RejectsBadMultipliers) {
  DensityProgram p = simplex(2);
  EXPECT_FALSE(replay(p, {1}).has_value());
  EXPECT_FALSE(replay(p, {0, 0, 0}).has_value());
  EXPECT_FALSE(replay(p, {0, -1, 0}).has_value());
}

TEST(Feasible, WitnessRendering) {
  auto p = simplex(2);
  auto fr = feasible(p);
  ASSERT_TRUE(fr.feasible);
  EXPECT_EQ(render_text(p, fr).rfind("feasible: witness", 0), 0u);
}
