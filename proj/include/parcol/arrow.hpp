// Arrow orientation on {-1,1}^F2 with crowded/uncrowded passive colours.
//
// Point w points its arrow at T_i w when x(w) = +1 and at T_i^-1 w when
// x(w) = -1; the active colour is i. The passive colour is c when two or
// more arrows arrive, u otherwise. T1 = a (generator 0), T2 = b.

#ifndef PARCOL_ARROW_HPP_
#define PARCOL_ARROW_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/polynomial.hpp>

#include "parcol/config_space.hpp"
#include "parcol/measure_audit.hpp"
#include "parcol/rational.hpp"
#include "parcol/rule.hpp"

namespace parcol {

inline constexpr ColourId kA1u = 0;
inline constexpr ColourId kA1c = 1;
inline constexpr ColourId kA2u = 2;
inline constexpr ColourId kA2c = 3;

inline constexpr int active_of(ColourId c) { return c / 2 + 1; }
inline constexpr bool crowded_of(ColourId c) { return c % 2 == 1; }
inline constexpr ColourId arrow_colour(int active, bool crowded) {
  return static_cast<ColourId>(2 * (active - 1) + (crowded ? 1 : 0));
}

inline std::vector<std::string> arrow_class_names() { return {"a1u", "a1c", "a2u", "a2c"}; }

inline void check_f2(Presentation const& p) {
  if (p.size() != 2 || !p.is_free()) {
    throw Error("the arrow rule lives on the free group of rank 2, got " + p.to_string());
  }
}

// Step index of T_i^{sign}, i in {1, 2}.
inline int arrow_step(Presentation const& p, int i, int sign) { return p.step_index({i - 1, sign}); }

// The two possible arrow targets of w.
inline std::pair<VertexId, VertexId> candidates(Configuration const& x, VertexId w) {
  Ball const& ball = x.ball();
  check_f2(ball.presentation());
  if (ball.length(w) >= ball.radius()) {
    throw Error("vertex " + ball.word(w).to_string() + " is too close to the boundary");
  }
  int s = x.value(w);
  if (s == 0) {
    throw Error("configuration undefined at " + ball.word(w).to_string());
  }
  return {ball.neighbour(w, arrow_step(ball.presentation(), 1, s)),
          ball.neighbour(w, arrow_step(ball.presentation(), 2, s))};
}

// Number of neighbours y of w having w among their candidates.
inline int pdegree(Configuration const& x, VertexId w) {
  Ball const& ball = x.ball();
  check_f2(ball.presentation());
  if (ball.length(w) >= ball.radius()) {
    throw Error("vertex " + ball.word(w).to_string() + " is too close to the boundary");
  }
  auto const& p = ball.presentation();
  int deg = 0;
  for (int i = 1; i <= 2; ++i) {
    for (int sign : {+1, -1}) {
      // y = T_i^{sign} w reaches w by T_i^{-sign}, so it must read -sign.
      VertexId y = ball.neighbour(w, arrow_step(p, i, sign));
      deg += x.value(y) == -sign ? 1 : 0;
    }
  }
  return deg;
}

// Orientation indicators of the four neighbours of the root, bit k for
// (T1, T1^-1, T2, T2^-1) in that order.
inline unsigned root_orientation_bits(Configuration const& x) {
  Ball const& ball = x.ball();
  auto const& p = ball.presentation();
  unsigned bits = 0;
  int k = 0;
  for (int i = 1; i <= 2; ++i) {
    for (int sign : {+1, -1}) {
      VertexId y = ball.neighbour(ball.identity(), arrow_step(p, i, sign));
      bits |= (x.value(y) == -sign ? 1u : 0u) << k++;
    }
  }
  return bits;
}

struct PdegreeLaw {
  std::uint64_t samples = 0;
  std::array<std::uint64_t, 5> histogram{};
  std::array<std::uint64_t, 16> cells{};   // joint law of the four indicators
  std::uint64_t conditioned = 0;           // samples with T1 w pointing at w
  std::array<std::uint64_t, 5> conditional{};
  std::uint64_t seed = 0;

  PdegreeLaw& operator+=(PdegreeLaw const& o) {
    samples += o.samples;
    for (std::size_t i = 0; i < 5; ++i) {
      histogram[i] += o.histogram[i];
    }
    for (std::size_t i = 0; i < 16; ++i) {
      cells[i] += o.cells[i];
    }
    return *this;
  }

  double fraction(int d) const {
    return samples == 0 ? 0.0 : static_cast<double>(histogram[static_cast<std::size_t>(d)]) / static_cast<double>(samples);
  }
  double conditional_fraction(int d) const {
    return conditioned == 0 ? 0.0
                            : static_cast<double>(conditional[static_cast<std::size_t>(d)]) /
                                  static_cast<double>(conditioned);
  }
  // Pearson statistic of the 16 joint cells against the uniform law.
  double chi_square() const {
    double e = static_cast<double>(samples) / 16.0;
    double chi = 0.0;
    for (auto c : cells) {
      double d = static_cast<double>(c) - e;
      chi += d * d / e;
    }
    return chi;
  }
};

// Conditioned draws use the streams from here on.
inline constexpr std::uint64_t kConditionedStreams = std::uint64_t{1} << 40;

// p-degree of the root over `samples` configurations, and over the first
// `conditioned` configurations (in stream order) in which T1 w orients its
// candidates toward w.
inline PdegreeLaw pdegree_law(std::uint64_t samples, std::uint64_t conditioned, RandomSource const& source,
                              int workers = 1) {
  auto ball = make_ball(Presentation::free_group(2), 1);
  auto law = sample_reduce<PdegreeLaw>(ball, samples, source, workers, [](Configuration const& x, PdegreeLaw& acc) {
    unsigned bits = root_orientation_bits(x);
    ++acc.samples;
    ++acc.histogram[static_cast<std::size_t>(std::popcount(bits))];
    ++acc.cells[bits];
  });
  law.seed = source.seed;
  std::uint64_t start = kConditionedStreams;
  std::uint64_t block = std::max<std::uint64_t>(1024, 2 * conditioned + 64);
  std::vector<std::int8_t> deg;
  while (law.conditioned < conditioned) {
    deg.assign(static_cast<std::size_t>(block), -1);
    parallel_chunks(block, workers, [&](std::uint64_t lo, std::uint64_t hi) {
      for (std::uint64_t i = lo; i < hi; ++i) {
        unsigned bits = root_orientation_bits(Configuration::sample(ball, source, start + i));
        if (bits & 1u) {
          deg[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(std::popcount(bits));
        }
      }
    });
    for (std::uint64_t i = 0; i < block && law.conditioned < conditioned; ++i) {
      if (auto d = deg[static_cast<std::size_t>(i)]; d >= 0) {
        ++law.conditioned;
        ++law.conditional[static_cast<std::size_t>(d)];
      }
    }
    start += block;
  }
  return law;
}

inline ColouringRule arrow_rule(Presentation const& p = Presentation::free_group(2)) {
  check_f2(p);
  Letter t1{0, +1}, t1i{0, -1}, t2{1, +1}, t2i{1, -1};
  std::vector<Descendant> desc{{Word::reduce(p, std::array{t1})},
                               {Word::reduce(p, std::array{t1i})},
                               {Word::reduce(p, std::array{t2})},
                               {Word::reduce(p, std::array{t2i})}};
  auto wb = make_ball(p, 1);
  // Window ids of e, T1 w, T1^-1 w, T2 w, T2^-1 w.
  std::array<VertexId, 5> id{wb->identity(), wb->neighbour(0, t1), wb->neighbour(0, t1i), wb->neighbour(0, t2),
                             wb->neighbour(0, t2i)};
  ColouringRule::Spec s{"arrow",
                        p,
                        ColourSet{"a1u", "a1c", "a2u", "a2c"},
                        std::move(desc),
                        1,
                        1,
                        false,
                        2,
                        nullptr};
  s.allowed = [id](Window const& w, std::span<ColourId const> c) -> ColourMask {
    auto val = [&](int k) { return w.values[static_cast<std::size_t>(id[static_cast<std::size_t>(k)])]; };
    // Candidates: descendants 0 and 2 (T1 w, T2 w) when x(w) = +1, else 1 and 3.
    int off = val(0) > 0 ? 0 : 1;
    bool c1 = crowded_of(c[static_cast<std::size_t>(off)]);
    bool c2 = crowded_of(c[static_cast<std::size_t>(2 + off)]);
    bool allow1 = !(c1 && !c2);
    bool allow2 = !(c2 && !c1);
    // Incoming: T_i w points back iff it reads -1 and has active i;
    // T_i^-1 w points back iff it reads +1 and has active i.
    int incoming = 0;
    incoming += (val(1) < 0 && active_of(c[0]) == 1) ? 1 : 0;
    incoming += (val(2) > 0 && active_of(c[1]) == 1) ? 1 : 0;
    incoming += (val(3) < 0 && active_of(c[2]) == 2) ? 1 : 0;
    incoming += (val(4) > 0 && active_of(c[3]) == 2) ? 1 : 0;
    bool crowded = incoming >= 2;
    ColourMask m = 0;
    if (allow1) {
      m |= colour_bit(arrow_colour(1, crowded));
    }
    if (allow2) {
      m |= colour_bit(arrow_colour(2, crowded));
    }
    return m;
  };
  return ColouringRule(std::move(s));
}

// Arrow target of w under colouring c (kNone outside the ball).
inline VertexId arrow_target(Configuration const& x, Colouring const& c, VertexId w) {
  Ball const& ball = x.ball();
  return ball.neighbour(w, arrow_step(ball.presentation(), active_of(c.get(w)), x.value(w)));
}

// Every vertex points away from the identity: the candidate that does not
// cancel its first letter, preferring T1 on ties. Nothing is crowded.
inline Colouring constructive_solve(Configuration const& x) {
  Ball const& ball = x.ball();
  check_f2(ball.presentation());
  auto const& p = ball.presentation();
  Colouring c(x.ball_ptr());
  for (VertexId w = 0; w < static_cast<VertexId>(ball.size()); ++w) {
    int s = x.value(w);
    int active = 1;
    if (w != ball.identity()) {
      Syllable f = ball.first_syllable(w);
      Letter back = p.inverse(p.syllable_letter(f.gen, f.exp));
      if (back.gen == 0 && back.sign == s) {
        active = 2;
      }
    }
    c.set(w, arrow_colour(active, false));
  }
  return c;
}

struct ArrowAudit {
  std::uint64_t configurations = 0;
  std::uint64_t interior = 0;
  std::uint64_t outflow = 0;            // arrows leaving interior vertices
  std::uint64_t arrows_in_ball = 0;     // of those, landing in the ball
  std::uint64_t capacity = 0;           // interior vertices with p-degree >= 1
  std::uint64_t crowded = 0;            // interior vertices receiving >= 2 arrows
  std::uint64_t marked_crowded = 0;     // interior vertices with passive colour c
  std::array<std::uint64_t, 5> pdegree_histogram{};
  std::uint64_t seed = 0;

  ArrowAudit& operator+=(ArrowAudit const& o) {
    configurations += o.configurations;
    interior += o.interior;
    outflow += o.outflow;
    arrows_in_ball += o.arrows_in_ball;
    capacity += o.capacity;
    crowded += o.crowded;
    marked_crowded += o.marked_crowded;
    for (std::size_t i = 0; i < 5; ++i) {
      pdegree_histogram[i] += o.pdegree_histogram[i];
    }
    return *this;
  }

  Rational outflow_per_vertex() const {
    return interior == 0 ? Rational(0) : Rational(Integer(outflow), Integer(interior));
  }
  double inflow_capacity() const {
    return interior == 0 ? 0.0 : static_cast<double>(capacity) / static_cast<double>(interior);
  }
  double crowded_fraction() const {
    return interior == 0 ? 0.0 : static_cast<double>(crowded) / static_cast<double>(interior);
  }
};

// Interior: |w| <= R - 2.
inline ArrowAudit mass_audit(Colouring const& c, Configuration const& x) {
  Ball const& ball = x.ball();
  check_f2(ball.presentation());
  ArrowAudit a;
  a.configurations = 1;
  std::vector<std::uint8_t> incoming(ball.size(), 0);
  for (VertexId w = 0; w < static_cast<VertexId>(ball.size()); ++w) {
    if (ball.length(w) < ball.radius()) {
      VertexId t = arrow_target(x, c, w);
      if (t != kNone && incoming[static_cast<std::size_t>(t)] < 255) {
        ++incoming[static_cast<std::size_t>(t)];
      }
    }
  }
  int limit = ball.radius() - 2;
  for (VertexId w = 0; w < static_cast<VertexId>(ball.count_within(limit)); ++w) {
    ++a.interior;
    ++a.outflow;
    a.arrows_in_ball += arrow_target(x, c, w) != kNone ? 1 : 0;
    int d = pdegree(x, w);
    ++a.pdegree_histogram[static_cast<std::size_t>(d)];
    a.capacity += d >= 1 ? 1 : 0;
    a.crowded += incoming[static_cast<std::size_t>(w)] >= 2 ? 1 : 0;
    a.marked_crowded += crowded_of(c.get(w)) ? 1 : 0;
  }
  return a;
}

// Constructive solution on `samples` configurations, pooled.
inline ArrowAudit sampled_mass_audit(int radius, std::uint64_t samples, RandomSource const& source,
                                     int workers = 1) {
  auto ball = make_ball(Presentation::free_group(2), radius);
  auto a = sample_reduce<ArrowAudit>(ball, samples, source, workers, [](Configuration const& x, ArrowAudit& acc) {
    acc += mass_audit(constructive_solve(x), x);
  });
  a.seed = source.seed;
  return a;
}

// One unit of outflow per point against capacity 1 - P(p-degree 0) = 15/16.
// Verified when every interior vertex sends one arrow and the crowded
// fraction is within `tolerance`.
inline TransportCertificate arrow_certificate(ArrowAudit const& a, double tolerance = 0.0) {
  TransportCertificate c;
  c.kind = CertificateKind::MassFlow;
  c.mover = "arrow";
  c.source = ClassExpr::whole();
  c.target = ClassExpr::whole();
  c.outflow = 1;
  c.inflow_bound = 1 - frac(1, 16);
  c.description = "arrows inject the space into the points of positive p-degree";
  c.verification.checked = a.interior;
  bool ok = a.outflow == a.interior && a.crowded_fraction() <= tolerance;
  c.verification.passed = ok ? a.interior : a.interior - std::max<std::uint64_t>(a.crowded, 1);
  return c;
}

// ---------------------------------------------------------------------------
// Crowded-chain recursion p = (3/8) p^2 + (1/8)(3p^2 - 2p^3).

using Polynomial = boost::math::tools::polynomial<Rational>;

inline Polynomial polynomial(std::vector<Rational> coeffs) { return Polynomial(std::move(coeffs)); }

struct RecursionAnalysis {
  Polynomial map;               // f(p)
  Polynomial from_branches;     // (3/8) p^2 + (1/8)(3p^2 - 2p^3)
  Polynomial fixed_point;       // f(p) - p
  Polynomial factor;            // -p/4
  Polynomial residual;          // p^2 - 3p + 4
  Polynomial remainder;         // of fixed_point / factor
  Rational discriminant;
  bool no_real_residual_roots = false;
  std::vector<Rational> fixed_points_in_unit_interval;
  std::vector<double> trace;    // f^n(1)
  int steps_below_threshold = -1;
};

inline std::string to_string(Polynomial const& p, std::string const& var = "p") {
  std::string s;
  auto const& d = p.data();
  for (std::size_t i = d.size(); i-- > 0;) {
    Rational c = d[i];
    if (c == 0) {
      continue;
    }
    Rational a = c < 0 ? Rational(-c) : c;
    if (s.empty()) {
      s += c < 0 ? "-" : "";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    std::string mono = i == 0 ? "" : (i == 1 ? var : var + "^" + std::to_string(i));
    if (a != 1 || i == 0) {
      s += to_display_string(a) + (mono.empty() ? "" : "*");
    }
    s += mono;
  }
  return s.empty() ? "0" : s;
}

inline RecursionAnalysis chain_recursion(int max_steps = 60, double threshold = 1e-6) {
  RecursionAnalysis r;
  r.map = polynomial({0, 0, frac(3, 4), frac(-1, 4)});
  Polynomial p2 = polynomial({0, 0, 1});
  Polynomial p3 = polynomial({0, 0, 0, 1});
  r.from_branches = p2 * frac(3, 8) + (p2 * Rational(3) - p3 * Rational(2)) * frac(1, 8);
  r.fixed_point = r.map - polynomial({0, 1});
  r.factor = polynomial({0, frac(-1, 4)});
  auto qr = boost::math::tools::quotient_remainder(r.fixed_point, r.factor);
  r.residual = qr.first;
  r.remainder = qr.second;
  auto const& q = r.residual.data();
  r.discriminant = q[1] * q[1] - 4 * q[2] * q[0];
  r.no_real_residual_roots = r.discriminant < 0;
  // Real fixed points in [0,1]: the root of the factor, plus residual roots
  // when real (none here).
  r.fixed_points_in_unit_interval.push_back(0);
  double p = 1.0;
  r.trace.push_back(p);
  for (int n = 1; n <= max_steps; ++n) {
    p = (3 * p * p - p * p * p) / 4;
    r.trace.push_back(p);
    if (p < threshold && r.steps_below_threshold < 0) {
      r.steps_below_threshold = n;
    }
  }
  return r;
}

}  // namespace parcol

#endif  // PARCOL_ARROW_HPP_
