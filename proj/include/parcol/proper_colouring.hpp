// List colouring of the secondary graph of cliques and proper colouring of
// the doubled space, over a greedy base colouring that separates x from
// g_i x for sixteen offsets g_i.

#ifndef PARCOL_PROPER_COLOURING_HPP_
#define PARCOL_PROPER_COLOURING_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parcol/arrow.hpp"
#include "parcol/config_space.hpp"
#include "parcol/measure_audit.hpp"
#include "parcol/rational.hpp"
#include "parcol/rule.hpp"

namespace parcol {

inline constexpr int kBasePalette = 17;

// g1..g4 = T1 T2^-1, T1^-1 T2, T2 T1^-1, T2^-1 T1, then the twelve
// non-trivial products g_i g_j in (i, j) order.
inline std::vector<Word> offsets16(Presentation const& p = Presentation::free_group(2)) {
  check_f2(p);
  Word t1 = Word::generator(p, 0, 1);
  Word t2 = Word::generator(p, 1, 1);
  std::vector<Word> g{t1 * t2.inverse(), t1.inverse() * t2, t2 * t1.inverse(), t2.inverse() * t1};
  std::vector<Word> out = g;
  for (auto const& a : g) {
    for (auto const& b : g) {
      Word ab = a * b;
      if (!ab.is_identity()) {
        out.push_back(ab);
      }
    }
  }
  return out;
}

struct BaseColouring {
  BallPtr ball;
  std::vector<std::int8_t> colour;  // -1 outside the coloured region
  int palette = 0;                  // number of colours used

  int at(VertexId v) const { return colour[static_cast<std::size_t>(v)]; }
  std::uint32_t palette_mask() const { return palette == 0 ? 0U : (1U << palette) - 1U; }
};

// Smallest colour not taken by an already coloured g_i x, visiting vertices
// in `order` (default: id order, i.e. length then lex).
inline BaseColouring greedy_base_colouring(BallPtr const& ball, std::vector<VertexId> const& order = {}) {
  if (ball->radius() < 5) {
    throw Error("the base colouring needs radius >= 5");
  }
  auto offs = offsets16(ball->presentation());
  std::vector<std::vector<int>> paths;
  for (auto const& g : offs) {
    paths.push_back(ball->step_path(g));
  }
  BaseColouring b{ball, std::vector<std::int8_t>(ball->size(), -1), 0};
  auto colour_one = [&](VertexId v) {
    std::uint32_t used = 0;
    for (auto const& path : paths) {
      VertexId cur = v;
      for (int s : path) {
        cur = ball->neighbour(cur, s);
        if (cur == kNone) {
          break;
        }
      }
      if (cur != kNone && b.colour[static_cast<std::size_t>(cur)] >= 0) {
        used |= 1U << b.colour[static_cast<std::size_t>(cur)];
      }
    }
    int c = std::countr_one(used);
    if (c >= kBasePalette) {
      throw Error("greedy colouring ran out of colours");
    }
    b.colour[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(c);
    b.palette = std::max(b.palette, c + 1);
  };
  if (order.empty()) {
    for (VertexId v = 0; v < static_cast<VertexId>(ball->size()); ++v) {
      colour_one(v);
    }
  } else {
    if (order.size() != ball->size()) {
      throw Error("colouring order must list every vertex once");
    }
    for (VertexId v : order) {
      colour_one(v);
    }
  }
  return b;
}

// Pairs (x, g_i x) inside the ball with equal colours.
inline std::size_t offset_conflicts(BaseColouring const& b) {
  auto offs = offsets16(b.ball->presentation());
  std::size_t bad = 0;
  for (auto const& g : offs) {
    auto path = b.ball->step_path(g);
    for (VertexId v = 0; v < static_cast<VertexId>(b.ball->size()); ++v) {
      VertexId u = b.ball->apply(path, g, v);
      if (u != kNone && b.at(u) == b.at(v)) {
        ++bad;
      }
    }
  }
  return bad;
}

// Base colours of w's two candidates.
inline std::array<int, 2> list_assignment(Configuration const& x, BaseColouring const& b, VertexId w) {
  auto [z1, z2] = candidates(x, w);
  return {b.at(z1), b.at(z2)};
}

// ---------------------------------------------------------------------------
// Secondary graph: x ~ y when they share a potential arrow target z.

struct SecondaryGraph {
  BallPtr ball;
  int vertex_radius = 0;                     // vertices: |x| <= vertex_radius
  std::vector<VertexId> centres;             // z with |z| <= vertex_radius + 1
  std::vector<std::vector<VertexId>> cliques;  // members of the clique centred at centres[i]

  bool is_vertex(VertexId v) const { return v != kNone && ball->length(v) <= vertex_radius; }

  // Each edge once, from its clique.
  template <typename F>
  void for_each_edge(F&& f) const {
    for (auto const& c : cliques) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) {
          if (is_vertex(c[i]) && is_vertex(c[j])) {
            f(c[i], c[j]);
          }
        }
      }
    }
  }
};

// Cliques centred at every z with |z| <= R - 1; vertices excluded by
// `excluded` (the Q-proxy) belong to no clique.
inline SecondaryGraph secondary_graph(Configuration const& x,
                                      std::function<bool(VertexId)> const& excluded = nullptr) {
  Ball const& ball = x.ball();
  check_f2(ball.presentation());
  SecondaryGraph g{x.ball_ptr(), ball.radius() - 2, {}, {}};
  if (g.vertex_radius < 0) {
    return g;
  }
  auto const& p = ball.presentation();
  for (VertexId z = 0; z < static_cast<VertexId>(ball.count_within(ball.radius() - 1)); ++z) {
    std::vector<VertexId> members;
    for (int i = 1; i <= 2; ++i) {
      for (int sign : {+1, -1}) {
        VertexId y = ball.neighbour(z, arrow_step(p, i, sign));
        if (x.value(y) == -sign && !(excluded && excluded(y))) {
          members.push_back(y);
        }
      }
    }
    std::sort(members.begin(), members.end());
    g.centres.push_back(z);
    g.cliques.push_back(std::move(members));
  }
  return g;
}

struct ProperReport {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t list_violations = 0;
  std::size_t conflicts = 0;
  std::vector<std::pair<VertexId, VertexId>> examples;  // first few conflicting pairs

  bool ok() const { return list_violations == 0 && conflicts == 0; }
};

// Colour outside the vertex's list, or equal colours across an edge.
inline ProperReport check_proper_list(SecondaryGraph const& g, std::vector<std::array<int, 2>> const& lists,
                                      std::vector<int> const& colouring) {
  ProperReport r;
  for (VertexId v = 0; v < static_cast<VertexId>(g.ball->size()); ++v) {
    if (!g.is_vertex(v)) {
      continue;
    }
    auto const& l = lists.at(static_cast<std::size_t>(v));
    if (l[0] < 0 || l[1] < 0) {
      throw Error("vertex " + g.ball->word(v).to_string() + " has no list");
    }
    ++r.vertices;
    int c = colouring.at(static_cast<std::size_t>(v));
    if (c != l[0] && c != l[1]) {
      ++r.list_violations;
      if (r.examples.size() < 8) {
        r.examples.emplace_back(v, v);
      }
    }
  }
  g.for_each_edge([&](VertexId a, VertexId b) {
    ++r.edges;
    if (colouring[static_cast<std::size_t>(a)] == colouring[static_cast<std::size_t>(b)]) {
      ++r.conflicts;
      if (r.examples.size() < 8) {
        r.examples.emplace_back(a, b);
      }
    }
  });
  return r;
}

inline std::vector<std::array<int, 2>> all_lists(Configuration const& x, BaseColouring const& b) {
  Ball const& ball = x.ball();
  std::vector<std::array<int, 2>> out(ball.size(), {-1, -1});
  for (VertexId v = 0; v < static_cast<VertexId>(ball.count_within(ball.radius() - 1)); ++v) {
    out[static_cast<std::size_t>(v)] = list_assignment(x, b, v);
  }
  return out;
}

// x gets the base colour of its arrow target, for |x| <= R - 2.
inline std::vector<int> arrows_to_list_colouring(Colouring const& arrows, BaseColouring const& b,
                                                 Configuration const& x) {
  Ball const& ball = x.ball();
  auto audit = mass_audit(arrows, x);
  if (audit.crowded > 0) {
    throw Error("arrow colouring has " + std::to_string(audit.crowded) + " crowded interior vertices");
  }
  std::vector<int> out(ball.size(), -1);
  for (VertexId v = 0; v < static_cast<VertexId>(ball.count_within(ball.radius() - 2)); ++v) {
    out[static_cast<std::size_t>(v)] = b.at(arrow_target(x, arrows, v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Calibration of N: every used colour must appear at an odd distance <= N.

class ColourCover {
 public:
  explicit ColourCover(BaseColouring const& b) : b_(b), cache_(b.ball->size(), kUnknown) {}

  // Smallest odd N with every palette colour among {u x : |u| odd, |u| <= N};
  // kNever if none up to R - |x|.
  int radius(VertexId x) const {
    auto& c = cache_[static_cast<std::size_t>(x)];
    if (c == kUnknown) {
      c = static_cast<std::int8_t>(compute(x));
    }
    return c;
  }

  bool in_q(VertexId x, int n) const { return radius(x) > n; }
  BaseColouring const& base() const { return b_; }

  static constexpr int kNever = 127;

 private:
  static constexpr std::int8_t kUnknown = -1;

  int compute(VertexId x) const {
    Ball const& ball = *b_.ball;
    std::uint32_t want = b_.palette_mask();
    std::uint32_t seen = 0;
    int limit = ball.radius() - ball.length(x);
    int steps = ball.num_steps();
    // Non-backtracking walk on the tree: (vertex, step that reached it).
    std::vector<std::pair<VertexId, int>> frontier{{x, -1}}, next;
    auto const& p = ball.presentation();
    for (int d = 1; d <= limit; ++d) {
      next.clear();
      for (auto [v, from] : frontier) {
        for (int s = 0; s < steps; ++s) {
          if (from >= 0 && p.step_index(p.inverse(p.steps()[static_cast<std::size_t>(from)])) == s) {
            continue;
          }
          VertexId u = ball.neighbour(v, s);
          if (u == kNone) {
            continue;
          }
          next.emplace_back(u, s);
          if (d % 2 == 1) {
            seen |= 1U << b_.at(u);
          }
        }
      }
      if (d % 2 == 1 && seen == want) {
        return d;
      }
      frontier.swap(next);
    }
    return kNever;
  }

  BaseColouring const& b_;
  mutable std::vector<std::int8_t> cache_;
};

struct CalibrationLevel {
  int n = 0;
  std::uint64_t sampled = 0;
  std::uint64_t failed = 0;
  double fraction() const { return sampled == 0 ? 1.0 : static_cast<double>(failed) / static_cast<double>(sampled); }
};

struct Calibration {
  bool success = false;
  int n = -1;                   // calibrated odd N
  Rational epsilon;
  double achieved = 1.0;        // failing fraction at n
  int best_n = -1;              // smallest failing fraction over all N tried
  double best_epsilon = 1.0;
  int palette = 0;
  std::vector<CalibrationLevel> levels;
};

// Sample points: |x| <= R - N, every k-th vertex so that at most `samples`
// are visited.
inline Calibration calibrate_N(ColourCover const& cover, Rational const& epsilon, std::uint64_t samples) {
  if (epsilon <= 0 || epsilon > 1) {
    throw Error("epsilon must lie in (0, 1]");
  }
  Ball const& ball = *cover.base().ball;
  Calibration c;
  c.epsilon = epsilon;
  c.palette = cover.base().palette;
  for (int n = 1; n <= ball.radius(); n += 2) {
    CalibrationLevel lvl{n, 0, 0};
    std::uint64_t pool = ball.count_within(ball.radius() - n);
    std::uint64_t stride = std::max<std::uint64_t>(1, (pool + samples - 1) / std::max<std::uint64_t>(samples, 1));
    for (std::uint64_t v = 0; v < pool; v += stride) {
      ++lvl.sampled;
      lvl.failed += cover.in_q(static_cast<VertexId>(v), n) ? 1 : 0;
    }
    c.levels.push_back(lvl);
    if (c.best_n < 0 || lvl.fraction() < c.best_epsilon) {
      c.best_n = n;
      c.best_epsilon = lvl.fraction();
    }
    if (Rational(Integer(lvl.failed)) <= epsilon * Integer(lvl.sampled)) {
      c.success = true;
      c.n = n;
      c.achieved = lvl.fraction();
      break;
    }
  }
  return c;
}

// Fraction of clique centres z (with |z| <= R - N - 1) whose clique holds a
// Q-proxy point.
struct CliqueQ {
  std::uint64_t centres = 0;
  std::uint64_t touching = 0;
  CliqueQ& operator+=(CliqueQ const& o) {
    centres += o.centres;
    touching += o.touching;
    return *this;
  }
  double fraction() const { return centres == 0 ? 0.0 : static_cast<double>(touching) / static_cast<double>(centres); }
};

inline CliqueQ clique_touches_q(Configuration const& x, ColourCover const& cover, int n) {
  Ball const& ball = x.ball();
  auto const& p = ball.presentation();
  CliqueQ r;
  int lim = ball.radius() - n - 1;
  if (lim < 0) {
    return r;
  }
  for (VertexId z = 0; z < static_cast<VertexId>(ball.count_within(lim)); ++z) {
    ++r.centres;
    bool touch = false;
    for (int i = 1; i <= 2 && !touch; ++i) {
      for (int sign : {+1, -1}) {
        VertexId y = ball.neighbour(z, arrow_step(p, i, sign));
        if (x.value(y) == -sign && cover.in_q(y, n)) {
          touch = true;
          break;
        }
      }
    }
    r.touching += touch ? 1 : 0;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Doubled space: site v is x in the first copy, site |B| + v is rho(x).

enum class EdgeFamily { Secondary, Cross, Copy2 };

inline std::string to_string(EdgeFamily f) {
  switch (f) {
    case EdgeFamily::Secondary: return "secondary";
    case EdgeFamily::Cross: return "cross";
    case EdgeFamily::Copy2: return "copy2";
  }
  return "?";
}

class DoubledGraph {
 public:
  using Site = std::size_t;

  DoubledGraph(Configuration const& x, ColourCover const& cover, int n)
      : x_(x), cover_(cover), n_(n), ball_(x.ball_ptr()) {
    check_f2(ball_->presentation());
    if (n < 1 || n % 2 == 0) {
      throw Error("N must be a positive odd integer");
    }
    if (ball_->radius() < 2 * n + 12) {
      throw Error("radius " + std::to_string(ball_->radius()) + " is too small for N = " + std::to_string(n) +
                  " (needs " + std::to_string(2 * n + 12) + ")");
    }
    core_radius_ = ball_->radius() - (2 * n + 10);
    // Offsets of length <= 2N+10, split by parity.
    auto offsets = make_ball(ball_->presentation(), 2 * n + 10);
    for (VertexId u = 1; u < static_cast<VertexId>(offsets->size()); ++u) {
      Word w = offsets->word(u);
      if (w.length() % 2 == 0) {
        even_.push_back(ball_->step_path(w));
        even_words_.push_back(w);
      } else if (w.length() <= n) {
        odd_.push_back(ball_->step_path(w));
        odd_words_.push_back(w);
      }
    }
    // Secondary neighbours: at most 3 others in each of 2 cliques.
    degree_bound_ = 6 + odd_.size() + even_.size() + odd_.size();
  }

  std::size_t vertices() const { return ball_->size(); }
  Site sites() const { return 2 * ball_->size(); }
  Site rho(Site s) const { return s < vertices() ? s + vertices() : s - vertices(); }
  VertexId vertex(Site s) const { return static_cast<VertexId>(s % vertices()); }
  bool second(Site s) const { return s >= vertices(); }
  int n() const { return n_; }
  int core_radius() const { return core_radius_; }
  bool in_core(Site s) const { return ball_->length(vertex(s)) <= core_radius_; }
  bool in_q(VertexId v) const { return cover_.in_q(v, n_); }
  std::size_t degree_bound() const { return degree_bound_; }
  Configuration const& config() const { return x_; }
  BaseColouring const& base() const { return cover_.base(); }

  // f(neighbour site, family) for every edge at a core site.
  template <typename F>
  void for_each_neighbour(Site s, F&& f) const {
    if (!in_core(s)) {
      throw Error("adjacency is only available on the core");
    }
    VertexId v = vertex(s);
    auto const& p = ball_->presentation();
    if (!second(s)) {
      if (in_q(v)) {
        return;
      }
      // Clique-mates through each candidate target.
      auto [z1, z2] = candidates(x_, v);
      for (VertexId z : {z1, z2}) {
        for (int i = 1; i <= 2; ++i) {
          for (int sign : {+1, -1}) {
            VertexId y = ball_->neighbour(z, arrow_step(p, i, sign));
            if (y != v && x_.value(y) == -sign && !in_q(y)) {
              f(static_cast<Site>(y), EdgeFamily::Secondary);
            }
          }
        }
      }
      for (std::size_t k = 0; k < odd_.size(); ++k) {
        VertexId z = ball_->apply(odd_[k], odd_words_[k], v);
        if (cross_ok(v, z1, z2, z)) {
          f(rho(static_cast<Site>(z)), EdgeFamily::Cross);
        }
      }
      return;
    }
    int bv = base().at(v);
    for (std::size_t k = 0; k < even_.size(); ++k) {
      VertexId y = ball_->apply(even_[k], even_words_[k], v);
      if (base().at(y) != bv) {
        f(rho(static_cast<Site>(y)), EdgeFamily::Copy2);
      }
    }
    // Cross edges arriving from first-copy x with v at odd distance <= N.
    for (std::size_t k = 0; k < odd_.size(); ++k) {
      VertexId xv = ball_->apply(odd_[k], odd_words_[k], v);
      if (in_q(xv)) {
        continue;
      }
      auto [z1, z2] = candidates(x_, xv);
      if (cross_ok(xv, z1, z2, v)) {
        f(static_cast<Site>(xv), EdgeFamily::Cross);
      }
    }
  }

  std::size_t degree(Site s) const {
    std::size_t d = 0;
    for_each_neighbour(s, [&](Site, EdgeFamily) { ++d; });
    return d;
  }

 private:
  bool cross_ok(VertexId xv, VertexId z1, VertexId z2, VertexId z) const {
    (void)xv;
    int bz = base().at(z);
    return bz != base().at(z1) && bz != base().at(z2);
  }

  Configuration const& x_;
  ColourCover const& cover_;
  int n_;
  BallPtr ball_;
  int core_radius_ = 0;
  std::vector<std::vector<int>> even_, odd_;
  std::vector<Word> even_words_, odd_words_;
  std::size_t degree_bound_ = 0;
};

struct DoubledReport {
  std::size_t core_sites = 0;
  std::size_t edges = 0;
  std::size_t conflicts = 0;
  std::size_t max_degree = 0;
  std::size_t degree_bound = 0;
  std::size_t q_vertices = 0;
  std::size_t q_with_edges = 0;
  std::array<std::size_t, 3> family_edges{};

  bool ok() const { return conflicts == 0 && q_with_edges == 0 && max_degree <= degree_bound; }
};

// Edges at core sites; an edge between two core sites is counted once.
inline DoubledReport check_proper(DoubledGraph const& g, std::vector<int> const& colouring) {
  if (colouring.size() != g.sites()) {
    throw Error("doubled colouring must cover both copies");
  }
  DoubledReport r;
  r.degree_bound = g.degree_bound();
  for (DoubledGraph::Site s = 0; s < g.sites(); ++s) {
    if (!g.in_core(s)) {
      continue;
    }
    ++r.core_sites;
    std::size_t deg = 0;
    g.for_each_neighbour(s, [&](DoubledGraph::Site t, EdgeFamily fam) {
      ++deg;
      if (g.in_core(t) && t < s) {
        return;
      }
      ++r.edges;
      ++r.family_edges[static_cast<std::size_t>(fam)];
      if (colouring[s] == colouring[t]) {
        ++r.conflicts;
      }
    });
    r.max_degree = std::max(r.max_degree, deg);
    if (!g.second(s) && g.in_q(g.vertex(s))) {
      ++r.q_vertices;
      r.q_with_edges += deg > 0 ? 1 : 0;
    }
  }
  if (r.max_degree > r.degree_bound) {
    throw Error("doubled graph degree " + std::to_string(r.max_degree) + " exceeds its bound " +
                std::to_string(r.degree_bound));
  }
  return r;
}

// First copy coloured from an arrow solution, second copy by base o rho^-1.
inline std::vector<int> doubled_colouring(DoubledGraph const& g, Colouring const& arrows) {
  std::vector<int> out(g.sites(), -1);
  Ball const& ball = g.config().ball();
  for (VertexId v = 0; v < static_cast<VertexId>(ball.size()); ++v) {
    out[g.vertices() + static_cast<std::size_t>(v)] = g.base().at(v);
    if (ball.length(v) < ball.radius()) {
      out[static_cast<std::size_t>(v)] = g.base().at(arrow_target(g.config(), arrows, v));
    }
  }
  return out;
}

struct DoubledFlowAudit {
  std::uint64_t first_copy = 0;     // core vertices of the first copy
  std::uint64_t outside_q = 0;
  std::uint64_t arrows = 0;         // induced arrows (exactly one candidate matches)
  std::uint64_t crowded_targets = 0;
  std::uint64_t centres = 0;
  std::uint64_t centres_touching_q = 0;
  Rational epsilon;

  double outflow() const { return first_copy == 0 ? 0.0 : static_cast<double>(arrows) / static_cast<double>(first_copy); }
  double clique_q_fraction() const {
    return centres == 0 ? 0.0 : static_cast<double>(centres_touching_q) / static_cast<double>(centres);
  }
};

inline DoubledFlowAudit flow_audit_doubled(DoubledGraph const& g, std::vector<int> const& colouring,
                                           Rational const& epsilon) {
  auto rep = check_proper(g, colouring);
  if (rep.conflicts > 0) {
    throw Error("colouring of the doubled graph is not proper");
  }
  Ball const& ball = g.config().ball();
  auto const& p = ball.presentation();
  DoubledFlowAudit a;
  a.epsilon = epsilon;
  std::vector<std::uint8_t> in(ball.size(), 0);
  for (VertexId v = 0; v < static_cast<VertexId>(ball.count_within(g.core_radius())); ++v) {
    ++a.first_copy;
    if (g.in_q(v)) {
      continue;
    }
    ++a.outside_q;
    auto [z1, z2] = candidates(g.config(), v);
    int k = colouring[static_cast<std::size_t>(v)];
    bool m1 = colouring[g.rho(static_cast<std::size_t>(z1))] == k;
    bool m2 = colouring[g.rho(static_cast<std::size_t>(z2))] == k;
    if (m1 != m2) {
      ++a.arrows;
      auto& c = in[static_cast<std::size_t>(m1 ? z1 : z2)];
      if (c == 1) {
        ++a.crowded_targets;
      }
      c = c < 255 ? c + 1 : c;
    }
  }
  for (VertexId z = 0; z < static_cast<VertexId>(ball.count_within(g.core_radius())); ++z) {
    ++a.centres;
    bool touch = false;
    for (int i = 1; i <= 2 && !touch; ++i) {
      for (int sign : {+1, -1}) {
        VertexId y = ball.neighbour(z, arrow_step(p, i, sign));
        if (g.config().value(y) == -sign && g.in_q(y)) {
          touch = true;
        }
      }
    }
    a.centres_touching_q += touch ? 1 : 0;
  }
  return a;
}

// Outflow at least 1 - eps against inflow at most 1 + 4 (4 eps) - 1/16.
inline TransportCertificate doubled_flow_certificate(Rational const& epsilon, Verification v) {
  TransportCertificate c;
  c.kind = CertificateKind::MassFlow;
  c.mover = "induced arrow";
  c.source = ClassExpr::whole();
  c.target = ClassExpr::whole();
  c.outflow = 1 - epsilon;
  c.inflow_bound = 1 + 4 * (4 * epsilon) - frac(1, 16);
  c.description = "induced arrows outside Q inject into clique centres away from Q";
  c.verification = v;
  return c;
}

// The bound pair on its own: (1 - eps) mu(X) <= 1 + 16 eps - 1/16 over the
// arrow classes.
inline DensityProgram doubled_flow_program(Rational const& epsilon) {
  auto cert = doubled_flow_certificate(epsilon, Verification{1, 1});
  DensityProgram p;
  p.variables = arrow_class_names();
  LinearExpr out = p.mass(cert.source);
  for (auto& a : out.coeffs) {
    a *= cert.outflow;
  }
  out.constant *= cert.outflow;
  LinearExpr in = p.zero();
  in.constant = cert.inflow_bound;
  p.constraints.push_back({out, Relation::LessEq, in, "outflow at least 1 - eps, inflow at most 1 + 16 eps - 1/16"});
  return p;
}

}  // namespace parcol

#endif  // PARCOL_PROPER_COLOURING_HPP_
