// Bounded level sets in X x N, type addition, equidecomposability by
// bipartite matching with singleton pieces, cancellation experiments, and
// the prefix-set identities of the free group <s, t>.

#ifndef PARCOL_TYPES_SEMIGROUP_HPP_
#define PARCOL_TYPES_SEMIGROUP_HPP_

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include "parcol/group.hpp"
#include "parcol/random.hpp"

namespace parcol {

struct LevelPoint {
  Word point;
  int level = 0;

  bool operator==(LevelPoint const& o) const { return level == o.level && point == o.point; }
  auto operator<=>(LevelPoint const& o) const {
    if (auto c = level <=> o.level; c != 0) {
      return c;
    }
    return point <=> o.point;
  }
};

class LevelSet {
 public:
  LevelSet() = default;
  explicit LevelSet(std::vector<LevelPoint> pts) : pts_(std::move(pts)) {
    for (auto const& p : pts_) {
      if (p.level < 0) {
        throw Error("levels are non-negative");
      }
    }
    std::sort(pts_.begin(), pts_.end());
    pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
  }

  static LevelSet at_level(std::vector<Word> const& points, int level = 0) {
    std::vector<LevelPoint> v;
    for (auto const& w : points) {
      v.push_back({w, level});
    }
    return LevelSet(std::move(v));
  }

  std::vector<LevelPoint> const& elements() const { return pts_; }
  std::size_t size() const { return pts_.size(); }
  bool empty() const { return pts_.empty(); }
  bool contains(LevelPoint const& p) const { return std::binary_search(pts_.begin(), pts_.end(), p); }

  std::vector<int> levels() const {
    std::vector<int> out;
    for (auto const& p : pts_) {
      if (out.empty() || out.back() != p.level) {
        out.push_back(p.level);
      }
    }
    return out;
  }

  bool operator==(LevelSet const& o) const { return pts_ == o.pts_; }

 private:
  std::vector<LevelPoint> pts_;
};

// [A] + [B] = [A u B'] with B's levels moved above A's, in order.
inline LevelSet type_add(LevelSet const& a, LevelSet const& b) {
  int base = 0;
  for (int l : a.levels()) {
    base = std::max(base, l + 1);
  }
  std::map<int, int> relabel;
  for (int l : b.levels()) {
    relabel.emplace(l, base + static_cast<int>(relabel.size()));
  }
  std::vector<LevelPoint> out = a.elements();
  for (auto const& p : b.elements()) {
    out.push_back({p.point, relabel.at(p.level)});
  }
  return LevelSet(std::move(out));
}

// n [A]: n copies of A on fresh levels.
inline LevelSet multiple(LevelSet const& a, int n) {
  if (n < 1) {
    throw Error("multiples start at 1");
  }
  LevelSet out = a;
  for (int i = 1; i < n; ++i) {
    out = type_add(out, a);
  }
  return out;
}

struct Piece {
  Word mover;
  int from_level = 0;
  int to_level = 0;
  std::vector<Word> points;  // source points at from_level
};

struct Decomposition {
  std::vector<Piece> pieces;
  // Singleton witness: source index -> (target index, index into movers).
  std::vector<std::pair<std::size_t, std::size_t>> assignment;
};

namespace detail {

// Maximum matching of A into B along edges b = g a, g in S.
inline std::vector<long> match_into(LevelSet const& a, LevelSet const& b, std::vector<Word> const& s,
                                    std::vector<std::size_t>* mover_of = nullptr) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  std::size_t na = a.size();
  Graph g(na + b.size());
  std::map<Word, std::vector<std::size_t>> b_index;
  for (std::size_t j = 0; j < b.size(); ++j) {
    b_index[b.elements()[j].point].push_back(j);
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_mover;
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      auto it = b_index.find(s[k] * a.elements()[i].point);
      if (it == b_index.end()) {
        continue;
      }
      for (std::size_t j : it->second) {
        if (edge_mover.emplace(std::make_pair(i, j), k).second) {
          boost::add_edge(i, na + j, g);
        }
      }
    }
  }
  std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(na + b.size());
  boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
  std::vector<long> out(na, -1);
  if (mover_of != nullptr) {
    mover_of->assign(na, 0);
  }
  auto none = boost::graph_traits<Graph>::null_vertex();
  for (std::size_t i = 0; i < na; ++i) {
    if (mate[i] != none) {
      auto j = mate[i] - na;
      out[i] = static_cast<long>(j);
      if (mover_of != nullptr) {
        (*mover_of)[i] = edge_mover.at({i, j});
      }
    }
  }
  return out;
}

}  // namespace detail

// A witness that A is equidecomposable with a subset of B using movers in S
// (any level move). Singleton matches are grouped into pieces by (mover,
// source level, target level); max_pieces = 0 means unlimited.
inline std::optional<Decomposition> equidecomposable(LevelSet const& a, LevelSet const& b,
                                                     std::vector<Word> const& s, std::size_t max_pieces = 0) {
  if (a.size() > b.size()) {
    return std::nullopt;
  }
  std::vector<std::size_t> mover;
  auto m = detail::match_into(a, b, s, &mover);
  if (std::any_of(m.begin(), m.end(), [](long j) { return j < 0; })) {
    return std::nullopt;
  }
  Decomposition d;
  std::map<std::tuple<std::size_t, int, int>, std::size_t> group;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto j = static_cast<std::size_t>(m[i]);
    d.assignment.emplace_back(j, mover[i]);
    auto key = std::make_tuple(mover[i], a.elements()[i].level, b.elements()[j].level);
    auto [it, fresh] = group.emplace(key, d.pieces.size());
    if (fresh) {
      d.pieces.push_back({s[mover[i]], a.elements()[i].level, b.elements()[j].level, {}});
    }
    d.pieces[it->second].points.push_back(a.elements()[i].point);
  }
  if (max_pieces > 0 && d.pieces.size() > max_pieces) {
    return std::nullopt;
  }
  return d;
}

// Pieces partition A and their images are disjoint inside B (onto B when
// `onto`).
inline bool verify_decomposition(LevelSet const& a, LevelSet const& b, Decomposition const& d, bool onto = false) {
  std::set<LevelPoint> src, img;
  for (auto const& p : d.pieces) {
    for (auto const& w : p.points) {
      if (!src.insert({w, p.from_level}).second) {
        return false;
      }
      LevelPoint t{p.mover * w, p.to_level};
      if (!b.contains(t) || !img.insert(t).second) {
        return false;
      }
    }
  }
  if (src.size() != a.size()) {
    return false;
  }
  for (auto const& p : a.elements()) {
    if (!src.count(p)) {
      return false;
    }
  }
  return !onto || img.size() == b.size();
}

// Banach-Schroeder-Bernstein on finite sets: from injections f: A -> B and
// g: B -> A build a bijection A -> B that agrees with f or with g^-1 on
// every point.
inline std::vector<std::size_t> schroeder_bernstein(std::vector<std::size_t> const& f,
                                                    std::vector<std::size_t> const& g) {
  std::size_t na = f.size();
  std::size_t nb = g.size();
  std::vector<long> f_inv(nb, -1), g_inv(na, -1);
  for (std::size_t i = 0; i < na; ++i) {
    if (f[i] >= nb || f_inv[f[i]] >= 0) {
      throw Error("f is not an injection");
    }
    f_inv[f[i]] = static_cast<long>(i);
  }
  for (std::size_t j = 0; j < nb; ++j) {
    if (g[j] >= na || g_inv[g[j]] >= 0) {
      throw Error("g is not an injection");
    }
    g_inv[g[j]] = static_cast<long>(j);
  }
  std::vector<std::size_t> h(na);
  for (std::size_t i = 0; i < na; ++i) {
    // Walk back a <- g(b) <- f(a') ... ; a chain stopping in B uses g^-1.
    std::size_t a = i;
    bool use_g = false;
    for (std::size_t steps = 0; steps <= na + nb; ++steps) {
      long b = g_inv[a];
      if (b < 0) {
        break;  // stops in A
      }
      long a2 = f_inv[static_cast<std::size_t>(b)];
      if (a2 < 0) {
        use_g = true;  // stops in B
        break;
      }
      a = static_cast<std::size_t>(a2);
      if (a == i) {
        break;  // cycle
      }
    }
    h[i] = use_g ? static_cast<std::size_t>(g_inv[i]) : f[i];
  }
  return h;
}

struct CancellationReport {
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t multiple_witnessed = 0;  // n[A] <= n[B] confirmed by the oracle
  std::uint64_t successes = 0;           // [A] <= [B] found
  std::uint64_t failures = 0;
  std::uint64_t seed = 0;
};

// Random instances on a ball fragment of F2 with movers {e, a, A, b, B}:
// B is random, and points of A are admitted while their n copies can be
// spread over S-neighbours in B without any b taking more than n copies.
inline CancellationReport cancellation_experiment(int n, std::uint64_t trials, RandomSource const& source,
                                                  int fragment_radius = 3, std::size_t max_size = 12) {
  if (n < 1) {
    throw Error("n must be at least 1");
  }
  Presentation p = Presentation::free_group(2);
  Ball frag(p, fragment_radius);
  std::vector<Word> s{Word(p)};
  for (auto l : p.steps()) {
    s.push_back(Word::reduce(p, std::array{l}));
  }
  CancellationReport r;
  r.n = n;
  r.seed = source.seed;
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto gen = source.stream(t);
    std::vector<VertexId> ids(frag.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      ids[i] = static_cast<VertexId>(i);
    }
    std::shuffle(ids.begin(), ids.end(), gen);
    std::size_t nb = 1 + gen() % max_size;
    std::vector<Word> bpts;
    std::map<Word, int> load;
    for (std::size_t i = 0; i < nb; ++i) {
      bpts.push_back(frag.word(ids[i]));
      load[bpts.back()] = 0;
    }
    std::shuffle(ids.begin(), ids.end(), gen);
    std::size_t target = 1 + gen() % max_size;
    std::vector<Word> apts;
    for (VertexId id : ids) {
      if (apts.size() >= target) {
        break;
      }
      Word a = frag.word(id);
      std::vector<Word> nbrs;
      for (auto const& g : s) {
        Word b = g * a;
        if (load.count(b)) {
          nbrs.push_back(b);
        }
      }
      std::shuffle(nbrs.begin(), nbrs.end(), gen);
      int free_slots = 0;
      for (auto const& b : nbrs) {
        free_slots += n - load[b];
      }
      if (free_slots < n) {
        continue;
      }
      int left = n;
      for (auto const& b : nbrs) {
        int take = std::min(left, n - load[b]);
        load[b] += take;
        left -= take;
      }
      apts.push_back(a);
    }
    ++r.trials;
    LevelSet A = LevelSet::at_level(apts);
    LevelSet B = LevelSet::at_level(bpts);
    if (equidecomposable(multiple(A, n), multiple(B, n), s)) {
      ++r.multiple_witnessed;
      auto d = equidecomposable(A, B, s);
      if (d && verify_decomposition(A, B, *d)) {
        ++r.successes;
      } else {
        ++r.failures;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Prefix sets in <s, t> (generator 0 = s, generator 1 = t).

inline std::vector<VertexId> prefix_set(Letter first, Ball const& ball) {
  auto const& p = ball.presentation();
  if (first.gen < 0 || first.gen >= static_cast<int>(p.size())) {
    throw Error("unknown letter");
  }
  first = p.canonical_letter(first);
  std::vector<VertexId> out;
  for (VertexId v = 1; v < static_cast<VertexId>(ball.size()); ++v) {
    Syllable sy = ball.first_syllable(v);
    Letter l = p.syllable_letter(sy.gen, sy.exp);
    if (l.gen == first.gen && l.sign == first.sign) {
      out.push_back(v);
    }
  }
  return out;
}

inline std::vector<VertexId> prefix_set(char letter, Ball const& ball) {
  return prefix_set(ball.presentation().parse_letter(letter), ball);
}

struct IdentityCheck {
  std::string name;
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  bool holds = false;                  // corrected form, with {1} on the right
  std::vector<std::string> literal_missing;  // in lhs but not in the uncorrected right side
  std::vector<std::string> literal_extra;    // in the uncorrected right side but not in lhs
};

struct IntersectionStep {
  int m = 0;
  std::size_t size = 0;
  std::size_t tail = 0;  // elements outside w(t^-1)
  bool matches = false;  // equals w(t^-1) u t^m w(t) u {t^m} on the ball
};

struct PrefixReport {
  int radius = 0;
  int checked_radius = 0;
  std::vector<IdentityCheck> identities;
  std::vector<IntersectionStep> intersections;
  bool tail_shrinks = false;

  bool all_hold() const {
    bool ok = tail_shrinks;
    for (auto const& i : identities) {
      ok = ok && i.holds;
    }
    for (auto const& s : intersections) {
      ok = ok && s.matches;
    }
    return ok;
  }
  bool literal_gap_is_identity() const {
    for (auto const& i : identities) {
      if (i.literal_missing != std::vector<std::string>{"1"} || !i.literal_extra.empty()) {
        return false;
      }
    }
    return !identities.empty();
  }
};

inline PrefixReport verify_prefix_identities(Ball const& ball) {
  auto const& p = ball.presentation();
  if (p.size() != 2 || !p.is_free()) {
    throw Error("prefix identities need the free group of rank 2");
  }
  if (ball.radius() < 3) {
    throw Error("prefix identities need radius >= 3");
  }
  int R = ball.radius();
  PrefixReport rep;
  rep.radius = R;
  rep.checked_radius = R - 1;
  using Set = std::vector<char>;
  auto empty = [&] { return Set(ball.size(), 0); };
  auto of = [&](std::vector<VertexId> const& v) {
    Set s = empty();
    for (auto x : v) {
      s[static_cast<std::size_t>(x)] = 1;
    }
    return s;
  };
  auto unite = [](Set a, Set const& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = static_cast<char>(a[i] | b[i]);
    }
    return a;
  };
  auto translate = [&](Word const& g, Set const& s) {
    Set out = empty();
    for (VertexId v = 0; v < static_cast<VertexId>(ball.size()); ++v) {
      if (s[static_cast<std::size_t>(v)]) {
        VertexId u = ball.find(g * ball.word(v));
        if (u != kNone) {
          out[static_cast<std::size_t>(u)] = 1;
        }
      }
    }
    return out;
  };
  auto single = [&](Word const& w) {
    Set s = empty();
    VertexId v = ball.find(w);
    if (v != kNone) {
      s[static_cast<std::size_t>(v)] = 1;
    }
    return s;
  };
  Set ws = of(prefix_set({0, +1}, ball));
  Set wS = of(prefix_set({0, -1}, ball));
  Set wt = of(prefix_set({1, +1}, ball));
  Set wT = of(prefix_set({1, -1}, ball));
  Word s = Word::generator(p, 0, 1);
  Word t = Word::generator(p, 1, 1);
  Word one(p);
  Set id = single(one);

  auto compare = [&](std::string name, Set const& lhs, Set const& literal_rhs) {
    IdentityCheck c;
    c.name = std::move(name);
    Set corrected = unite(literal_rhs, id);
    bool eq = true;
    for (VertexId v = 0; v < static_cast<VertexId>(ball.count_within(R - 1)); ++v) {
      auto i = static_cast<std::size_t>(v);
      c.lhs += lhs[i] ? 1 : 0;
      c.rhs += corrected[i] ? 1 : 0;
      eq = eq && lhs[i] == corrected[i];
      if (lhs[i] && !literal_rhs[i]) {
        c.literal_missing.push_back(ball.word(v).to_string());
      }
      if (!lhs[i] && literal_rhs[i]) {
        c.literal_extra.push_back(ball.word(v).to_string());
      }
    }
    c.holds = eq;
    rep.identities.push_back(std::move(c));
  };

  compare("s w(s^-1) = w(s^-1) u w(t) u w(t^-1)", translate(s, wS), unite(unite(wS, wt), wT));
  compare("t w(t^-1) = w(t^-1) u w(s) u w(s^-1)", translate(t, wT), unite(unite(wT, ws), wS));
  compare("t (w(t^-1) u w(t) u {1}) = w(s^-1) u w(s) u w(t^-1) u t w(t) u {t}",
          translate(t, unite(unite(wT, wt), id)),
          unite(unite(unite(unite(wS, ws), wT), translate(t, wt)), single(t)));

  // Intersections of w(t^-1) u t^n w(t) u {t^n}, n = 1..m.
  Set acc;
  Word tn = one;
  std::size_t prev_tail = ball.size() + 1;
  rep.tail_shrinks = true;
  for (int m = 1; m <= R - 2; ++m) {
    tn = tn * t;
    Set term = unite(unite(wT, translate(tn, wt)), single(tn));
    if (m == 1) {
      acc = term;
    } else {
      for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] = static_cast<char>(acc[i] & term[i]);
      }
    }
    IntersectionStep st;
    st.m = m;
    st.matches = true;
    for (VertexId v = 0; v < static_cast<VertexId>(ball.size()); ++v) {
      auto i = static_cast<std::size_t>(v);
      st.size += acc[i] ? 1 : 0;
      st.tail += (acc[i] && !wT[i]) ? 1 : 0;
      // Expected: w(t^-1), t^m itself, or a word beginning with t^(m+1).
      auto letters = ball.word(v).letters();
      auto t_run = static_cast<int>(
          std::find_if(letters.begin(), letters.end(), [](Letter l) { return !(l.gen == 1 && l.sign > 0); }) -
          letters.begin());
      bool expected = wT[i] || (t_run == m && static_cast<int>(letters.size()) == m) || t_run >= m + 1;
      st.matches = st.matches && (acc[i] != 0) == expected;
    }
    rep.tail_shrinks = rep.tail_shrinks && st.tail < prev_tail;
    prev_tail = st.tail;
    rep.intersections.push_back(st);
  }
  return rep;
}

}  // namespace parcol

#endif  // PARCOL_TYPES_SEMIGROUP_HPP_
