// Finitary colouring rules on Cayley-ball truncations.
//
// A rule reads the colours of finitely many descendants d.x (left
// multiplication, optionally composed with a layer swap for doubled spaces)
// and optionally a cylinder window of +-1 coordinates around x, and returns
// the set of colours allowed at x. Satisfaction is checked on the interior:
// the vertices whose every read stays inside the ball.

#ifndef PARCOL_RULE_HPP_
#define PARCOL_RULE_HPP_

#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parcol/config_space.hpp"
#include "parcol/group.hpp"

namespace parcol {

using ColourId = int;
using ColourMask = std::uint64_t;

inline constexpr ColourId kUncoloured = -1;

inline constexpr ColourMask colour_bit(ColourId c) { return ColourMask{1} << c; }
inline constexpr bool contains(ColourMask m, ColourId c) { return c >= 0 && (m & colour_bit(c)) != 0; }

class ColourSet {
 public:
  ColourSet() = default;
  ColourSet(std::initializer_list<std::string> names) : ColourSet(std::vector<std::string>(names)) {}
  explicit ColourSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.size() < 2) {
      throw Error("a colour set needs at least two colours");
    }
    if (names_.size() > 64) {
      throw Error("at most 64 colours are supported");
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (names_[i] == names_[j]) {
          throw Error("duplicate colour name '" + names_[i] + "'");
        }
      }
    }
  }

  std::size_t size() const { return names_.size(); }
  std::string const& name(ColourId c) const { return names_.at(static_cast<std::size_t>(c)); }
  std::vector<std::string> const& names() const { return names_; }

  ColourId index(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) {
        return static_cast<ColourId>(i);
      }
    }
    throw Error("unknown colour '" + std::string(name) + "'");
  }

  ColourMask all() const {
    return names_.size() == 64 ? ~ColourMask{0} : colour_bit(static_cast<ColourId>(names_.size())) - 1;
  }

  std::string describe(ColourMask m) const {
    std::string out = "{";
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (contains(m, static_cast<ColourId>(i))) {
        if (out.size() > 1) {
          out += ',';
        }
        out += names_[i];
      }
    }
    return out + "}";
  }

 private:
  std::vector<std::string> names_;
};

// Descendant d.x; `flip` additionally swaps the layer (the involution rho of
// a doubled space).
struct Descendant {
  Word element;
  bool flip = false;
};

// Position data a rule may read: +-1 values indexed by the vertices of the
// rule's window ball (u.x for |u| <= window radius), and the layer.
struct Window {
  std::span<std::int8_t const> values;
  int layer = 0;
};

class ColouringRule {
 public:
  using AllowedFn = std::function<ColourMask(Window const&, std::span<ColourId const>)>;

  struct Spec {
    std::string name;
    Presentation presentation;
    ColourSet colours;
    std::vector<Descendant> descendants;
    int window_radius = 0;
    int layers = 1;
    bool stationary = true;
    int dependency_radius = -1;  // -1: derived from descendants and window
    AllowedFn allowed;
  };

  explicit ColouringRule(Spec spec) : s_(std::move(spec)) {
    if (!s_.allowed) {
      throw Error("rule '" + s_.name + "' has no allowed-set function");
    }
    if (s_.colours.size() < 2) {
      throw Error("rule '" + s_.name + "' needs at least two colours");
    }
    if (s_.layers < 1 || s_.layers > 2) {
      throw Error("rules support one or two layers");
    }
    if (s_.window_radius < 0) {
      throw Error("window radius must be non-negative");
    }
    int reach = s_.window_radius;
    for (auto const& d : s_.descendants) {
      if (!(d.element.presentation() == s_.presentation)) {
        throw Error("descendant " + d.element.to_string() + " uses another presentation");
      }
      if (d.flip && s_.layers != 2) {
        throw Error("layer-swapping descendant in a single-layer rule");
      }
      reach = std::max(reach, static_cast<int>(d.element.length()));
    }
    if (s_.dependency_radius < 0) {
      s_.dependency_radius = reach;
    } else if (s_.dependency_radius < reach) {
      throw Error("declared dependency radius is smaller than the rule's reads");
    }
    window_ball_ = make_ball(s_.presentation, s_.window_radius);
  }

  std::string const& name() const { return s_.name; }
  Presentation const& presentation() const { return s_.presentation; }
  ColourSet const& colours() const { return s_.colours; }
  std::vector<Descendant> const& descendants() const { return s_.descendants; }
  int window_radius() const { return s_.window_radius; }
  int layers() const { return s_.layers; }
  bool stationary() const { return s_.stationary; }
  int dependency_radius() const { return s_.dependency_radius; }
  Ball const& window_ball() const { return *window_ball_; }

  ColourMask allowed(Window const& w, std::span<ColourId const> colours) const {
    return s_.allowed(w, colours) & s_.colours.all();
  }

 private:
  Spec s_;
  BallPtr window_ball_;
};

// Partial colouring of `layers` copies of a ball. Site index = layer * |ball| + vertex.
class Colouring {
 public:
  explicit Colouring(BallPtr ball, int layers = 1)
      : ball_(std::move(ball)), layers_(layers),
        colours_(ball_->size() * static_cast<std::size_t>(layers), kUncoloured) {}

  Ball const& ball() const { return *ball_; }
  BallPtr const& ball_ptr() const { return ball_; }
  int layers() const { return layers_; }
  std::size_t sites() const { return colours_.size(); }

  std::size_t site(VertexId v, int layer = 0) const {
    return static_cast<std::size_t>(layer) * ball_->size() + static_cast<std::size_t>(v);
  }
  VertexId vertex_of(std::size_t site) const { return static_cast<VertexId>(site % ball_->size()); }
  int layer_of(std::size_t site) const { return static_cast<int>(site / ball_->size()); }

  ColourId get(VertexId v, int layer = 0) const { return colours_[site(v, layer)]; }
  void set(VertexId v, ColourId c, int layer = 0) { colours_[site(v, layer)] = c; }
  ColourId at_site(std::size_t s) const { return colours_[s]; }
  void set_site(std::size_t s, ColourId c) { colours_[s] = c; }

  bool operator==(Colouring const& o) const { return layers_ == o.layers_ && colours_ == o.colours_; }

 private:
  BallPtr ball_;
  int layers_;
  std::vector<ColourId> colours_;
};

struct Violation {
  std::size_t site;
  VertexId vertex;
  int layer;
  ColourId assigned;
  ColourMask allowed;
};

struct ViolationReport {
  std::size_t interior_size = 0;
  std::vector<Violation> violations;

  // Undefined on an empty interior.
  std::optional<double> fraction() const {
    if (interior_size == 0) {
      return std::nullopt;
    }
    return static_cast<double>(violations.size()) / static_cast<double>(interior_size);
  }
  bool satisfied() const { return violations.empty(); }
};

// Binds a rule to a ball (and a configuration for position-dependent rules).
class RuleEvaluator {
 public:
  RuleEvaluator(ColouringRule const& rule, BallPtr ball, Configuration const* config = nullptr)
      : rule_(rule), ball_(std::move(ball)), config_(config) {
    if (!(ball_->presentation() == rule.presentation())) {
      throw Error("ball and rule '" + rule.name() + "' use different presentations");
    }
    if (!rule.stationary() && config_ == nullptr) {
      throw Error("rule '" + rule.name() + "' reads position; a configuration is required");
    }
    if (config_ != nullptr && config_->ball().size() != ball_->size()) {
      throw Error("configuration and colouring use different balls");
    }
    for (VertexId u = 0; u < static_cast<VertexId>(rule.window_ball().size()); ++u) {
      window_words_.push_back(rule.window_ball().word(u));
      window_paths_.push_back(ball_->step_path(window_words_.back()));
    }
    for (auto const& d : rule.descendants()) {
      desc_paths_.push_back(ball_->step_path(d.element));
    }
    window_buf_.resize(window_words_.size(), 0);
    colour_buf_.resize(rule.descendants().size(), kUncoloured);
  }

  ColouringRule const& rule() const { return rule_; }

  bool is_interior(VertexId v) const {
    return ball_->length(v) <= ball_->radius() - rule_.dependency_radius();
  }

  std::vector<std::size_t> interior_sites(Colouring const& c) const {
    std::vector<std::size_t> out;
    for (int layer = 0; layer < c.layers(); ++layer) {
      for (VertexId v = 0; v < static_cast<VertexId>(ball_->size()); ++v) {
        if (is_interior(v)) {
          out.push_back(c.site(v, layer));
        }
      }
    }
    return out;
  }

  VertexId descendant_vertex(std::size_t i, VertexId v) const {
    return ball_->apply(desc_paths_[i], rule_.descendants()[i].element, v);
  }

  // Allowed set at (layer, v) given the current colouring. Throws when a
  // read falls outside the ball or hits an uncoloured descendant.
  ColourMask allowed_at(Colouring const& c, int layer, VertexId v) const {
    if (!rule_.stationary()) {
      for (std::size_t u = 0; u < window_paths_.size(); ++u) {
        VertexId at = ball_->apply(window_paths_[u], window_words_[u], v);
        if (at == kNone || !config_->defined(at)) {
          throw Error("window read at " + ball_->word(v).to_string() + " leaves the configuration");
        }
        window_buf_[u] = static_cast<std::int8_t>(config_->value(at));
      }
    }
    for (std::size_t i = 0; i < desc_paths_.size(); ++i) {
      VertexId d = descendant_vertex(i, v);
      if (d == kNone) {
        throw Error("descendant of " + ball_->word(v).to_string() + " leaves the ball");
      }
      int dl = rule_.descendants()[i].flip ? 1 - layer : layer;
      ColourId col = c.get(d, dl);
      if (col == kUncoloured) {
        throw Error("uncoloured descendant " + ball_->word(d).to_string() + " of interior vertex " +
                    ball_->word(v).to_string());
      }
      colour_buf_[i] = col;
    }
    return rule_.allowed(Window{window_buf_, layer}, colour_buf_);
  }

 private:
  ColouringRule const& rule_;
  BallPtr ball_;
  Configuration const* config_;
  std::vector<Word> window_words_;
  std::vector<std::vector<int>> window_paths_;
  std::vector<std::vector<int>> desc_paths_;
  mutable std::vector<std::int8_t> window_buf_;
  mutable std::vector<ColourId> colour_buf_;
};

// Checks c(x) in F(x, c(x_1), ..., c(x_k)) at every interior site.
inline ViolationReport check(ColouringRule const& rule, Colouring const& colouring,
                             Configuration const* config = nullptr) {
  if (colouring.layers() != rule.layers()) {
    throw Error("colouring has " + std::to_string(colouring.layers()) + " layers, rule '" +
                rule.name() + "' expects " + std::to_string(rule.layers()));
  }
  RuleEvaluator eval(rule, colouring.ball_ptr(), config);
  ViolationReport report;
  for (std::size_t s : eval.interior_sites(colouring)) {
    VertexId v = colouring.vertex_of(s);
    int layer = colouring.layer_of(s);
    ColourId assigned = colouring.at_site(s);
    if (assigned == kUncoloured) {
      throw Error("uncoloured interior vertex " + colouring.ball().word(v).to_string());
    }
    ++report.interior_size;
    ColourMask allowed = eval.allowed_at(colouring, layer, v);
    if (!contains(allowed, assigned)) {
      report.violations.push_back({s, v, layer, assigned, allowed});
    }
  }
  return report;
}

struct IterateResult {
  Colouring colouring;
  bool converged = false;
  int rounds = 0;
};

// Round-robin sweeps over `order` (default: interior sites in id order).
// A site keeps its colour when allowed, otherwise takes the first allowed
// colour. Stops after a sweep that changes nothing.
inline IterateResult iterate(ColouringRule const& rule, Colouring initial, int max_rounds,
                             Configuration const* config = nullptr,
                             std::vector<std::size_t> order = {}) {
  RuleEvaluator eval(rule, initial.ball_ptr(), config);
  if (order.empty()) {
    order = eval.interior_sites(initial);
  }
  IterateResult result{std::move(initial), false, 0};
  Colouring& c = result.colouring;
  for (int round = 0; round < max_rounds; ++round) {
    ++result.rounds;
    bool changed = false;
    for (std::size_t s : order) {
      VertexId v = c.vertex_of(s);
      ColourMask allowed = eval.allowed_at(c, c.layer_of(s), v);
      if (allowed == 0) {
        throw Error("empty allowed set at " + c.ball().word(v).to_string() + ": rule '" +
                    rule.name() + "' is not rank one");
      }
      if (!contains(allowed, c.at_site(s))) {
        c.set_site(s, std::countr_zero(allowed));
        changed = true;
      }
    }
    if (!changed) {
      result.converged = true;
      break;
    }
  }
  return result;
}

enum class Rank { One, TwoOrHigher };

struct RankReport {
  Rank rank = Rank::One;
  std::uint64_t cases = 0;
  std::uint64_t empty_cases = 0;
  bool position_dependent = false;  // allowed set varies with window or layer
  std::string first_empty;          // description of the first empty case
};

namespace detail {

// Calls f(window values, layer, colour tuple) for every point of the finite
// domain of a rule.
template <typename F>
void for_each_rule_input(ColouringRule const& rule, std::uint64_t budget, F&& f) {
  std::size_t m = rule.window_ball().size();
  std::size_t k = rule.descendants().size();
  std::uint64_t ncol = rule.colours().size();
  if (m >= 40) {
    throw Error("window alphabet too large to enumerate");
  }
  std::uint64_t windows = std::uint64_t{1} << m;
  std::uint64_t tuples = 1;
  for (std::size_t i = 0; i < k; ++i) {
    tuples *= ncol;
    if (tuples > budget) {
      throw Error("descendant colour tuples too many to enumerate");
    }
  }
  if (windows * tuples * static_cast<std::uint64_t>(rule.layers()) > budget) {
    throw Error("rule input domain too large to enumerate");
  }
  std::vector<std::int8_t> window(m);
  std::vector<ColourId> tuple(k);
  for (std::uint64_t t = 0; t < tuples; ++t) {
    std::uint64_t rest = t;
    for (std::size_t i = 0; i < k; ++i) {
      tuple[i] = static_cast<ColourId>(rest % ncol);
      rest /= ncol;
    }
    for (int layer = 0; layer < rule.layers(); ++layer) {
      for (std::uint64_t w = 0; w < windows; ++w) {
        for (std::size_t u = 0; u < m; ++u) {
          window[u] = ((w >> u) & 1U) ? 1 : -1;
        }
        f(std::span<std::int8_t const>(window), layer, std::span<ColourId const>(tuple));
      }
    }
  }
}

}  // namespace detail

inline constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 26;

// Exhaustive over all (window, layer, descendant colours).
inline RankReport classify_rank(ColouringRule const& rule) {
  RankReport r;
  ColourMask reference = 0;
  bool first_of_tuple = true;
  std::uint64_t per_tuple = (std::uint64_t{1} << rule.window_ball().size()) *
                            static_cast<std::uint64_t>(rule.layers());
  detail::for_each_rule_input(
      rule, kEnumerationBudget,
      [&](std::span<std::int8_t const> window, int layer, std::span<ColourId const> tuple) {
        first_of_tuple = (r.cases % per_tuple) == 0;
        ++r.cases;
        ColourMask m = rule.allowed(Window{window, layer}, tuple);
        if (first_of_tuple) {
          reference = m;
        } else if (m != reference) {
          r.position_dependent = true;
        }
        if (m == 0) {
          if (r.empty_cases == 0) {
            std::string d = "layer " + std::to_string(layer) + ", colours (";
            for (std::size_t i = 0; i < tuple.size(); ++i) {
              d += (i ? "," : "") + rule.colours().name(tuple[i]);
            }
            r.first_empty = d + ")";
          }
          ++r.empty_cases;
        }
      });
  r.rank = r.empty_cases == 0 ? Rank::One : Rank::TwoOrHigher;
  return r;
}

inline std::string to_string(Rank r) { return r == Rank::One ? "rank-one" : "rank-two-or-higher"; }

// F = F1 n F2 with both F_i rank one: F_i = F where F is non-empty, and the
// i-th of two fixed colours where it is empty.
inline std::pair<ColouringRule, ColouringRule> split_rank_two(ColouringRule const& rule) {
  auto make = [&](ColourId fallback, std::string suffix) {
    ColouringRule::Spec s{rule.name() + suffix, rule.presentation(), rule.colours(),
                          rule.descendants(), rule.window_radius(), rule.layers(),
                          rule.stationary(), rule.dependency_radius(), nullptr};
    s.allowed = [rule, fallback](Window const& w, std::span<ColourId const> c) {
      ColourMask m = rule.allowed(w, c);
      return m != 0 ? m : colour_bit(fallback);
    };
    return ColouringRule(std::move(s));
  };
  return {make(0, "/F1"), make(1, "/F2")};
}

// Rule on X x {a, b} (layers 0 and 1). (b,y) copies (a,y); (a,y) copies
// (b,y) when that colour obeys the base rule against the (a, z_i), and
// otherwise must differ from it.
inline ColouringRule double_space(ColouringRule const& base) {
  if (base.layers() != 1) {
    throw Error("double_space expects a single-layer rule");
  }
  if (base.colours().size() < 2) {
    throw Error("double_space needs at least two colours");
  }
  std::vector<Descendant> desc;
  desc.push_back({Word(base.presentation()), true});
  for (auto const& d : base.descendants()) {
    desc.push_back(d);
  }
  ColourMask all = base.colours().all();
  ColouringRule::Spec s{base.name() + "/doubled", base.presentation(), base.colours(), std::move(desc),
                        base.window_radius(), 2, false, base.dependency_radius(), nullptr};
  s.allowed = [base, all](Window const& w, std::span<ColourId const> c) -> ColourMask {
    ColourId partner = c[0];
    if (w.layer == 1) {
      return colour_bit(partner);
    }
    ColourMask f = base.allowed(Window{w.values, 0}, c.subspan(1));
    return contains(f, partner) ? colour_bit(partner) : (all & ~colour_bit(partner));
  };
  return ColouringRule(std::move(s));
}

// Rule with colour set C^2 (colour (p, q) has index p * |C| + q). The second
// colour of x copies the first colour of g(x); the first colour of x agrees
// with the second colour of g^-1(x) iff that colour is allowed by the base
// rule on the first colours of the descendants.
inline ColouringRule square_colours(ColouringRule const& base, Word const& g) {
  if (base.layers() != 1) {
    throw Error("square_colours expects a single-layer rule");
  }
  bool found = false;
  for (auto const& d : base.descendants()) {
    found = found || (!d.flip && d.element == g);
  }
  if (!found) {
    throw Error(g.to_string() + " is not a descendant of rule '" + base.name() + "'");
  }
  auto n = base.colours().size();
  if (n > 8) {
    throw Error("square_colours supports at most 8 base colours");
  }
  std::vector<std::string> names;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      names.push_back("(" + base.colours().name(static_cast<ColourId>(p)) + "," +
                      base.colours().name(static_cast<ColourId>(q)) + ")");
    }
  }
  auto desc = base.descendants();
  std::size_t k = desc.size();
  desc.push_back({g, false});
  desc.push_back({g.inverse(), false});
  ColouringRule::Spec s{base.name() + "/squared", base.presentation(), ColourSet(std::move(names)),
                        std::move(desc), base.window_radius(), 1, base.stationary(),
                        base.dependency_radius() + static_cast<int>(g.length()), nullptr};
  auto ni = static_cast<ColourId>(n);
  s.allowed = [base, k, ni](Window const& w, std::span<ColourId const> c) -> ColourMask {
    std::vector<ColourId> first(k);
    for (std::size_t i = 0; i < k; ++i) {
      first[i] = c[i] / ni;
    }
    ColourId second = c[k] / ni;      // first colour of g(x)
    ColourId carried = c[k + 1] % ni;  // second colour of g^-1(x)
    ColourMask f = base.allowed(w, first);
    ColourMask out = 0;
    for (ColourId p = 0; p < ni; ++p) {
      bool ok = contains(f, carried) ? p == carried : p != carried;
      if (ok) {
        out |= colour_bit(p * ni + second);
      }
    }
    return out;
  };
  return ColouringRule(std::move(s));
}

// Both copies coloured like the base colouring.
inline Colouring lift_doubled(Colouring const& base) {
  Colouring out(base.ball_ptr(), 2);
  for (VertexId v = 0; v < static_cast<VertexId>(base.ball().size()); ++v) {
    out.set(v, base.get(v), 0);
    out.set(v, base.get(v), 1);
  }
  return out;
}

// (c(x), c(g x)) on the ball of radius R - |g|, where both reads are defined.
inline Colouring lift_squared(Colouring const& base, Word const& g, std::size_t base_colours) {
  Ball const& big = base.ball();
  if (g.length() > big.radius()) {
    throw Error("lift_squared: " + g.to_string() + " is longer than the ball radius");
  }
  auto small = make_ball(big.presentation(), big.radius() - static_cast<int>(g.length()));
  Colouring out(small, 1);
  auto path = big.step_path(g);
  auto n = static_cast<ColourId>(base_colours);
  for (VertexId u = 0; u < static_cast<VertexId>(small->size()); ++u) {
    VertexId v = big.find(small->word(u));
    VertexId gv = big.apply(path, g, v);
    if (gv != kNone && base.get(v) != kUncoloured && base.get(gv) != kUncoloured) {
      out.set(u, base.get(v) * n + base.get(gv));
    }
  }
  return out;
}

inline Colouring restrict_layer(Colouring const& c, int layer) {
  Colouring out(c.ball_ptr(), 1);
  for (VertexId v = 0; v < static_cast<VertexId>(c.ball().size()); ++v) {
    out.set(v, c.get(v, layer));
  }
  return out;
}

inline Colouring project_first(Colouring const& c, std::size_t base_colours) {
  Colouring out(c.ball_ptr(), 1);
  auto n = static_cast<ColourId>(base_colours);
  for (VertexId v = 0; v < static_cast<VertexId>(c.ball().size()); ++v) {
    ColourId col = c.get(v);
    out.set(v, col == kUncoloured ? kUncoloured : col / n);
  }
  return out;
}

}  // namespace parcol

#endif  // PARCOL_RULE_HPP_
