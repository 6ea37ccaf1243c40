// JSON records and CSV tables. Rationals are written as "p/q" strings;
// object keys keep insertion order so records diff cleanly.

#ifndef PARCOL_JSON_IO_HPP_
#define PARCOL_JSON_IO_HPP_

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "parcol/arrow.hpp"
#include "parcol/config_space.hpp"
#include "parcol/hausdorff.hpp"
#include "parcol/measure_audit.hpp"
#include "parcol/proper_colouring.hpp"
#include "parcol/rule.hpp"
#include "parcol/types_semigroup.hpp"

namespace parcol {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json rational_json(Rational const& r) { return to_fraction_string(r); }

inline Rational rational_from_json(Json const& j) {
  if (j.is_number_integer()) {
    return Rational(j.get<long long>());
  }
  if (!j.is_string()) {
    throw Error("expected a rational string \"p/q\"");
  }
  return parse_rational(j.get<std::string>());
}

// ---------------------------------------------------------------------------
// Rules

inline std::vector<std::string> builtin_rule_names() {
  return {"example1", "hausdorff", "arrow", "example1-doubled", "example1-squared"};
}

inline ColouringRule builtin_rule(std::string const& name, Presentation const& p) {
  if (name == "example1") {
    return example1_rule(static_cast<int>(p.size()), p);
  }
  if (name == "hausdorff") {
    return hausdorff_rule(p);
  }
  if (name == "arrow") {
    return arrow_rule(p);
  }
  if (name == "example1-doubled") {
    return double_space(example1_rule(static_cast<int>(p.size()), p));
  }
  if (name == "example1-squared") {
    return square_colours(example1_rule(static_cast<int>(p.size()), p), Word::generator(p, 0, 1));
  }
  throw Error("unknown built-in rule '" + name + "'");
}

// Presentation a built-in rule lives on when none is given.
inline Presentation builtin_presentation(std::string const& name) {
  return name == "hausdorff" ? Presentation::z2_z3() : Presentation::free_group(2);
}

// Document form:
//   {"builtin": "example1", "presentation": "F2"}
// or a stationary table rule
//   {"name": ..., "presentation": "F2", "colours": [...],
//    "descendants": ["a", "A", "b"], "window_radius": 0, "stationary": true,
//    "allowed": [{"descendants": ["A1", "A2", "A3"], "allowed": ["A1"]}, ...],
//    "default": ["A1", ...]}
// Descendant tuples missing from the table take "default" (empty if absent).
inline ColouringRule rule_from_json(Json const& j) {
  if (!j.is_object()) {
    throw Error("a rule document is a JSON object");
  }
  if (j.contains("builtin")) {
    auto name = j.at("builtin").get<std::string>();
    Presentation p = j.contains("presentation") ? Presentation::parse(j.at("presentation").get<std::string>())
                                                : builtin_presentation(name);
    return builtin_rule(name, p);
  }
  for (char const* key : {"name", "presentation", "colours", "descendants", "allowed"}) {
    if (!j.contains(key)) {
      throw Error(std::string("rule document lacks '") + key + "'");
    }
  }
  if (!j.value("stationary", true)) {
    throw Error("table rules must be stationary; position-dependent rules are built in");
  }
  if (j.value("window_radius", 0) != 0) {
    throw Error("a stationary table rule reads no window; window_radius must be 0");
  }
  Presentation p = Presentation::parse(j.at("presentation").get<std::string>());
  ColourSet colours(j.at("colours").get<std::vector<std::string>>());
  std::vector<Descendant> desc;
  for (auto const& d : j.at("descendants")) {
    desc.push_back({Word::parse(p, d.get<std::string>()), false});
  }
  auto mask_of = [&](Json const& list) {
    ColourMask m = 0;
    for (auto const& c : list) {
      m |= colour_bit(colours.index(c.get<std::string>()));
    }
    return m;
  };
  ColourMask fallback = j.contains("default") ? mask_of(j.at("default")) : 0;
  auto table = std::make_shared<std::map<std::vector<ColourId>, ColourMask>>();
  for (auto const& row : j.at("allowed")) {
    auto const& key = row.at("descendants");
    if (key.size() != desc.size()) {
      throw Error("table row has " + std::to_string(key.size()) + " descendant colours, expected " +
                  std::to_string(desc.size()));
    }
    std::vector<ColourId> k;
    for (auto const& c : key) {
      k.push_back(colours.index(c.get<std::string>()));
    }
    if (!table->emplace(k, mask_of(row.at("allowed"))).second) {
      throw Error("duplicate table row");
    }
  }
  ColouringRule::Spec s{j.at("name").get<std::string>(), p, colours, std::move(desc), 0, 1, true, -1, nullptr};
  s.allowed = [table, fallback](Window const&, std::span<ColourId const> c) {
    auto it = table->find(std::vector<ColourId>(c.begin(), c.end()));
    return it == table->end() ? fallback : it->second;
  };
  return ColouringRule(std::move(s));
}

// Tabulates a stationary single-layer rule; others are described without a
// table.
inline Json rule_to_json(ColouringRule const& r) {
  Json j;
  j["name"] = r.name();
  j["presentation"] = r.presentation().to_string();
  j["colours"] = r.colours().names();
  Json d = Json::array();
  for (auto const& x : r.descendants()) {
    d.push_back(x.flip ? "rho " + x.element.to_string() : x.element.to_string());
  }
  j["descendants"] = d;
  j["window_radius"] = r.window_radius();
  j["layers"] = r.layers();
  j["stationary"] = r.stationary();
  j["dependency_radius"] = r.dependency_radius();
  if (r.stationary() && r.layers() == 1) {
    Json rows = Json::array();
    std::uint64_t per_tuple = std::uint64_t{1} << r.window_ball().size();
    std::uint64_t seen = 0;
    detail::for_each_rule_input(
        r, kEnumerationBudget, [&](std::span<std::int8_t const> window, int, std::span<ColourId const> c) {
          if (seen++ % per_tuple != 0) {
            return;
          }
          Json keys = Json::array();
          for (auto id : c) {
            keys.push_back(r.colours().name(id));
          }
          Json allowed = Json::array();
          ColourMask m = r.allowed(Window{window, 0}, c);
          for (std::size_t i = 0; i < r.colours().size(); ++i) {
            if (contains(m, static_cast<ColourId>(i))) {
              allowed.push_back(r.colours().name(static_cast<ColourId>(i)));
            }
          }
          rows.push_back({{"descendants", keys}, {"allowed", allowed}});
        });
    j["allowed"] = rows;
  }
  return j;
}

inline Json to_json(RankReport const& r) {
  return {{"rank", to_string(r.rank)},
          {"cases", r.cases},
          {"empty_cases", r.empty_cases},
          {"position_dependent", r.position_dependent},
          {"first_empty", r.first_empty}};
}

inline Json to_json(ViolationReport const& rep, ColouringRule const& rule, Ball const& ball) {
  Json v = Json::array();
  for (auto const& x : rep.violations) {
    if (v.size() == 16) {
      break;
    }
    v.push_back({{"word", ball.word(x.vertex).to_string()},
                 {"layer", x.layer},
                 {"assigned", x.assigned == kUncoloured ? std::string("-") : rule.colours().name(x.assigned)},
                 {"allowed", rule.colours().describe(x.allowed)}});
  }
  Json j;
  j["rule"] = rule.name();
  j["interior_size"] = rep.interior_size;
  j["violations"] = rep.violations.size();
  j["fraction"] = rep.fraction() ? Json(*rep.fraction()) : Json(nullptr);
  j["examples"] = v;
  return j;
}

// ---------------------------------------------------------------------------
// Densities and audits

inline Json to_json(DensityEstimate const& e) {
  return {{"predicate", e.predicate}, {"n", e.n}, {"hits", e.hits},
          {"estimate", e.estimate},   {"stderr", e.std_error}, {"seed", e.seed}};
}

inline Json to_json(ArrowAudit const& a) {
  Json h = Json::array();
  for (auto c : a.pdegree_histogram) {
    h.push_back(c);
  }
  return {{"configurations", a.configurations},
          {"interior", a.interior},
          {"outflow", rational_json(a.outflow_per_vertex())},
          {"inflow_capacity", a.inflow_capacity()},
          {"crowded_fraction", a.crowded_fraction()},
          {"marked_crowded", a.marked_crowded},
          {"pdegree_histogram", h},
          {"seed", a.seed}};
}

inline Json to_json(PdegreeLaw const& l) {
  Json h = Json::array(), c = Json::array(), f = Json::array();
  for (int d = 0; d <= 4; ++d) {
    h.push_back(l.histogram[static_cast<std::size_t>(d)]);
    c.push_back(l.conditional[static_cast<std::size_t>(d)]);
    f.push_back(l.fraction(d));
  }
  return {{"samples", l.samples},
          {"pdegree_histogram", h},
          {"fractions", f},
          {"chi_square_16_cells", l.chi_square()},
          {"conditioning_event", "T1 w reads -1 (its arrow may point at w)"},
          {"conditioned", l.conditioned},
          {"conditional_histogram", c},
          {"conditional_p3", l.conditional_fraction(3)},
          {"conditional_p4", l.conditional_fraction(4)},
          {"seed", l.seed}};
}

inline Json to_json(RecursionAnalysis const& r) {
  Json fp = Json::array();
  for (auto const& x : r.fixed_points_in_unit_interval) {
    fp.push_back(rational_json(x));
  }
  Json trace = Json::array();
  for (std::size_t i = 0; i < r.trace.size() && i <= 10; ++i) {
    trace.push_back(r.trace[i]);
  }
  return {{"map", to_string(r.map)},
          {"from_branches", to_string(r.from_branches)},
          {"fixed_point_equation", to_string(r.fixed_point) + " = 0"},
          {"factor", to_string(r.factor)},
          {"residual", to_string(r.residual)},
          {"remainder", to_string(r.remainder)},
          {"discriminant", rational_json(r.discriminant)},
          {"no_real_residual_roots", r.no_real_residual_roots},
          {"fixed_points_in_unit_interval", fp},
          {"trace_head", trace},
          {"trace_final", r.trace.back()},
          {"steps", r.trace.size() - 1},
          {"steps_below_threshold", r.steps_below_threshold}};
}

inline Json to_json(ClassExpr const& e) { return e.to_string(); }

inline Json to_json(TransportCertificate const& c) {
  return {{"kind", to_string(c.kind)},
          {"mover", c.mover},
          {"source", to_json(c.source)},
          {"target", to_json(c.target)},
          {"outflow", rational_json(c.outflow)},
          {"inflow_bound", rational_json(c.inflow_bound)},
          {"checked", c.verification.checked},
          {"passed", c.verification.passed},
          {"description", c.description}};
}

inline Json to_json(LinearExpr const& e) {
  Json c = Json::array();
  for (auto const& x : e.coeffs) {
    c.push_back(rational_json(x));
  }
  return {{"coeffs", c}, {"constant", rational_json(e.constant)}};
}

inline Json to_json(DensityProgram const& p) {
  Json cs = Json::array();
  for (auto const& c : p.constraints) {
    cs.push_back({{"label", c.label},
                  {"text", p.render(c)},
                  {"lhs", to_json(c.lhs)},
                  {"relation", c.rel == Relation::Equal ? "=" : "<="},
                  {"rhs", to_json(c.rhs)}});
  }
  return {{"variables", p.variables}, {"constraints", cs}};
}

inline Json to_json(FeasibilityResult const& r, DensityProgram const& p) {
  Json j;
  j["feasible"] = r.feasible;
  if (r.feasible) {
    Json w;
    for (std::size_t i = 0; i < p.variables.size(); ++i) {
      w[p.variables[i]] = rational_json(r.witness[i]);
    }
    j["witness"] = w;
  } else {
    Json m = Json::array();
    for (auto const& x : r.multipliers) {
      m.push_back(rational_json(x));
    }
    j["multipliers"] = m;
    j["gap"] = rational_json(r.gap);
    j["chain"] = r.chain;
    j["contradiction"] = r.contradiction;
  }
  j["text"] = render_text(p, r);
  return j;
}

// ---------------------------------------------------------------------------
// Hausdorff and proper colouring

inline Json to_json(SixPieceReport const& r) {
  Json sizes = Json::array();
  auto names = six_piece_names();
  for (std::size_t i = 0; i < 6; ++i) {
    sizes.push_back({{"piece", names[i]}, {"size", r.piece_sizes[i]}});
  }
  auto pair = [](std::array<std::size_t, 2> const& a) { return Json::array({a[0], a[1]}); };
  return {{"domain_radius", r.domain_radius},
          {"core_radius", r.core_radius},
          {"domain_size", r.domain_size},
          {"pieces", sizes},
          {"unassigned", r.unassigned},
          {"overlaps", r.overlaps},
          {"partition", r.partition},
          {"core_size", r.core_size},
          {"core_covered_once", pair(r.core_covered_once)},
          {"core_uncovered", pair(r.core_uncovered)},
          {"collisions", pair(r.collisions)},
          {"remainder", pair(r.remainder)},
          {"injective", r.injective},
          {"doubles_core", r.doubles_core}};
}

inline Json to_json(ProperReport const& r) {
  return {{"vertices", r.vertices},
          {"edges", r.edges},
          {"list_violations", r.list_violations},
          {"conflicts", r.conflicts},
          {"ok", r.ok()}};
}

inline Json to_json(Calibration const& c) {
  Json lv = Json::array();
  for (auto const& l : c.levels) {
    lv.push_back({{"n", l.n}, {"sampled", l.sampled}, {"failed", l.failed}, {"fraction", l.fraction()}});
  }
  return {{"success", c.success},
          {"n", c.n},
          {"epsilon", rational_json(c.epsilon)},
          {"achieved", c.achieved},
          {"best_n", c.best_n},
          {"best_epsilon", c.best_epsilon},
          {"palette", c.palette},
          {"levels", lv}};
}

inline Json to_json(CliqueQ const& q) {
  return {{"centres", q.centres}, {"touching", q.touching}, {"fraction", q.fraction()}};
}

inline Json to_json(DoubledReport const& r) {
  return {{"core_sites", r.core_sites},
          {"edges", r.edges},
          {"edges_by_family",
           {{to_string(EdgeFamily::Secondary), r.family_edges[0]},
            {to_string(EdgeFamily::Cross), r.family_edges[1]},
            {to_string(EdgeFamily::Copy2), r.family_edges[2]}}},
          {"conflicts", r.conflicts},
          {"max_degree", r.max_degree},
          {"degree_bound", r.degree_bound},
          {"q_vertices", r.q_vertices},
          {"q_with_edges", r.q_with_edges},
          {"ok", r.ok()}};
}

inline Json to_json(DoubledFlowAudit const& a) {
  return {{"first_copy", a.first_copy},         {"outside_q", a.outside_q},
          {"arrows", a.arrows},                 {"outflow", a.outflow()},
          {"crowded_targets", a.crowded_targets}, {"centres", a.centres},
          {"centres_touching_q", a.centres_touching_q}, {"clique_q_fraction", a.clique_q_fraction()},
          {"epsilon", rational_json(a.epsilon)}};
}

// ---------------------------------------------------------------------------
// Types

inline Json to_json(LevelSet const& s) {
  Json a = Json::array();
  for (auto const& p : s.elements()) {
    a.push_back({{"point", p.point.to_string()}, {"level", p.level}});
  }
  return a;
}

inline Json to_json(Decomposition const& d, LevelSet const& a, LevelSet const& b, std::vector<Word> const& movers) {
  Json pieces = Json::array();
  for (auto const& p : d.pieces) {
    Json pts = Json::array();
    for (auto const& w : p.points) {
      pts.push_back(w.to_string());
    }
    pieces.push_back(
        {{"mover", p.mover.to_string()}, {"from_level", p.from_level}, {"to_level", p.to_level}, {"points", pts}});
  }
  Json witness = Json::array();
  for (std::size_t i = 0; i < d.assignment.size(); ++i) {
    auto const& src = a.elements()[i];
    auto const& dst = b.elements()[d.assignment[i].first];
    witness.push_back({{"element", src.point.to_string()},
                       {"level", src.level},
                       {"mover", movers[d.assignment[i].second].to_string()},
                       {"image", dst.point.to_string()},
                       {"image_level", dst.level}});
  }
  return {{"pieces", pieces}, {"witness", witness}};
}

inline Json to_json(CancellationReport const& r) {
  return {{"n", r.n},
          {"trials", r.trials},
          {"multiple_witnessed", r.multiple_witnessed},
          {"successes", r.successes},
          {"failures", r.failures},
          {"seed", r.seed}};
}

inline Json to_json(PrefixReport const& r) {
  Json ids = Json::array();
  for (auto const& i : r.identities) {
    ids.push_back({{"identity", i.name},
                   {"lhs", i.lhs},
                   {"rhs", i.rhs},
                   {"holds", i.holds},
                   {"literal_missing", i.literal_missing},
                   {"literal_extra", i.literal_extra}});
  }
  Json steps = Json::array();
  for (auto const& s : r.intersections) {
    steps.push_back({{"m", s.m}, {"size", s.size}, {"tail", s.tail}, {"matches", s.matches}});
  }
  return {{"radius", r.radius},
          {"checked_radius", r.checked_radius},
          {"identities", ids},
          {"intersections", steps},
          {"tail_shrinks", r.tail_shrinks},
          {"all_hold", r.all_hold()},
          {"literal_gap_is_identity", r.literal_gap_is_identity()}};
}

// ---------------------------------------------------------------------------
// CSV

inline void write_edges_csv(Ball const& ball, std::ostream& os) {
  auto const& p = ball.presentation();
  os << "from,generator,to\n";
  ball.for_each_edge([&](VertexId v, Letter l, VertexId u) {
    os << ball.word(v).to_string() << ',' << Word::reduce(p, std::array{l}).to_string() << ','
       << ball.word(u).to_string() << '\n';
  });
}

inline void write_classes_csv(Colouring const& c, ColouringRule const& rule, std::ostream& os) {
  Ball const& ball = c.ball();
  os << (c.layers() > 1 ? "word,layer,class\n" : "word,class\n");
  for (std::size_t s = 0; s < c.sites(); ++s) {
    ColourId k = c.at_site(s);
    if (k == kUncoloured) {
      continue;
    }
    os << ball.word(c.vertex_of(s)).to_string() << ',';
    if (c.layers() > 1) {
      os << c.layer_of(s) << ',';
    }
    os << rule.colours().name(k) << '\n';
  }
}

inline void write_arrows_csv(Configuration const& x, Colouring const& arrows, std::ostream& os) {
  Ball const& ball = x.ball();
  os << "from,to\n";
  for (VertexId v = 0; v < static_cast<VertexId>(ball.count_within(ball.radius() - 1)); ++v) {
    VertexId t = arrow_target(x, arrows, v);
    os << ball.word(v).to_string() << ',' << ball.word(t).to_string() << '\n';
  }
}

inline void write_secondary_csv(SecondaryGraph const& g, std::ostream& os) {
  os << "from,to,family\n";
  g.for_each_edge([&](VertexId a, VertexId b) {
    os << g.ball->word(a).to_string() << ',' << g.ball->word(b).to_string() << ','
       << to_string(EdgeFamily::Secondary) << '\n';
  });
}

// Sites are written as the word, with a "'" suffix on the second copy.
inline void write_doubled_csv(DoubledGraph const& g, std::ostream& os) {
  Ball const& ball = g.config().ball();
  auto name = [&](DoubledGraph::Site s) { return ball.word(g.vertex(s)).to_string() + (g.second(s) ? "'" : ""); };
  os << "from,to,family\n";
  for (DoubledGraph::Site s = 0; s < g.sites(); ++s) {
    if (!g.in_core(s)) {
      continue;
    }
    g.for_each_neighbour(s, [&](DoubledGraph::Site t, EdgeFamily f) {
      if (g.in_core(t) && t < s) {
        return;
      }
      os << name(s) << ',' << name(t) << ',' << to_string(f) << '\n';
    });
  }
}

}  // namespace parcol

#endif  // PARCOL_JSON_IO_HPP_
