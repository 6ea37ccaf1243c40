// parcol: seeded experiments on colouring rules, printed as JSON records.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "parcol/parcol.hpp"

namespace {

using namespace parcol;

struct Options {
  std::string command;
  std::string presentation;
  std::optional<int> radius;
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> samples;
  std::string rule;
  std::string epsilon = "1/512";
  int n_levels = 2;
  int workers = 1;
  std::string out;
  std::string csv;
  std::string solver = "constructive";
  std::string colouring;
  std::optional<int> n;
};

// Everything that determines the primary artifact; workers and clocks go to
// the sidecar.
Json echo(Options const& o, int radius, std::uint64_t samples, std::string const& presentation) {
  Json s;
  s["command"] = o.command;
  s["presentation"] = presentation;
  s["radius"] = radius;
  s["seed"] = o.seed;
  s["samples"] = samples;
  s["rule"] = o.rule;
  s["epsilon"] = o.epsilon;
  s["n_levels"] = o.n_levels;
  s["solver"] = o.solver;
  s["colouring"] = o.colouring;
  s["n"] = o.n ? Json(*o.n) : Json(nullptr);
  return s;
}

struct Outcome {
  Json result;
  std::string verdict;
  bool ok = true;
};

void write_csv(Options const& o, auto&& writer) {
  if (o.csv.empty()) {
    return;
  }
  std::ofstream f(o.csv);
  if (!f) {
    throw Error("cannot write " + o.csv);
  }
  writer(f);
}

bool is_rule_file(std::string const& r) {
  return r.size() > 5 && r.substr(r.size() - 5) == ".json";
}

ColouringRule load_rule(std::string const& name, Presentation const& p, bool presentation_given) {
  if (is_rule_file(name)) {
    std::ifstream f(name);
    if (!f) {
      throw Error("cannot read rule file " + name);
    }
    Json j = Json::parse(f);
    return rule_from_json(j);
  }
  return builtin_rule(name, presentation_given ? p : builtin_presentation(name));
}

// word,class or word,layer,class rows.
Colouring read_colouring(std::string const& path, ColouringRule const& rule, BallPtr const& ball) {
  std::ifstream f(path);
  if (!f) {
    throw Error("cannot read colouring " + path);
  }
  Colouring c(ball, rule.layers());
  std::string line;
  std::getline(f, line);
  bool layered = line.find("layer") != std::string::npos;
  while (std::getline(f, line)) {
    if (line.empty()) {
      continue;
    }
    std::stringstream ss(line);
    std::string word, layer = "0", cls;
    std::getline(ss, word, ',');
    if (layered) {
      std::getline(ss, layer, ',');
    }
    std::getline(ss, cls);
    VertexId v = ball->find(Word::parse(ball->presentation(), word));
    if (v == kNone) {
      throw Error("colouring word " + word + " lies outside the ball");
    }
    c.set(v, rule.colours().index(cls), std::stoi(layer));
  }
  return c;
}

// Built-in constructive solutions on `ball`.
Colouring construct(ColouringRule const& rule, std::string const& name, BallPtr const& ball,
                    Configuration const* x) {
  if (name == "example1") {
    return example1_solve(ball);
  }
  if (name == "hausdorff") {
    return hausdorff_solve(ball);
  }
  if (name == "arrow") {
    return constructive_solve(*x);
  }
  if (name == "example1-doubled") {
    return lift_doubled(example1_solve(ball));
  }
  if (name == "example1-squared") {
    return lift_squared(example1_solve(ball), Word::generator(ball->presentation(), 0, 1), 3);
  }
  (void)rule;
  throw Error("no constructive solver for rule '" + name + "'; use --solver iterate");
}

Json class_counts(Colouring const& c, ColouringRule const& rule) {
  std::vector<std::uint64_t> n(rule.colours().size(), 0);
  for (std::size_t s = 0; s < c.sites(); ++s) {
    if (c.at_site(s) != kUncoloured) {
      ++n[static_cast<std::size_t>(c.at_site(s))];
    }
  }
  Json j;
  for (std::size_t i = 0; i < n.size(); ++i) {
    j[rule.colours().name(static_cast<ColourId>(i))] = n[i];
  }
  return j;
}

struct Context {
  Options const& o;
  Presentation p;
  bool presentation_given;
  int radius;
  std::uint64_t samples;
  RandomSource src;
};

Outcome run_solve_or_check(Context const& ctx, bool solve_only) {
  auto const& o = ctx.o;
  auto rule = load_rule(o.rule, ctx.p, ctx.presentation_given);
  auto ball = make_ball(rule.presentation(), ctx.radius);
  std::optional<Configuration> x;
  if (!rule.stationary()) {
    x = Configuration::sample(ball, ctx.src, 0);
  }
  Configuration const* xp = x ? &*x : nullptr;
  Outcome out;
  Colouring c(ball, rule.layers());
  Json solver;
  if (!o.colouring.empty()) {
    c = read_colouring(o.colouring, rule, ball);
    solver["source"] = o.colouring;
  } else if (o.solver == "constructive") {
    c = construct(rule, is_rule_file(o.rule) ? rule.name() : o.rule, ball, xp);
    solver["source"] = "constructive";
  } else if (o.solver == "iterate") {
    Colouring init(ball, rule.layers());
    for (std::size_t s = 0; s < init.sites(); ++s) {
      init.set_site(s, 0);
    }
    auto it = iterate(rule, init, 4 * ctx.radius + 8, xp);
    c = it.colouring;
    solver["source"] = "iterate";
    solver["converged"] = it.converged;
    solver["rounds"] = it.rounds;
  } else {
    throw Error("unknown solver '" + o.solver + "' (constructive or iterate)");
  }
  auto rep = check(rule, c, xp);
  out.result["rule"] = rule_to_json(rule);
  out.result["rank"] = to_json(classify_rank(rule));
  out.result["ball_size"] = ball->size();
  out.result["solver"] = solver;
  out.result["classes"] = class_counts(c, rule);
  out.result["report"] = to_json(rep, rule, *ball);
  if (rule.name() == "arrow" && x) {
    auto audit = mass_audit(c, *x);
    out.result["crowded_interior"] = audit.crowded;
    write_csv(o, [&](std::ostream& f) { write_arrows_csv(*x, c, f); });
  } else {
    write_csv(o, [&](std::ostream& f) { write_classes_csv(c, rule, f); });
  }
  out.ok = rep.satisfied();
  out.verdict = std::to_string(rep.violations.size()) + " violations on " + std::to_string(rep.interior_size) +
                " interior sites";
  if (solve_only && !out.ok) {
    out.verdict = "solver failed: " + out.verdict;
  }
  return out;
}

Json program_record(DensityProgram const& prog, FeasibilityResult const& fr) {
  Json j;
  j["program"] = to_json(prog);
  j["feasibility"] = to_json(fr, prog);
  auto b = fr.feasible ? std::nullopt : replay(prog, fr.multipliers);
  j["replay_ok"] = fr.feasible || b.has_value();
  return j;
}

std::string feasibility_verdict(FeasibilityResult const& fr) {
  return fr.feasible ? "feasible" : "infeasible: " + fr.contradiction;
}

Outcome run_audit(Context const& ctx) {
  auto const& o = ctx.o;
  Outcome out;
  if (o.rule == "example1") {
    Presentation p = ctx.presentation_given ? ctx.p : Presentation::free_group(2);
    auto rule = example1_rule(static_cast<int>(p.size()), p);
    auto ball = make_ball(p, ctx.radius);
    auto c = example1_solve(ball);
    auto rep = check(rule, c);
    auto certs = example1_certificates(c, rule);
    auto prog = translate(certs, rule.colours().names());
    auto fr = feasible(prog);
    Json cj = Json::array();
    for (auto const& k : certs) {
      cj.push_back(to_json(k));
    }
    out.result["violations"] = rep.violations.size();
    out.result["interior_size"] = rep.interior_size;
    out.result["certificates"] = cj;
    out.result.update(program_record(prog, fr));
    write_csv(o, [&](std::ostream& f) { write_classes_csv(c, rule, f); });
    out.ok = rep.satisfied() && !fr.feasible;
    out.verdict = feasibility_verdict(fr);
    return out;
  }
  if (o.rule == "hausdorff") {
    Presentation p = ctx.presentation_given ? ctx.p : Presentation::z2_z3();
    auto rule = hausdorff_rule(p);
    auto ball = make_ball(p, ctx.radius);
    auto c = hausdorff_solve(ball);
    auto rep = check(rule, c);
    auto certs = hausdorff_certificates(c);
    auto prog = translate(certs, rule.colours().names());
    auto fr = feasible(prog);
    Json cj = Json::array();
    for (auto const& k : certs) {
      cj.push_back(to_json(k));
    }
    out.result["violations"] = rep.violations.size();
    out.result["interior_size"] = rep.interior_size;
    out.result["six_piece"] = to_json(six_piece_doubling(c));
    out.result["certificates"] = cj;
    out.result.update(program_record(prog, fr));
    write_csv(o, [&](std::ostream& f) { write_classes_csv(c, rule, f); });
    out.ok = rep.satisfied() && !fr.feasible;
    out.verdict = feasibility_verdict(fr);
    return out;
  }
  if (o.rule == "arrow") {
    auto audit = sampled_mass_audit(ctx.radius, ctx.samples, ctx.src, o.workers);
    auto cert = arrow_certificate(audit);
    out.result["audit"] = to_json(audit);
    out.result["certificates"] = Json::array({to_json(cert)});
    if (!cert.verification.complete()) {
      out.ok = false;
      out.verdict = "certificate failed: crowded fraction " + std::to_string(audit.crowded_fraction());
      return out;
    }
    auto prog = translate({cert}, arrow_class_names());
    auto fr = feasible(prog);
    out.result.update(program_record(prog, fr));
    out.ok = !fr.feasible;
    out.verdict = feasibility_verdict(fr);
    return out;
  }
  throw Error("audit supports the rules example1, hausdorff and arrow");
}

Outcome run_pdeg(Context const& ctx) {
  auto law = pdegree_law(ctx.samples, ctx.samples, ctx.src, ctx.o.workers);
  Outcome out;
  out.result = to_json(law);
  std::ostringstream v;
  v << std::setprecision(4) << "P(0)=" << law.fraction(0) << " P(3|in)=" << law.conditional_fraction(3)
    << " P(4|in)=" << law.conditional_fraction(4);
  out.verdict = v.str();
  return out;
}

Outcome run_recursion() {
  auto r = chain_recursion();
  Outcome out;
  out.result = to_json(r);
  out.ok = r.no_real_residual_roots;
  out.verdict = "residual " + to_string(r.residual) + " has discriminant " + to_display_string(r.discriminant) +
                "; only fixed point in [0,1] is 0";
  return out;
}

Outcome run_offsets(Context const& ctx) {
  auto const& o = ctx.o;
  auto ball = make_ball(Presentation::free_group(2), ctx.radius);
  auto offs = offsets16(ball->presentation());
  Json oj = Json::array();
  for (auto const& w : offs) {
    oj.push_back(w.to_string());
  }
  auto base = greedy_base_colouring(ball);
  auto conflicts = offset_conflicts(base);
  Outcome out;
  out.result["offsets"] = oj;
  out.result["palette"] = base.palette;
  out.result["palette_limit"] = kBasePalette;
  out.result["conflicts"] = conflicts;
  ColourCover cover(base);
  auto eps = parse_rational(o.epsilon);
  out.result["calibration"] = to_json(calibrate_N(cover, eps, ctx.samples));
  write_csv(o, [&](std::ostream& f) {
    f << "word,colour\n";
    for (VertexId v = 0; v < static_cast<VertexId>(ball->size()); ++v) {
      if (base.at(v) >= 0) {
        f << ball->word(v).to_string() << ',' << base.at(v) << '\n';
      }
    }
  });
  out.ok = conflicts == 0 && base.palette <= kBasePalette;
  out.verdict = "base colouring with " + std::to_string(base.palette) + " colours, " + std::to_string(conflicts) +
                " offset conflicts";
  return out;
}

Outcome run_doubled(Context const& ctx) {
  auto const& o = ctx.o;
  auto eps = parse_rational(o.epsilon);
  auto ball = make_ball(Presentation::free_group(2), ctx.radius);
  auto base = greedy_base_colouring(ball);
  ColourCover cover(base);
  auto cal = calibrate_N(cover, eps, 20000);
  Outcome out;
  out.result["palette"] = base.palette;
  out.result["calibration"] = to_json(cal);

  auto prog = doubled_flow_program(eps);
  auto fr = feasible(prog);
  out.result["bound_pair"] = program_record(prog, fr);

  int n = o.n ? *o.n : cal.n;
  std::string note;
  if (cal.success) {
    // Clique-touches-Q under the calibrated proxy, over sampled configurations.
    auto total = sample_reduce<CliqueQ>(ball, ctx.samples, ctx.src, o.workers, [&](Configuration const& x, CliqueQ& a) {
      a += clique_touches_q(x, cover, cal.n);
    });
    out.result["clique_touches_q"] = to_json(total);
    out.result["clique_touches_q_bound"] = rational_json(4 * eps);
  } else {
    note = "calibration failed at radius " + std::to_string(ctx.radius) + "; no Q-proxy";
    out.ok = false;
  }
  Json graph;
  if (n < 1) {
    graph["built"] = false;
    graph["reason"] = "no N available";
  } else if (ctx.radius < 2 * n + 12) {
    graph["built"] = false;
    graph["n"] = n;
    graph["required_radius"] = 2 * n + 12;
    graph["reason"] = "the doubled graph at N = " + std::to_string(n) + " needs radius " +
                      std::to_string(2 * n + 12) + "; beyond desk scale at radius " + std::to_string(ctx.radius);
    if (note.empty()) {
      note = graph["reason"].get<std::string>();
    }
  } else {
    auto x = Configuration::sample(ball, ctx.src, 0);
    DoubledGraph g(x, cover, n);
    auto arrows = constructive_solve(x);
    auto colouring = doubled_colouring(g, arrows);
    auto rep = check_proper(g, colouring);
    graph["built"] = true;
    graph["n"] = n;
    graph["core_radius"] = g.core_radius();
    graph["report"] = to_json(rep);
    if (rep.conflicts == 0) {
      graph["flow"] = to_json(flow_audit_doubled(g, colouring, eps));
    }
    write_csv(o, [&](std::ostream& f) { write_doubled_csv(g, f); });
    if (cal.success && n != cal.n) {
      note = "N = " + std::to_string(n) + " was forced; the calibrated N is " + std::to_string(cal.n);
    }
  }
  out.result["graph"] = graph;
  out.result["note"] = note;
  out.ok = out.ok && !fr.feasible;
  out.verdict = feasibility_verdict(fr) + (note.empty() ? "" : "; " + note);
  return out;
}

Outcome run_types(Context const& ctx) {
  auto const& o = ctx.o;
  Outcome out;
  auto rep = cancellation_experiment(o.n_levels, ctx.samples, ctx.src);
  out.result["cancellation"] = to_json(rep);
  // A worked witness: two points of F2 into three, movers {1, a, A, b, B}.
  Presentation p = Presentation::free_group(2);
  std::vector<Word> movers{Word(p)};
  for (auto l : p.steps()) {
    movers.push_back(Word::reduce(p, std::array{l}));
  }
  auto w = [&](char const* s) { return Word::parse(p, s); };
  auto a = LevelSet::at_level({w("1"), w("a")});
  auto b = type_add(LevelSet::at_level({w("b")}), LevelSet::at_level({w("aa"), w("ab")}));
  Json ex;
  ex["a"] = to_json(a);
  ex["b"] = to_json(b);
  ex["movers"] = Json::array();
  for (auto const& m : movers) {
    ex["movers"].push_back(m.to_string());
  }
  auto d = equidecomposable(a, b, movers);
  ex["decomposition"] = d ? to_json(*d, a, b, movers) : Json(nullptr);
  ex["verified"] = d && verify_decomposition(a, b, *d);
  out.result["example"] = ex;
  out.ok = rep.failures == 0 && rep.successes == rep.multiple_witnessed;
  out.verdict = std::to_string(rep.successes) + "/" + std::to_string(rep.multiple_witnessed) +
                " instances with n[A] <= n[B] gave [A] <= [B]";
  return out;
}

Outcome run_prefix(Context const& ctx) {
  Presentation p = Presentation::free_group("st");
  auto ball = make_ball(p, ctx.radius);
  auto rep = verify_prefix_identities(*ball);
  Outcome out;
  out.result = to_json(rep);
  out.ok = rep.all_hold();
  out.verdict = rep.all_hold() ? "identities hold with {1} adjoined; the literal forms miss only the identity"
                               : "identity check failed";
  return out;
}

int default_radius(std::string const& cmd, std::string const& rule) {
  if (cmd == "offsets") {
    return 10;
  }
  if (cmd == "doubled") {
    return 12;
  }
  if (cmd == "prefix") {
    return 6;
  }
  if (rule == "hausdorff") {
    return 9;
  }
  return 8;
}

std::uint64_t default_samples(std::string const& cmd) {
  if (cmd == "pdeg") {
    return 100000;
  }
  if (cmd == "offsets") {
    return 20000;
  }
  if (cmd == "doubled") {
    return 20;
  }
  return 100;
}

std::string timestamp(std::chrono::system_clock::time_point t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void emit(Json const& record, Options const& o, Json const& meta) {
  std::string text = record.dump(2) + "\n";
  std::cout << text;
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      throw Error("cannot write " + o.out);
    }
    f << text;
    std::ofstream m(o.out + ".meta.json", std::ios::binary);
    m << meta.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Seeded experiments on finitary colouring rules over free-like groups."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--presentation", o.presentation, "F<k>, Z2*Z3, s:2*t:3, ...")->envname("PARCOL_PRESENTATION");
    sub->add_option("--radius", o.radius, "ball radius")->envname("PARCOL_RADIUS")->check(CLI::Range(0, 20));
    sub->add_option("--seed", o.seed, "master seed")->envname("PARCOL_SEED");
    sub->add_option("--samples", o.samples, "Monte Carlo samples or trials")->envname("PARCOL_SAMPLES");
    sub->add_option("--rule", o.rule, "built-in rule name or rule .json file")->envname("PARCOL_RULE");
    sub->add_option("--epsilon", o.epsilon, "epsilon as p/q")->envname("PARCOL_EPSILON");
    sub->add_option("--n-levels", o.n_levels, "n in n[A] <= n[B]")->envname("PARCOL_N_LEVELS")->check(CLI::Range(1, 6));
    sub->add_option("--workers", o.workers, "threads for Monte Carlo loops")->envname("PARCOL_WORKERS")->check(CLI::Range(1, 256));
    sub->add_option("--out", o.out, "JSON output path (sidecar <out>.meta.json)")->envname("PARCOL_OUT");
    sub->add_option("--csv", o.csv, "CSV table output path")->envname("PARCOL_CSV");
    sub->add_option("--solver", o.solver, "constructive or iterate")->envname("PARCOL_SOLVER");
    sub->add_option("--colouring", o.colouring, "colouring CSV (word,class) to check")->envname("PARCOL_COLOURING");
    sub->add_option("--n", o.n, "odd N for the doubled graph (default: calibrated)")->envname("PARCOL_N");
  };
  struct Cmd {
    char const* name;
    char const* help;
  };
  for (auto c : {Cmd{"solve", "run a constructive solver and check it"},
                 Cmd{"check", "check rule satisfaction of a colouring"},
                 Cmd{"audit", "transport certificates and density feasibility"},
                 Cmd{"pdeg", "Monte Carlo p-degree law"},
                 Cmd{"recursion", "crowded-chain fixed-point analysis"},
                 Cmd{"offsets", "offset family, base colouring and N calibration"},
                 Cmd{"doubled", "doubled-space graph and bound pair"},
                 Cmd{"types", "cancellation experiments and a decomposition witness"},
                 Cmd{"prefix", "prefix-set identities on a ball"}}) {
    auto* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    sub->callback([&o, name = std::string(c.name)] { o.command = name; });
  }

  auto started = std::chrono::system_clock::now();
  Json record;
  record["schema_version"] = kSchemaVersion;
  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    std::cerr << e.what() << "\n";
    record["command"] = o.command;
    record["error"] = e.what();
    record["verdict"] = "error";
    std::cout << record.dump(2) << "\n";
    return 2;
  }

  int status = 0;
  std::string presentation;
  int radius = 0;
  std::uint64_t samples = 0;
  try {
    if (o.rule.empty()) {
      o.rule = o.command == "audit" || o.command == "solve" || o.command == "check" ? "example1" : "";
    }
    radius = o.radius ? *o.radius : default_radius(o.command, o.rule);
    samples = o.samples ? *o.samples : default_samples(o.command);
    Presentation p = o.presentation.empty() ? Presentation::free_group(2) : Presentation::parse(o.presentation);
    presentation = o.presentation.empty() ? "default" : p.to_string();
    parse_rational(o.epsilon);
    Context ctx{o, p, !o.presentation.empty(), radius, samples, RandomSource{o.seed}};
    record["spec"] = echo(o, radius, samples, presentation);
    record["rng"] = std::string(RandomSource::algorithm);

    Outcome res;
    if (o.command == "solve" || o.command == "check") {
      res = run_solve_or_check(ctx, o.command == "solve");
    } else if (o.command == "audit") {
      res = run_audit(ctx);
    } else if (o.command == "pdeg") {
      res = run_pdeg(ctx);
    } else if (o.command == "recursion") {
      res = run_recursion();
    } else if (o.command == "offsets") {
      res = run_offsets(ctx);
    } else if (o.command == "doubled") {
      res = run_doubled(ctx);
    } else if (o.command == "types") {
      res = run_types(ctx);
    } else if (o.command == "prefix") {
      res = run_prefix(ctx);
    }
    record["result"] = res.result;
    record["ok"] = res.ok;
    record["verdict"] = res.verdict;
    status = res.ok ? 0 : 1;
  } catch (std::exception const& e) {
    std::cerr << "parcol: " << e.what() << "\n";
    if (!record.contains("spec")) {
      record["spec"] = echo(o, radius, samples, presentation);
    }
    record.erase("result");
    record["ok"] = false;
    record["error"] = e.what();
    record["verdict"] = "error";
    status = 2;
  }
  auto finished = std::chrono::system_clock::now();
  Json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["workers"] = o.workers;
  meta["started"] = timestamp(started);
  meta["finished"] = timestamp(finished);
  meta["elapsed_seconds"] = std::chrono::duration<double>(finished - started).count();
  try {
    emit(record, o, meta);
  } catch (std::exception const& e) {
    std::cerr << "parcol: " << e.what() << "\n";
    return 2;
  }
  return status;
}
