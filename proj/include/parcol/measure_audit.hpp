// Transport certificates, their linear density programs, and exact
// feasibility by Gaussian elimination plus Fourier-Motzkin projection.

#ifndef PARCOL_MEASURE_AUDIT_HPP_
#define PARCOL_MEASURE_AUDIT_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parcol/group.hpp"
#include "parcol/rational.hpp"

namespace parcol {

// Union of colour classes, optionally complemented. The empty complemented
// expression is the whole space.
struct ClassExpr {
  std::vector<std::string> classes;
  bool complement = false;

  static ClassExpr of(std::string name) { return {{std::move(name)}, false}; }
  static ClassExpr not_of(std::string name) { return {{std::move(name)}, true}; }
  static ClassExpr whole() { return {{}, true}; }

  std::string to_string() const {
    if (classes.empty()) {
      return complement ? "X" : "{}";
    }
    std::string s;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      s += (i ? " u " : "") + classes[i];
    }
    if (classes.size() > 1 && complement) {
      s = "(" + s + ")";
    }
    return complement ? "X \\ " + s : s;
  }
};

enum class CertificateKind { Containment, Bijection, MassFlow };

inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::Containment: return "containment";
    case CertificateKind::Bijection: return "bijection";
    case CertificateKind::MassFlow: return "mass-flow";
  }
  return "?";
}

struct Verification {
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
  bool complete() const { return checked > 0 && passed == checked; }
};

// Containment: mover(source) is inside target.
// Bijection: mover maps source onto target.
// MassFlow: outflow * mu(source) <= inflow_bound (arrows leaving every point
// of source land injectively in a region of capacity inflow_bound).
struct TransportCertificate {
  CertificateKind kind = CertificateKind::Containment;
  std::string mover;
  ClassExpr source;
  ClassExpr target;
  Rational outflow = 1;
  Rational inflow_bound = 0;
  Verification verification;
  std::string description;
};

struct LinearExpr {
  std::vector<Rational> coeffs;
  Rational constant = 0;

  Rational eval(std::vector<Rational> const& x) const {
    Rational v = constant;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      v += coeffs[i] * x[i];
    }
    return v;
  }
  bool is_constant() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](Rational const& c) { return c == 0; });
  }
};

enum class Relation { LessEq, Equal };

struct Constraint {
  LinearExpr lhs;
  Relation rel = Relation::LessEq;
  LinearExpr rhs;
  std::string label;
};

struct DensityProgram {
  std::vector<std::string> variables;
  std::vector<Constraint> constraints;

  LinearExpr zero() const { return {std::vector<Rational>(variables.size()), 0}; }

  std::size_t index(std::string const& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
      if (variables[i] == name) {
        return i;
      }
    }
    throw Error("unknown colour class '" + name + "'");
  }

  LinearExpr mass(ClassExpr const& e) const {
    LinearExpr out = zero();
    for (auto const& c : e.classes) {
      out.coeffs[index(c)] += 1;
    }
    if (e.complement) {
      for (auto& c : out.coeffs) {
        c = -c;
      }
      out.constant = 1;
    }
    return out;
  }

  std::string render(LinearExpr const& e) const {
    std::string s;
    for (std::size_t i = 0; i < e.coeffs.size(); ++i) {
      Rational c = e.coeffs[i];
      if (c == 0) {
        continue;
      }
      if (s.empty()) {
        s += c < 0 ? "-" : "";
      } else {
        s += c < 0 ? " - " : " + ";
      }
      Rational a = c < 0 ? Rational(-c) : c;
      if (a != 1) {
        s += to_display_string(a) + "*";
      }
      s += "mu(" + variables[i] + ")";
    }
    if (e.constant != 0 || s.empty()) {
      if (s.empty()) {
        s = to_display_string(e.constant);
      } else {
        s += (e.constant < 0 ? " - " : " + ") +
             to_display_string(e.constant < 0 ? Rational(-e.constant) : e.constant);
      }
    }
    return s;
  }

  std::string render(Constraint const& c) const {
    return render(c.lhs) + (c.rel == Relation::Equal ? " = " : " ≤ ") + render(c.rhs);
  }
};

// mu(A_1 u ...) per class name, Sigma mu = 1 and mu >= 0 close the program.
inline DensityProgram translate(std::vector<TransportCertificate> const& certs,
                                std::vector<std::string> const& classes) {
  DensityProgram p;
  p.variables = classes;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (classes[i] == classes[j]) {
        throw Error("duplicate class '" + classes[i] + "'");
      }
    }
  }
  for (auto const& c : certs) {
    if (!c.verification.complete()) {
      throw Error("certificate '" + c.description + "' is not verified (" +
                  std::to_string(c.verification.passed) + "/" + std::to_string(c.verification.checked) +
                  ")");
    }
    Constraint k;
    k.label = c.description;
    switch (c.kind) {
      case CertificateKind::Containment:
        k = {p.mass(c.source), Relation::LessEq, p.mass(c.target), c.description};
        break;
      case CertificateKind::Bijection:
        k = {p.mass(c.source), Relation::Equal, p.mass(c.target), c.description};
        break;
      case CertificateKind::MassFlow: {
        LinearExpr out = p.mass(c.source);
        for (auto& a : out.coeffs) {
          a *= c.outflow;
        }
        out.constant *= c.outflow;
        LinearExpr in = p.zero();
        in.constant = c.inflow_bound;
        k = {out, Relation::LessEq, in, c.description};
        break;
      }
    }
    p.constraints.push_back(std::move(k));
  }
  LinearExpr total = p.zero();
  for (auto& a : total.coeffs) {
    a = 1;
  }
  LinearExpr one = p.zero();
  one.constant = 1;
  p.constraints.push_back({total, Relation::Equal, one, "total mass"});
  for (std::size_t i = 0; i < classes.size(); ++i) {
    LinearExpr v = p.zero();
    v.coeffs[i] = 1;
    p.constraints.push_back({p.zero(), Relation::LessEq, v, "nonnegative " + classes[i]});
  }
  return p;
}

struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rational> witness;       // when feasible
  std::string contradiction;           // e.g. "2/3 ≤ 1/3"
  Rational gap = 0;                    // lhs - rhs of the contradiction
  std::vector<Rational> multipliers;   // one per constraint; >= 0 on inequalities
  std::vector<std::string> chain;      // human-readable refutation steps
};

inline constexpr std::size_t kMaxVariables = 32;
inline constexpr std::size_t kMaxRows = 200000;

namespace detail {

// a . x <= b (or = b), with the combination of original constraints that
// produced it.
struct Row {
  std::vector<Rational> a;
  Rational b;
  std::vector<Rational> mult;
};

inline Row normalize(Constraint const& c, std::size_t index, std::size_t m) {
  Row r;
  r.a.resize(c.lhs.coeffs.size());
  for (std::size_t i = 0; i < r.a.size(); ++i) {
    r.a[i] = c.lhs.coeffs[i] - c.rhs.coeffs[i];
  }
  r.b = c.rhs.constant - c.lhs.constant;
  r.mult.assign(m, 0);
  r.mult[index] = 1;
  return r;
}

inline void axpy(Row& dst, Rational const& s, Row const& src) {
  for (std::size_t i = 0; i < dst.a.size(); ++i) {
    dst.a[i] += s * src.a[i];
  }
  dst.b += s * src.b;
  for (std::size_t i = 0; i < dst.mult.size(); ++i) {
    dst.mult[i] += s * src.mult[i];
  }
}

inline bool zero_row(Row const& r) {
  return std::all_of(r.a.begin(), r.a.end(), [](Rational const& c) { return c == 0; });
}

}  // namespace detail

// Checks that the multipliers combine the constraints into 0 <= negative
// (or 0 = nonzero). Returns the combined constant b (the contradiction is
// 0 <= b or 0 = b).
inline std::optional<Rational> replay(DensityProgram const& p, std::vector<Rational> const& mult) {
  if (mult.size() != p.constraints.size()) {
    return std::nullopt;
  }
  std::size_t n = p.variables.size();
  detail::Row sum{std::vector<Rational>(n), 0, {}};
  bool strict = false;
  for (std::size_t i = 0; i < mult.size(); ++i) {
    if (mult[i] == 0) {
      continue;
    }
    auto const& c = p.constraints[i];
    if (c.rel == Relation::LessEq) {
      if (mult[i] < 0) {
        return std::nullopt;
      }
      strict = true;
    }
    auto r = detail::normalize(c, 0, 1);
    for (std::size_t j = 0; j < n; ++j) {
      sum.a[j] += mult[i] * r.a[j];
    }
    sum.b += mult[i] * r.b;
  }
  if (!detail::zero_row(sum)) {
    return std::nullopt;
  }
  bool contradiction = strict ? sum.b < 0 : sum.b != 0;
  if (!contradiction) {
    return std::nullopt;
  }
  return sum.b;
}

inline FeasibilityResult feasible(DensityProgram const& p) {
  using detail::Row;
  std::size_t n = p.variables.size();
  std::size_t m = p.constraints.size();
  if (n > kMaxVariables) {
    throw Error("density program has " + std::to_string(n) + " variables; the limit is " +
                std::to_string(kMaxVariables));
  }
  FeasibilityResult res;

  std::vector<Row> eqs;
  std::vector<Row> ineqs;
  for (std::size_t i = 0; i < m; ++i) {
    auto const& c = p.constraints[i];
    if (c.lhs.coeffs.size() != n || c.rhs.coeffs.size() != n) {
      throw Error("constraint '" + c.label + "' has the wrong arity");
    }
    (c.rel == Relation::Equal ? eqs : ineqs).push_back(detail::normalize(c, i, m));
  }

  auto refute = [&](Row const& r, std::string text) {
    res.feasible = false;
    res.multipliers = r.mult;
    res.gap = -r.b;
    for (std::size_t i = 0; i < m; ++i) {
      if (r.mult[i] != 0) {
        res.chain.push_back(p.render(p.constraints[i]));
      }
    }
    res.contradiction = std::move(text);
    res.chain.push_back(res.contradiction);
    return res;
  };

  // Gaussian elimination on the equalities.
  std::vector<std::pair<std::size_t, Row>> pivots;  // (variable, row with a[var] == 1)
  std::vector<bool> is_pivot(n, false);
  for (auto& e : eqs) {
    for (auto const& [v, pr] : pivots) {
      if (e.a[v] != 0) {
        detail::axpy(e, -e.a[v], pr);
      }
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (e.a[j] != 0) {
        col = j;
        break;
      }
    }
    if (col == n) {
      if (e.b != 0) {
        if (e.b < 0) {
          Row flipped{std::vector<Rational>(n), 0, std::vector<Rational>(m)};
          detail::axpy(flipped, -1, e);
          e = std::move(flipped);
        }
        refute(e, "0 = " + to_display_string(e.b));
        res.gap = e.b;
        return res;
      }
      continue;
    }
    Rational s = 1 / e.a[col];
    Row unit{std::vector<Rational>(n), 0, std::vector<Rational>(m)};
    detail::axpy(unit, s, e);
    for (auto& [v, pr] : pivots) {
      if (pr.a[col] != 0) {
        detail::axpy(pr, -pr.a[col], unit);
      }
    }
    is_pivot[col] = true;
    pivots.emplace_back(col, std::move(unit));
  }

  // Substitute pivots into the inequalities.
  for (auto& r : ineqs) {
    for (auto const& [v, pr] : pivots) {
      if (r.a[v] != 0) {
        detail::axpy(r, -r.a[v], pr);
      }
    }
  }

  std::vector<std::size_t> free_vars;
  for (std::size_t j = 0; j < n; ++j) {
    if (!is_pivot[j]) {
      free_vars.push_back(j);
    }
  }

  // A substituted inequality with no variables left is a contradiction
  // already. It is shown with both sides of its source constraint reduced
  // through the equalities.
  auto substitute = [&](LinearExpr e) {
    for (auto const& [v, pr] : pivots) {
      Rational k = e.coeffs[v];
      if (k == 0) {
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        e.coeffs[j] -= k * pr.a[j];
      }
      e.constant += k * pr.b;
    }
    return e;
  };
  for (auto const& r : ineqs) {
    if (!detail::zero_row(r) || r.b >= 0) {
      continue;
    }
    std::string text = "0 ≤ " + to_display_string(r.b);
    for (std::size_t i = 0; i < m; ++i) {
      auto const& c = p.constraints[i];
      if (r.mult[i] != 0 && c.rel == Relation::LessEq) {
        auto l = substitute(c.lhs);
        auto h = substitute(c.rhs);
        if (l.is_constant() && h.is_constant()) {
          text = to_display_string(l.constant) + " ≤ " + to_display_string(h.constant);
        }
        break;
      }
    }
    refute(r, std::move(text));
    if (free_vars.empty() && !pivots.empty()) {
      std::vector<Rational> x(n);
      for (auto const& [v, pr] : pivots) {
        x[v] = pr.b;
      }
      std::string pinned = "pinned by equalities:";
      for (std::size_t j = 0; j < n; ++j) {
        pinned += " mu(" + p.variables[j] + ")=" + to_display_string(x[j]);
      }
      res.chain.insert(res.chain.end() - 1, pinned);
    }
    return res;
  }

  // Fourier-Motzkin: eliminate free variables last to first, keeping every
  // stage for back-substitution.
  std::vector<std::vector<Row>> stages;
  std::vector<Row> cur = ineqs;
  for (auto it = free_vars.rbegin(); it != free_vars.rend(); ++it) {
    std::size_t v = *it;
    stages.push_back(cur);
    std::vector<Row> pos, neg, next;
    for (auto& r : cur) {
      if (r.a[v] > 0) {
        pos.push_back(r);
      } else if (r.a[v] < 0) {
        neg.push_back(r);
      } else {
        next.push_back(r);
      }
    }
    for (auto const& P : pos) {
      for (auto const& N : neg) {
        Row r{std::vector<Rational>(n), 0, std::vector<Rational>(m)};
        detail::axpy(r, 1 / P.a[v], P);
        detail::axpy(r, 1 / -N.a[v], N);
        r.a[v] = 0;
        next.push_back(std::move(r));
      }
    }
    // Drop trivially true rows.
    std::vector<Row> kept;
    for (auto& r : next) {
      if (detail::zero_row(r) && r.b >= 0) {
        continue;
      }
      kept.push_back(std::move(r));
    }
    if (kept.size() > kMaxRows) {
      throw Error("elimination exceeded the row budget");
    }
    cur = std::move(kept);
  }
  for (auto const& r : cur) {
    if (detail::zero_row(r) && r.b < 0) {
      return refute(r, "0 ≤ " + to_display_string(r.b));
    }
  }

  // Back-substitution: each free variable takes a point strictly inside its
  // interval when possible, spreading the slack over the variables still open.
  std::vector<Rational> x(n);
  std::vector<bool> assigned(n, false);
  std::size_t open = free_vars.size();
  for (std::size_t s = stages.size(); s-- > 0;) {
    std::size_t v = free_vars[free_vars.size() - 1 - s];
    std::optional<Rational> lo, hi;
    for (auto const& r : stages[s]) {
      if (r.a[v] == 0) {
        continue;
      }
      Rational rest = r.b;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != v && r.a[j] != 0) {
          rest -= r.a[j] * x[j];
        }
      }
      Rational bound = rest / r.a[v];
      if (r.a[v] > 0) {
        hi = hi ? std::min(*hi, bound) : bound;
      } else {
        lo = lo ? std::max(*lo, bound) : bound;
      }
    }
    Rational val;
    if (lo && hi) {
      val = *lo + (*hi - *lo) / Rational(static_cast<long>(open + pivots.size()));
    } else if (lo) {
      val = *lo;
    } else if (hi) {
      val = std::min(*hi, Rational(0));
    } else {
      val = 0;
    }
    x[v] = val;
    assigned[v] = true;
    --open;
  }
  for (auto const& [v, pr] : pivots) {
    Rational val = pr.b;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != v && pr.a[j] != 0) {
        val -= pr.a[j] * x[j];
      }
    }
    x[v] = val;
  }
  for (auto const& c : p.constraints) {
    Rational l = c.lhs.eval(x);
    Rational r = c.rhs.eval(x);
    bool ok = c.rel == Relation::Equal ? l == r : l <= r;
    if (!ok) {
      throw Error("internal: witness fails constraint '" + c.label + "'");
    }
  }
  res.feasible = true;
  res.witness = std::move(x);
  return res;
}

inline std::string render_text(DensityProgram const& p, FeasibilityResult const& r) {
  std::string out;
  if (r.feasible) {
    out = "feasible: witness";
    for (std::size_t i = 0; i < p.variables.size(); ++i) {
      out += " mu(" + p.variables[i] + ")=" + to_display_string(r.witness[i]);
    }
    return out;
  }
  for (std::size_t i = 0; i + 1 < r.chain.size(); ++i) {
    out += "  " + r.chain[i] + "\n";
  }
  return out + "infeasible: " + r.contradiction;
}

}  // namespace parcol

#endif  // PARCOL_MEASURE_AUDIT_HPP_
