// The three-colour rank-one rule on <tau, sigma_1..sigma_{k-1}>, the
// rank-two A/B/C rule on Z2 * Z3, their constructive solutions, and the
// six-piece doubling check.

#ifndef PARCOL_HAUSDORFF_HPP_
#define PARCOL_HAUSDORFF_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "parcol/group.hpp"
#include "parcol/measure_audit.hpp"
#include "parcol/rule.hpp"

namespace parcol {

// ---------------------------------------------------------------------------
// Example 1: colours A1, A2, A3 (indices 0, 1, 2), arithmetic mod 3.

inline constexpr ColourId kA1 = 0;

inline void check_example1_presentation(int k, Presentation const& p) {
  if (k < 2) {
    throw Error("the three-colour rule needs k >= 2");
  }
  if (static_cast<int>(p.size()) != k) {
    throw Error("presentation must have exactly k = " + std::to_string(k) + " generators");
  }
  int tau = p.order(0);
  if (tau != kInfiniteOrder && tau % 3 != 0) {
    throw Error("tau must have infinite order or order divisible by 3");
  }
  for (int i = 1; i < k; ++i) {
    int s = p.order(i);
    if (s != kInfiniteOrder && s % 2 != 0) {
      throw Error("each sigma_i must have infinite order or even order");
    }
  }
}

// Descendants tau, tau^-1, sigma_1, ..., sigma_{k-1}; tau is generator 0.
inline ColouringRule example1_rule(int k, Presentation const& p) {
  check_example1_presentation(k, p);
  std::vector<Descendant> desc;
  desc.push_back({Word::generator(p, 0, 1)});
  desc.push_back({Word::generator(p, 0, -1)});
  for (int i = 1; i < k; ++i) {
    desc.push_back({Word::generator(p, i, 1)});
  }
  ColouringRule::Spec s{"example1", p, ColourSet{"A1", "A2", "A3"}, std::move(desc), 0, 1, true, -1,
                        nullptr};
  s.allowed = [k](Window const&, std::span<ColourId const> c) -> ColourMask {
    ColourId t = c[0];
    ColourId i = c[1];
    ColourId next = (i + 1) % 3;
    if (t == i || t == next) {
      return colour_bit(next);
    }
    int count = 0;
    for (ColourId d : c) {
      count += d == kA1 ? 1 : 0;
    }
    return (count > 0 && count < k) ? colour_bit(t) : colour_bit(next);
  };
  return ColouringRule(std::move(s));
}

inline ColouringRule example1_rule(int k = 2) { return example1_rule(k, Presentation::free_group(k)); }

// Root A1; tau steps cycle the colour forward, sigma steps swap A1 with a
// non-A1 colour (A2 when leaving A1).
inline Colouring example1_solve(BallPtr const& ball) {
  Presentation const& p = ball->presentation();
  check_example1_presentation(static_cast<int>(p.size()), p);
  Colouring c(ball);
  c.set(ball->identity(), kA1);
  for (VertexId v = 1; v < static_cast<VertexId>(ball->size()); ++v) {
    Syllable s = ball->first_syllable(v);
    Letter l = p.syllable_letter(s.gen, s.exp);
    ColourId from = c.get(ball->parent(v));
    ColourId col;
    if (l.gen == 0) {
      col = (from + (l.sign > 0 ? 1 : 2)) % 3;
    } else {
      col = from == kA1 ? 1 : kA1;
    }
    c.set(v, col);
  }
  return c;
}

// tau: A_i -> A_{i+1} for each i (checked in both directions on the
// interior) and sigma_1(X \ A1) inside A1. Throws naming the first failing
// vertex.
inline std::vector<TransportCertificate> example1_certificates(Colouring const& c,
                                                               ColouringRule const& rule) {
  Ball const& ball = c.ball();
  Presentation const& p = ball.presentation();
  Word tau = Word::generator(p, 0, 1);
  Word tau_inv = tau.inverse();
  Word sigma = Word::generator(p, 1, 1);
  auto interior = [&](VertexId v) { return ball.length(v) <= ball.radius() - rule.dependency_radius(); };
  auto name = [&](ColourId i) { return rule.colours().name(i); };

  std::vector<TransportCertificate> out;
  for (ColourId i = 0; i < 3; ++i) {
    ColourId j = (i + 1) % 3;
    TransportCertificate cert{CertificateKind::Bijection, tau.to_string(), ClassExpr::of(name(i)),
                              ClassExpr::of(name(j)), 1, 0, {},
                              "tau maps " + name(i) + " onto " + name(j)};
    for (VertexId v = 0; v < static_cast<VertexId>(ball.size()); ++v) {
      if (!interior(v)) {
        continue;
      }
      if (c.get(v) == i) {
        ++cert.verification.checked;
        if (c.get(ball.apply(tau, v)) != j) {
          throw Error("certificate '" + cert.description + "' fails at " + ball.word(v).to_string());
        }
        ++cert.verification.passed;
      }
      if (c.get(v) == j) {
        ++cert.verification.checked;
        if (c.get(ball.apply(tau_inv, v)) != i) {
          throw Error("certificate '" + cert.description + "' fails at " + ball.word(v).to_string());
        }
        ++cert.verification.passed;
      }
    }
    out.push_back(std::move(cert));
  }
  TransportCertificate cont{CertificateKind::Containment, sigma.to_string(), ClassExpr::not_of(name(kA1)),
                            ClassExpr::of(name(kA1)), 1, 0, {},
                            "sigma_1 maps the complement of " + name(kA1) + " into " + name(kA1)};
  for (VertexId v = 0; v < static_cast<VertexId>(ball.size()); ++v) {
    if (interior(v) && c.get(v) != kA1) {
      ++cont.verification.checked;
      if (c.get(ball.apply(sigma, v)) != kA1) {
        throw Error("certificate '" + cont.description + "' fails at " + ball.word(v).to_string());
      }
      ++cont.verification.passed;
    }
  }
  out.push_back(std::move(cont));
  return out;
}

// ---------------------------------------------------------------------------
// A/B/C rule on Z2 * Z3: sigma = generator 0 (order 2), tau = generator 1
// (order 3). sigma(A) = B u C, sigma(B u C) = A, tau(A) = B, tau(B) = C,
// tau(C) = A.

inline constexpr ColourId kClassA = 0;
inline constexpr ColourId kClassB = 1;
inline constexpr ColourId kClassC = 2;

inline void check_z2_z3(Presentation const& p) {
  if (p.size() != 2 || p.order(0) != 2 || p.order(1) != 3) {
    throw Error("expected Z2 * Z3 with generators of order 2 and 3, got " + p.to_string());
  }
}

inline ColouringRule hausdorff_rule(Presentation const& p = Presentation::z2_z3()) {
  check_z2_z3(p);
  std::vector<Descendant> desc{{Word::generator(p, 1, -1)}, {Word::generator(p, 0, 1)}};
  ColouringRule::Spec s{"hausdorff", p, ColourSet{"A", "B", "C"}, std::move(desc), 0, 1, true, -1, nullptr};
  s.allowed = [](Window const&, std::span<ColourId const> c) -> ColourMask {
    ColourMask tau_part = colour_bit((c[0] + 1) % 3);
    ColourMask sigma_part = c[1] == kClassA ? (colour_bit(kClassB) | colour_bit(kClassC)) : colour_bit(kClassA);
    return tau_part & sigma_part;
  };
  return ColouringRule(std::move(s));
}

inline Colouring hausdorff_solve(BallPtr const& ball) {
  Presentation const& p = ball->presentation();
  check_z2_z3(p);
  Colouring c(ball);
  c.set(ball->identity(), kClassA);
  for (VertexId v = 1; v < static_cast<VertexId>(ball->size()); ++v) {
    Syllable s = ball->first_syllable(v);
    ColourId tail = c.get(ball->tail(v));
    if (s.gen == 0) {
      c.set(v, tail == kClassA ? kClassB : kClassA);
    } else {
      c.set(v, static_cast<ColourId>((tail + s.exp) % 3));
    }
  }
  return c;
}

// sigma: A <-> B u C and tau: A -> B -> C -> A, each checked forwards and
// backwards on |x| <= R - 1.
inline std::vector<TransportCertificate> hausdorff_certificates(Colouring const& c) {
  Ball const& ball = c.ball();
  Presentation const& p = ball.presentation();
  check_z2_z3(p);
  Word sigma = Word::generator(p, 0, 1);
  Word tau = Word::generator(p, 1, 1);
  Word tau_inv = tau.inverse();
  std::size_t interior = ball.radius() >= 1 ? ball.count_within(ball.radius() - 1) : 0;
  auto fail = [&](TransportCertificate const& cert, VertexId v) {
    throw Error("certificate '" + cert.description + "' fails at " + ball.word(v).to_string());
  };
  std::vector<TransportCertificate> out;
  std::array<std::string, 3> names{"A", "B", "C"};
  TransportCertificate sc{CertificateKind::Bijection, sigma.to_string(), ClassExpr::of("A"),
                          ClassExpr{{"B", "C"}, false}, 1, 0, {}, "sigma maps A onto B u C"};
  for (VertexId v = 0; v < static_cast<VertexId>(interior); ++v) {
    ++sc.verification.checked;
    bool in_a = c.get(v) == kClassA;
    if ((c.get(ball.apply(sigma, v)) == kClassA) == in_a) {
      fail(sc, v);
    }
    ++sc.verification.passed;
  }
  out.push_back(std::move(sc));
  for (ColourId i = 0; i < 3; ++i) {
    ColourId j = (i + 1) % 3;
    auto ii = static_cast<std::size_t>(i);
    auto jj = static_cast<std::size_t>(j);
    TransportCertificate tc{CertificateKind::Bijection, tau.to_string(), ClassExpr::of(names[ii]),
                            ClassExpr::of(names[jj]), 1, 0, {}, "tau maps " + names[ii] + " onto " + names[jj]};
    for (VertexId v = 0; v < static_cast<VertexId>(interior); ++v) {
      if (c.get(v) == i) {
        ++tc.verification.checked;
        if (c.get(ball.apply(tau, v)) != j) {
          fail(tc, v);
        }
        ++tc.verification.passed;
      }
      if (c.get(v) == j) {
        ++tc.verification.checked;
        if (c.get(ball.apply(tau_inv, v)) != i) {
          fail(tc, v);
        }
        ++tc.verification.passed;
      }
    }
    out.push_back(std::move(tc));
  }
  return out;
}

struct SixPieceReport {
  int domain_radius = 0;  // pieces are formed on |x| <= domain_radius
  int core_radius = 0;    // exact coverage is checked on |y| <= core_radius
  std::size_t domain_size = 0;
  std::array<std::size_t, 6> piece_sizes{};
  std::size_t unassigned = 0;  // domain points in no piece
  std::size_t overlaps = 0;    // domain points in two or more pieces
  bool partition = false;
  std::size_t core_size = 0;
  std::array<std::size_t, 2> core_covered_once{};
  std::array<std::size_t, 2> core_uncovered{};
  std::array<std::size_t, 2> collisions{};  // points hit twice by one copy
  std::array<std::size_t, 2> remainder{};   // images landing outside the core
  bool injective = false;
  bool doubles_core = false;
};

inline std::array<std::string, 6> six_piece_names() {
  return {"A∩σB", "A∩σC", "τ(A∩σB)", "τ(A∩σC)", "τ²(A∩σB)", "τ²(A∩σC)"};
}

// Movers (copy, element) for pieces 1..6: copy 0 reassembles the space from
// pieces 3..6, copy 1 from pieces 1..2.
inline std::array<std::pair<int, Word>, 6> six_piece_movers(Presentation const& p) {
  Word s = Word::generator(p, 0, 1);
  Word t = Word::generator(p, 1, 1);
  Word ti = t.inverse();
  return {{{1, s * ti * s}, {1, ti * ti * s}, {0, ti}, {0, ti}, {0, s * ti * ti}, {0, s * ti * ti}}};
}

inline SixPieceReport six_piece_doubling(Colouring const& classes) {
  Ball const& ball = classes.ball();
  Presentation const& p = ball.presentation();
  check_z2_z3(p);
  auto rep = check(hausdorff_rule(p), classes);
  if (!rep.satisfied()) {
    throw Error("classes violate the A/B/C rule at " +
                ball.word(rep.violations.front().vertex).to_string());
  }
  SixPieceReport r;
  r.domain_radius = ball.radius() - 2;
  r.core_radius = ball.radius() - 5;
  if (r.domain_radius < 0) {
    r.partition = true;
    r.injective = true;
    r.doubles_core = true;
    return r;
  }
  Word s = Word::generator(p, 0, 1);
  Word t = Word::generator(p, 1, 1);
  auto cls = [&](Word const& w, VertexId v) { return classes.get(ball.apply(w, v)); };
  auto in_p1 = [&](Word const& pre, VertexId v) {
    VertexId y = ball.apply(pre, v);
    return classes.get(y) == kClassA && cls(s, y) == kClassB;
  };
  auto in_p2 = [&](Word const& pre, VertexId v) {
    VertexId y = ball.apply(pre, v);
    return classes.get(y) == kClassA && cls(s, y) == kClassC;
  };
  Word e(p);
  Word ti = t.inverse();
  Word ti2 = ti * ti;
  auto movers = six_piece_movers(p);
  std::array<std::vector<std::uint8_t>, 2> hits{std::vector<std::uint8_t>(ball.size(), 0),
                                                 std::vector<std::uint8_t>(ball.size(), 0)};
  std::array<std::unordered_set<Word, WordHash>, 2> images;
  for (VertexId v = 0; v < static_cast<VertexId>(ball.count_within(r.domain_radius)); ++v) {
    ++r.domain_size;
    std::array<bool, 6> in{in_p1(e, v), in_p2(e, v), in_p1(ti, v), in_p2(ti, v), in_p1(ti2, v), in_p2(ti2, v)};
    int count = 0;
    for (int i = 0; i < 6; ++i) {
      if (!in[i]) {
        continue;
      }
      ++count;
      ++r.piece_sizes[i];
      auto const& [copy, g] = movers[i];
      VertexId img = ball.apply(g, v);
      Word img_word = img == kNone ? g * ball.word(v) : ball.word(img);
      if (!images[copy].insert(img_word).second) {
        ++r.collisions[copy];
      }
      if (img == kNone || ball.length(img) > r.core_radius) {
        ++r.remainder[copy];
        continue;
      }
      auto& h = hits[copy][static_cast<std::size_t>(img)];
      h = h < 255 ? h + 1 : h;
    }
    r.unassigned += count == 0 ? 1 : 0;
    r.overlaps += count > 1 ? 1 : 0;
  }
  r.partition = r.unassigned == 0 && r.overlaps == 0;
  if (r.core_radius >= 0) {
    r.core_size = ball.count_within(r.core_radius);
    for (int copy = 0; copy < 2; ++copy) {
      for (std::size_t y = 0; y < r.core_size; ++y) {
        if (hits[copy][y] == 1) {
          ++r.core_covered_once[copy];
        } else if (hits[copy][y] == 0) {
          ++r.core_uncovered[copy];
        }
      }
    }
  }
  r.injective = r.collisions[0] == 0 && r.collisions[1] == 0;
  r.doubles_core = r.injective && r.core_covered_once[0] == r.core_size && r.core_covered_once[1] == r.core_size;
  return r;
}

}  // namespace parcol

#endif  // PARCOL_HAUSDORFF_HPP_
