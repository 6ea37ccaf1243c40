// Canonical words and Cayley balls for free products of cyclic groups.
//
// A presentation is a free product of cyclic factors <g | g^n> (n >= 2) or
// infinite cyclic factors. Free groups F_k are the case where every factor
// is infinite. Words are kept in syllable normal form: no two adjacent
// syllables share a generator and finite-order exponents lie in 1..n-1.

#ifndef PARCOL_GROUP_HPP_
#define PARCOL_GROUP_HPP_

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace parcol {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kInfiniteOrder = 0;

struct Generator {
  char name;
  int order;  // kInfiniteOrder or >= 2

  bool operator==(Generator const&) const = default;
};

// A single generator letter g^{+1} or g^{-1}.
struct Letter {
  int gen;
  int sign;  // +1 or -1

  bool operator==(Letter const&) const = default;
};

struct Syllable {
  int gen;
  long exp;

  bool operator==(Syllable const&) const = default;
};

class Presentation {
 public:
  Presentation() : Presentation(std::vector<Generator>{{'a', kInfiniteOrder}}) {}

  explicit Presentation(std::vector<Generator> gens)
      : gens_(std::make_shared<std::vector<Generator>>(std::move(gens))) {
    if (gens_->empty()) {
      throw Error("presentation needs at least one generator");
    }
    for (std::size_t i = 0; i < gens_->size(); ++i) {
      auto const& g = (*gens_)[i];
      if (g.order != kInfiniteOrder && g.order < 2) {
        throw Error(std::string("generator '") + g.name + "' has order < 2");
      }
      if (!std::islower(static_cast<unsigned char>(g.name))) {
        throw Error(std::string("generator names must be lowercase letters, got '") + g.name + "'");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if ((*gens_)[j].name == g.name) {
          throw Error(std::string("duplicate generator name '") + g.name + "'");
        }
      }
    }
    for (std::size_t i = 0; i < gens_->size(); ++i) {
      steps_.push_back({static_cast<int>(i), +1});
      if ((*gens_)[i].order != 2) {
        steps_.push_back({static_cast<int>(i), -1});
      }
    }
  }

  static Presentation free_group(int k) {
    if (k < 1 || k > 26) {
      throw Error("free group rank must be in 1..26");
    }
    std::vector<Generator> gens;
    for (int i = 0; i < k; ++i) {
      gens.push_back({static_cast<char>('a' + i), kInfiniteOrder});
    }
    return Presentation(std::move(gens));
  }

  // Free group on the given generator names, e.g. "st".
  static Presentation free_group(std::string_view names) {
    std::vector<Generator> gens;
    for (char c : names) {
      gens.push_back({c, kInfiniteOrder});
    }
    return Presentation(std::move(gens));
  }

  // Z2 * Z3 with sigma = 's' (order 2) and tau = 't' (order 3).
  static Presentation z2_z3() { return Presentation({{'s', 2}, {'t', 3}}); }

  // Accepts "F<k>" or a '*'-separated list of factors "[name:]Z[n]", e.g.
  // "F2", "Z2*Z3", "s:2*t:3", "a:Z*b:Z". A bare "name:n" is also accepted.
  static Presentation parse(std::string_view text) {
    auto trimmed = trim(text);
    if (trimmed.size() >= 2 && (trimmed[0] == 'F' || trimmed[0] == 'f') &&
        std::all_of(trimmed.begin() + 1, trimmed.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      return free_group(std::stoi(std::string(trimmed.substr(1))));
    }
    std::vector<Generator> gens;
    std::size_t pos = 0;
    char next_name = 'a';
    while (pos <= trimmed.size()) {
      auto star = trimmed.find('*', pos);
      auto factor = trim(trimmed.substr(pos, star == std::string_view::npos ? std::string_view::npos
                                                                             : star - pos));
      if (factor.empty()) {
        throw Error("empty factor in presentation '" + std::string(text) + "'");
      }
      char name = next_name;
      if (factor.size() >= 2 && factor[1] == ':') {
        name = factor[0];
        factor = factor.substr(2);
      }
      if (!factor.empty() && (factor[0] == 'Z' || factor[0] == 'z')) {
        factor = factor.substr(1);
      }
      int order = kInfiniteOrder;
      if (!factor.empty() && factor != "inf") {
        if (!std::all_of(factor.begin(), factor.end(),
                         [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          throw Error("bad factor '" + std::string(factor) + "' in presentation");
        }
        order = std::stoi(std::string(factor));
      }
      gens.push_back({name, order});
      next_name = static_cast<char>(std::max<int>(next_name, name) + 1);
      if (star == std::string_view::npos) {
        break;
      }
      pos = star + 1;
    }
    return Presentation(std::move(gens));
  }

  std::size_t size() const { return gens_->size(); }
  Generator const& generator(int i) const { return (*gens_)[static_cast<std::size_t>(i)]; }
  int order(int i) const { return generator(i).order; }
  bool is_free() const {
    return std::all_of(gens_->begin(), gens_->end(),
                       [](Generator const& g) { return g.order == kInfiniteOrder; });
  }

  // Letters g and g^-1 for every generator; order-2 generators contribute
  // only g. Sorted by letter index.
  std::vector<Letter> const& steps() const { return steps_; }

  int step_index(Letter l) const {
    for (std::size_t i = 0; i < steps_.size(); ++i) {
      if (steps_[i] == canonical_letter(l)) {
        return static_cast<int>(i);
      }
    }
    throw Error("letter not in presentation");
  }

  // Order-2 generators are their own inverse.
  Letter canonical_letter(Letter l) const {
    if (order(l.gen) == 2) {
      return {l.gen, +1};
    }
    return l;
  }

  Letter inverse(Letter l) const { return canonical_letter({l.gen, -l.sign}); }

  char letter_char(Letter l) const {
    char c = generator(l.gen).name;
    if (canonical_letter(l).sign < 0) {
      c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return c;
  }

  Letter parse_letter(char c) const {
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (std::size_t i = 0; i < gens_->size(); ++i) {
      if ((*gens_)[i].name == lower) {
        int sign = (c == lower) ? +1 : -1;
        return canonical_letter({static_cast<int>(i), sign});
      }
    }
    throw Error(std::string("unknown generator '") + c + "'");
  }

  long normalize_exp(int gen, long e) const {
    int n = order(gen);
    if (n == kInfiniteOrder) {
      return e;
    }
    long r = e % n;
    return r < 0 ? r + n : r;
  }

  // Word length contributed by one syllable.
  long syllable_length(int gen, long e) const {
    int n = order(gen);
    if (n == kInfiniteOrder) {
      return e < 0 ? -e : e;
    }
    long r = normalize_exp(gen, e);
    return std::min(r, n - r);
  }

  // The canonical letter expansion of a syllable is a run of one letter.
  Letter syllable_letter(int gen, long e) const {
    int n = order(gen);
    if (n == kInfiniteOrder) {
      return {gen, e < 0 ? -1 : +1};
    }
    long r = normalize_exp(gen, e);
    return canonical_letter({gen, 2 * r <= n ? +1 : -1});
  }

  std::string to_string() const {
    if (is_free()) {
      bool default_names = true;
      for (std::size_t i = 0; i < gens_->size(); ++i) {
        default_names = default_names && (*gens_)[i].name == static_cast<char>('a' + i);
      }
      if (default_names) {
        return "F" + std::to_string(gens_->size());
      }
    }
    std::string out;
    for (std::size_t i = 0; i < gens_->size(); ++i) {
      if (i > 0) {
        out += '*';
      }
      out += (*gens_)[i].name;
      out += ":Z";
      if ((*gens_)[i].order != kInfiniteOrder) {
        out += std::to_string((*gens_)[i].order);
      }
    }
    return out;
  }

  bool operator==(Presentation const& other) const {
    return gens_ == other.gens_ || *gens_ == *other.gens_;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
      s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
      s.remove_suffix(1);
    }
    return s;
  }

  std::shared_ptr<std::vector<Generator>> gens_;
  std::vector<Letter> steps_;
};

// Group element in syllable normal form. Ordered by (length, lex on letter
// indices) for deterministic iteration.
class Word {
 public:
  explicit Word(Presentation p) : p_(std::move(p)) {}

  // Leftmost greedy reduction of a raw letter sequence.
  static Word reduce(Presentation const& p, std::span<Letter const> letters) {
    Word w(p);
    for (Letter l : letters) {
      if (l.gen < 0 || static_cast<std::size_t>(l.gen) >= p.size()) {
        throw Error("letter refers to unknown generator");
      }
      w.push_syllable(l.gen, l.sign);
    }
    return w;
  }

  static Word reduce(Presentation const& p, std::span<Syllable const> syllables) {
    Word w(p);
    for (Syllable s : syllables) {
      if (s.gen < 0 || static_cast<std::size_t>(s.gen) >= p.size()) {
        throw Error("syllable refers to unknown generator");
      }
      w.push_syllable(s.gen, s.exp);
    }
    return w;
  }

  // "1" (or "") is the identity; otherwise one character per letter, upper
  // case for inverses.
  static Word parse(Presentation const& p, std::string_view text) {
    std::vector<Letter> letters;
    if (text != "1") {
      for (char c : text) {
        letters.push_back(p.parse_letter(c));
      }
    }
    return reduce(p, std::span<Letter const>(letters));
  }

  static Word generator(Presentation const& p, int gen, long exp = 1) {
    Syllable s{gen, exp};
    return reduce(p, std::span<Syllable const>(&s, 1));
  }

  Presentation const& presentation() const { return p_; }
  std::vector<Syllable> const& syllables() const { return syl_; }
  bool is_identity() const { return syl_.empty(); }

  long length() const {
    long n = 0;
    for (auto const& s : syl_) {
      n += p_.syllable_length(s.gen, s.exp);
    }
    return n;
  }

  std::vector<Letter> letters() const {
    std::vector<Letter> out;
    for (auto const& s : syl_) {
      Letter l = p_.syllable_letter(s.gen, s.exp);
      for (long i = 0; i < p_.syllable_length(s.gen, s.exp); ++i) {
        out.push_back(l);
      }
    }
    return out;
  }

  Word inverse() const {
    Word w(p_);
    for (auto it = syl_.rbegin(); it != syl_.rend(); ++it) {
      w.push_syllable(it->gen, -it->exp);
    }
    return w;
  }

  Word operator*(Word const& rhs) const {
    if (!(p_ == rhs.p_)) {
      throw Error("presentation mismatch in word product");
    }
    Word w = *this;
    for (auto const& s : rhs.syl_) {
      w.push_syllable(s.gen, s.exp);
    }
    return w;
  }

  std::string to_string() const {
    if (syl_.empty()) {
      return "1";
    }
    std::string out;
    for (Letter l : letters()) {
      out += p_.letter_char(l);
    }
    return out;
  }

  bool operator==(Word const& other) const { return p_ == other.p_ && syl_ == other.syl_; }

  std::strong_ordering operator<=>(Word const& other) const {
    if (auto c = length() <=> other.length(); c != 0) {
      return c;
    }
    auto a = letters();
    auto b = other.letters();
    return std::lexicographical_compare_three_way(
        a.begin(), a.end(), b.begin(), b.end(), [this](Letter x, Letter y) {
          return letter_index(x) <=> letter_index(y);
        });
  }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto const& s : syl_) {
      h ^= std::hash<long>{}(s.exp * 64 + s.gen) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  static int letter_index(Letter l) { return 2 * l.gen + (l.sign < 0 ? 1 : 0); }

  void push_syllable(int gen, long exp) {
    exp = p_.normalize_exp(gen, exp);
    if (exp == 0) {
      return;
    }
    if (!syl_.empty() && syl_.back().gen == gen) {
      long merged = p_.normalize_exp(gen, syl_.back().exp + exp);
      if (merged == 0) {
        syl_.pop_back();
      } else {
        syl_.back().exp = merged;
      }
      return;
    }
    syl_.push_back({gen, exp});
  }

  Presentation p_;
  std::vector<Syllable> syl_;
};

inline Word mul(Word const& u, Word const& v) { return u * v; }
inline Word inv(Word const& u) { return u.inverse(); }

inline std::ostream& operator<<(std::ostream& os, Word const& w) { return os << w.to_string(); }

struct WordHash {
  std::size_t operator()(Word const& w) const { return w.hash(); }
};

using VertexId = std::int32_t;
inline constexpr VertexId kNone = -1;

// All reduced words of length <= radius, with vertex ids in (length, lex)
// order and adjacency w ~ g w for every generator letter g.
class Ball {
 public:
  Ball(Presentation p, int radius) : p_(std::move(p)), radius_(radius) {
    if (radius < 0) {
      throw Error("ball radius must be non-negative");
    }
    build();
  }

  Presentation const& presentation() const { return p_; }
  int radius() const { return radius_; }
  std::size_t size() const { return length_.size(); }
  int num_steps() const { return static_cast<int>(p_.steps().size()); }
  VertexId identity() const { return 0; }

  int length(VertexId v) const { return length_[static_cast<std::size_t>(v)]; }

  // Vertices of length exactly l occupy [sphere_begin(l), sphere_begin(l+1)).
  VertexId sphere_begin(int l) const {
    if (l > radius_) {
      return static_cast<VertexId>(size());
    }
    return sphere_start_[static_cast<std::size_t>(l)];
  }
  std::size_t sphere_size(int l) const {
    return static_cast<std::size_t>(sphere_begin(l + 1) - sphere_begin(l));
  }
  // Number of vertices of length <= l.
  std::size_t count_within(int l) const {
    if (l < 0) {
      return 0;
    }
    return static_cast<std::size_t>(sphere_begin(std::min(l, radius_) + 1));
  }

  // step . v, or kNone when it leaves the ball.
  VertexId neighbour(VertexId v, int step) const {
    return nbr_[static_cast<std::size_t>(v) * steps_ + static_cast<std::size_t>(step)];
  }

  VertexId neighbour(VertexId v, Letter l) const { return neighbour(v, p_.step_index(l)); }

  // g . v by walking the letters of g from the right. When an intermediate
  // word leaves the ball and generator orders allow a return, falls back to
  // word arithmetic.
  VertexId apply(Word const& g, VertexId v) const {
    auto letters = g.letters();
    VertexId cur = v;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
      cur = neighbour(cur, p_.step_index(*it));
      if (cur == kNone) {
        return monotone_ ? kNone : find(g * word(v));
      }
    }
    return cur;
  }

  // Precomputed step sequence for repeated application of one element.
  std::vector<int> step_path(Word const& g) const {
    auto letters = g.letters();
    std::vector<int> path;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
      path.push_back(p_.step_index(*it));
    }
    return path;
  }

  VertexId apply(std::span<int const> path, Word const& g, VertexId v) const {
    VertexId cur = v;
    for (int s : path) {
      cur = neighbour(cur, s);
      if (cur == kNone) {
        return monotone_ ? kNone : find(g * word(v));
      }
    }
    return cur;
  }

  VertexId find(Word const& w) const {
    if (!(w.presentation() == p_)) {
      throw Error("presentation mismatch in ball lookup");
    }
    if (w.length() > radius_) {
      return kNone;
    }
    auto letters = w.letters();
    VertexId cur = identity();
    for (auto it = letters.rbegin(); it != letters.rend() && cur != kNone; ++it) {
      cur = neighbour(cur, p_.step_index(*it));
    }
    return cur;
  }

  Word word(VertexId v) const {
    std::vector<Syllable> syl;
    while (v != identity()) {
      auto i = static_cast<std::size_t>(v);
      syl.push_back({first_gen_[i], first_exp_[i]});
      v = tail_[i];
    }
    return Word::reduce(p_, std::span<Syllable const>(syl));
  }

  // First syllable of v (undefined for the identity) and the word after it.
  Syllable first_syllable(VertexId v) const {
    auto i = static_cast<std::size_t>(v);
    return {first_gen_[i], first_exp_[i]};
  }
  VertexId tail(VertexId v) const { return tail_[static_cast<std::size_t>(v)]; }

  // v with its first letter removed (one step towards the identity).
  VertexId parent(VertexId v) const {
    if (v == identity()) {
      return kNone;
    }
    Syllable s = first_syllable(v);
    Letter first = p_.syllable_letter(s.gen, s.exp);
    return neighbour(v, p_.step_index(p_.inverse(first)));
  }

  // Edge list (from, generator letter, to) for every in-ball edge.
  template <typename F>
  void for_each_edge(F&& f) const {
    for (VertexId v = 0; v < static_cast<VertexId>(size()); ++v) {
      for (int s = 0; s < num_steps(); ++s) {
        VertexId u = neighbour(v, s);
        if (u != kNone) {
          f(v, p_.steps()[static_cast<std::size_t>(s)], u);
        }
      }
    }
  }

 private:
  void build() {
    steps_ = p_.steps().size();
    // With orders in {inf, 2, 3} a walk that leaves the ball never returns.
    monotone_ = true;
    for (std::size_t i = 0; i < p_.size(); ++i) {
      int n = p_.order(static_cast<int>(i));
      monotone_ = monotone_ && (n == kInfiniteOrder || n <= 3);
    }
    // Vertex 0 is the identity.
    length_.push_back(0);
    first_gen_.push_back(-1);
    first_exp_.push_back(0);
    tail_.push_back(kNone);
    sphere_start_.push_back(0);

    // child[step][w] = step . w when that word is canonical with first
    // letter `step` and length |w| + 1.
    std::vector<std::vector<VertexId>> child(steps_);
    for (int l = 1; l <= radius_; ++l) {
      VertexId lo = sphere_start_.back();
      VertexId hi = static_cast<VertexId>(length_.size());
      sphere_start_.push_back(hi);
      for (auto& c : child) {
        c.resize(static_cast<std::size_t>(hi), kNone);
      }
      for (std::size_t s = 0; s < steps_; ++s) {
        Letter letter = p_.steps()[s];
        long exp_step = p_.normalize_exp(letter.gen, letter.sign);
        for (VertexId w = lo; w < hi; ++w) {
          auto wi = static_cast<std::size_t>(w);
          int gen;
          long exp;
          VertexId tail;
          long len;
          if (w == 0 || first_gen_[wi] != letter.gen) {
            gen = letter.gen;
            exp = exp_step;
            tail = w;
            len = length_[wi] + p_.syllable_length(gen, exp);
          } else {
            gen = letter.gen;
            exp = p_.normalize_exp(gen, first_exp_[wi] + letter.sign);
            if (exp == 0) {
              continue;
            }
            tail = tail_[wi];
            len = length_[wi] - p_.syllable_length(gen, first_exp_[wi]) +
                  p_.syllable_length(gen, exp);
          }
          if (len != l || !(p_.syllable_letter(gen, exp) == letter)) {
            continue;
          }
          child[s][wi] = static_cast<VertexId>(length_.size());
          length_.push_back(static_cast<std::int16_t>(l));
          first_gen_.push_back(static_cast<std::int8_t>(gen));
          first_exp_.push_back(static_cast<std::int32_t>(exp));
          tail_.push_back(tail);
        }
      }
    }
    sphere_start_.push_back(static_cast<VertexId>(length_.size()));
    for (auto& c : child) {
      c.resize(length_.size(), kNone);
    }

    auto lookup = [&](int gen, long exp, VertexId tail) -> VertexId {
      Letter l = p_.syllable_letter(gen, exp);
      auto s = static_cast<std::size_t>(p_.step_index(l));
      VertexId cur = tail;
      for (long i = 0; i < p_.syllable_length(gen, exp) && cur != kNone; ++i) {
        cur = child[s][static_cast<std::size_t>(cur)];
      }
      return cur;
    };

    nbr_.assign(length_.size() * steps_, kNone);
    for (std::size_t v = 0; v < length_.size(); ++v) {
      for (std::size_t s = 0; s < steps_; ++s) {
        Letter letter = p_.steps()[s];
        VertexId result;
        if (v == 0 || first_gen_[v] != letter.gen) {
          result = child[s][v];
        } else {
          long exp = p_.normalize_exp(letter.gen, first_exp_[v] + letter.sign);
          result = exp == 0 ? tail_[v] : lookup(letter.gen, exp, tail_[v]);
        }
        nbr_[v * steps_ + s] = result;
      }
    }
  }

  Presentation p_;
  int radius_;
  std::size_t steps_ = 0;
  bool monotone_ = true;
  std::vector<std::int16_t> length_;
  std::vector<std::int8_t> first_gen_;
  std::vector<std::int32_t> first_exp_;
  std::vector<VertexId> tail_;
  std::vector<VertexId> sphere_start_;
  std::vector<VertexId> nbr_;
};

using BallPtr = std::shared_ptr<Ball const>;

inline BallPtr make_ball(Presentation p, int radius) {
  return std::make_shared<Ball const>(std::move(p), radius);
}

}  // namespace parcol

template <>
struct std::hash<parcol::Word> {
  std::size_t operator()(parcol::Word const& w) const { return w.hash(); }
};

#endif  // PARCOL_GROUP_HPP_
