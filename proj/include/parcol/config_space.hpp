// Truncated Bernoulli configurations {-1,1}^G on a Cayley ball.
//
// Vertex w of the ball stands for the orbit point w.x, whose e-coordinate is
// x(w). The shift action is (g.x)(w) = x(w g); coordinates whose image
// leaves the ball are undefined (stored as 0), never defaulted.

#ifndef PARCOL_CONFIG_SPACE_HPP_
#define PARCOL_CONFIG_SPACE_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "parcol/group.hpp"
#include "parcol/random.hpp"

namespace parcol {

class Configuration {
 public:
  Configuration(BallPtr ball, std::vector<std::int8_t> values)
      : ball_(std::move(ball)), values_(std::move(values)) {
    if (values_.size() != ball_->size()) {
      throw Error("configuration size does not match its ball");
    }
    for (auto v : values_) {
      if (v != 1 && v != -1 && v != 0) {
        throw Error("configuration values must be +1, -1 or undefined");
      }
    }
  }

  // i.i.d. uniform signs, one bit per vertex in id order.
  static Configuration sample(BallPtr ball, RandomSource const& source, std::uint64_t stream = 0) {
    auto gen = source.stream(stream);
    std::vector<std::int8_t> values(ball->size());
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i % 64 == 0) {
        bits = gen();
      }
      values[i] = (bits & 1U) ? std::int8_t{1} : std::int8_t{-1};
      bits >>= 1;
    }
    return Configuration(std::move(ball), std::move(values));
  }

  static Configuration constant(BallPtr ball, int value) {
    std::vector<std::int8_t> values(ball->size(), static_cast<std::int8_t>(value));
    return Configuration(std::move(ball), std::move(values));
  }

  Ball const& ball() const { return *ball_; }
  BallPtr const& ball_ptr() const { return ball_; }
  std::span<std::int8_t const> values() const { return values_; }

  int value(VertexId v) const { return values_[static_cast<std::size_t>(v)]; }
  bool defined(VertexId v) const { return v != kNone && value(v) != 0; }

  int at(Word const& w) const {
    VertexId v = ball_->find(w);
    if (v == kNone) {
      throw Error("coordinate " + w.to_string() + " lies outside the ball");
    }
    return value(v);
  }

  Configuration with_value(VertexId v, int value) const {
    auto copy = values_;
    copy[static_cast<std::size_t>(v)] = static_cast<std::int8_t>(value);
    return Configuration(ball_, std::move(copy));
  }

  // (g.x)(w) = x(w g) wherever w g stays in the ball.
  Configuration shift(Word const& g) const {
    std::vector<std::int8_t> out(values_.size(), 0);
    for (VertexId w = 0; w < static_cast<VertexId>(values_.size()); ++w) {
      VertexId src = ball_->find(ball_->word(w) * g);
      if (src != kNone) {
        out[static_cast<std::size_t>(w)] = values_[static_cast<std::size_t>(src)];
      }
    }
    return Configuration(ball_, std::move(out));
  }

  std::size_t defined_count() const {
    std::size_t n = 0;
    for (auto v : values_) {
      n += v != 0 ? 1 : 0;
    }
    return n;
  }

  bool operator==(Configuration const& other) const { return values_ == other.values_; }

  // CSV with columns word,value; undefined coordinates are skipped.
  void write_csv(std::ostream& os) const {
    os << "word,value\n";
    for (VertexId w = 0; w < static_cast<VertexId>(values_.size()); ++w) {
      if (values_[static_cast<std::size_t>(w)] != 0) {
        os << ball_->word(w).to_string() << ',' << int{values_[static_cast<std::size_t>(w)]} << '\n';
      }
    }
  }

 private:
  BallPtr ball_;
  std::vector<std::int8_t> values_;
};

// Reads a bounded window around the root of a sampled configuration.
struct WindowPredicate {
  std::string name;
  int radius = 0;
  std::function<bool(Configuration const&)> test;
};

struct DensityEstimate {
  std::string predicate;
  std::uint64_t n = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

struct HitCount {
  std::uint64_t hits = 0;
  HitCount& operator+=(HitCount const& o) {
    hits += o.hits;
    return *this;
  }
};

inline DensityEstimate make_estimate(std::string name, std::uint64_t n, std::uint64_t hits,
                                     std::uint64_t seed) {
  DensityEstimate e{std::move(name), n, hits, 0.0, 0.0, seed};
  if (n > 0) {
    e.estimate = static_cast<double>(hits) / static_cast<double>(n);
    e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(n));
  }
  return e;
}

}  // namespace detail

// Runs f(config, acc) for `samples` configurations on `ball`, sample i drawn
// from stream i. Acc must be default-constructible with operator+=.
template <typename Acc, typename F>
Acc sample_reduce(BallPtr const& ball, std::uint64_t samples, RandomSource const& source, int workers,
                  F&& f) {
  return parallel_reduce<Acc>(samples, workers, [&](std::uint64_t i, Acc& acc) {
    f(Configuration::sample(ball, source, i), acc);
  });
}

inline DensityEstimate empirical_density(WindowPredicate const& predicate, int radius,
                                         std::uint64_t samples, RandomSource const& source,
                                         int workers = 1,
                                         Presentation const& p = Presentation::free_group(2)) {
  if (predicate.radius > radius) {
    throw Error("predicate window radius " + std::to_string(predicate.radius) +
                " exceeds ball radius " + std::to_string(radius));
  }
  auto ball = make_ball(p, radius);
  auto count = sample_reduce<detail::HitCount>(
      ball, samples, source, workers,
      [&](Configuration const& x, detail::HitCount& acc) { acc.hits += predicate.test(x) ? 1 : 0; });
  return detail::make_estimate(predicate.name, samples, count.hits, source.seed);
}

// Frequency of `predicate` among the first `conditioned` samples (in stream
// order) that satisfy `given`.
inline DensityEstimate conditional_density(WindowPredicate const& predicate,
                                           WindowPredicate const& given, int radius,
                                           std::uint64_t conditioned, RandomSource const& source,
                                           int workers = 1,
                                           Presentation const& p = Presentation::free_group(2)) {
  if (predicate.radius > radius || given.radius > radius) {
    throw Error("predicate window radius exceeds ball radius");
  }
  auto ball = make_ball(p, radius);
  std::uint64_t found = 0;
  std::uint64_t hits = 0;
  std::uint64_t start = 0;
  std::uint64_t block = std::max<std::uint64_t>(1024, 2 * conditioned);
  // 0: condition false, 1: condition true and predicate false, 2: both.
  std::vector<std::int8_t> flags;
  while (found < conditioned) {
    flags.assign(static_cast<std::size_t>(block), 0);
    parallel_chunks(block, workers, [&](std::uint64_t lo, std::uint64_t hi) {
      for (std::uint64_t i = lo; i < hi; ++i) {
        auto x = Configuration::sample(ball, source, start + i);
        if (given.test(x)) {
          flags[static_cast<std::size_t>(i)] = predicate.test(x) ? 2 : 1;
        }
      }
    });
    for (std::uint64_t i = 0; i < block && found < conditioned; ++i) {
      auto f = flags[static_cast<std::size_t>(i)];
      if (f != 0) {
        ++found;
        hits += f == 2 ? 1 : 0;
      }
    }
    start += block;
  }
  return detail::make_estimate(predicate.name + " | " + given.name, found, hits, source.seed);
}

}  // namespace parcol

#endif  // PARCOL_CONFIG_SPACE_HPP_
