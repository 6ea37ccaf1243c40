// Seeded sample streams and a deterministic parallel loop.

#ifndef PARCOL_RANDOM_HPP_
#define PARCOL_RANDOM_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

namespace parcol {

// Every sample index gets its own generator, so a Monte Carlo run gives the
// same answer for any split of the index range across workers.
struct RandomSource {
  std::uint64_t seed = 0;

  static constexpr std::string_view algorithm = "mt19937_64/seed_seq(seed,stream)/v1";

  std::mt19937_64 stream(std::uint64_t index) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
  }
};

// Calls body(begin, end) on contiguous chunks of [0, n). Chunks are handed
// to at most `workers` threads.
template <typename Body>
void parallel_chunks(std::uint64_t n, int workers, Body&& body) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2) {
    body(std::uint64_t{0}, n);
    return;
  }
  auto w = static_cast<std::uint64_t>(workers);
  std::vector<std::thread> threads;
  for (std::uint64_t i = 0; i < w; ++i) {
    std::uint64_t lo = n * i / w;
    std::uint64_t hi = n * (i + 1) / w;
    if (lo < hi) {
      threads.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
  }
  for (auto& t : threads) {
    t.join();
  }
}

// Per-chunk accumulators merged in chunk order. Acc needs operator+=.
template <typename Acc, typename PerSample>
Acc parallel_reduce(std::uint64_t n, int workers, PerSample&& per_sample) {
  workers = std::max(1, workers);
  auto w = static_cast<std::uint64_t>(workers);
  std::vector<Acc> partial(static_cast<std::size_t>(w));
  std::vector<std::thread> threads;
  auto run = [&](std::uint64_t i) {
    std::uint64_t lo = n * i / w;
    std::uint64_t hi = n * (i + 1) / w;
    for (std::uint64_t k = lo; k < hi; ++k) {
      per_sample(k, partial[static_cast<std::size_t>(i)]);
    }
  };
  if (w == 1) {
    run(0);
  } else {
    for (std::uint64_t i = 0; i < w; ++i) {
      threads.emplace_back(run, i);
    }
    for (auto& t : threads) {
      t.join();
    }
  }
  Acc total{};
  for (auto& p : partial) {
    total += p;
  }
  return total;
}

}  // namespace parcol

#endif  // PARCOL_RANDOM_HPP_
