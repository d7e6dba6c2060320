// Copyright 2026 The feasidist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEASIDIST_RNG_HPP
#define FEASIDIST_RNG_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

namespace feasidist {

// Identifies one reproducible random stream.  The same (seed, stream) pair
// always produces the same sequence; distinct stream ids give statistically
// independent sequences from one user-facing seed.
struct SamplerState {
  std::uint64_t seed = 42;
  std::uint64_t stream = 0;
};

namespace detail {
// SplitMix64 step; used only to expand (seed, stream) into engine seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Deterministic random generator.  The engine is std::mt19937_64 (whose output
// sequence is fixed by the standard); all variate mappings are hand-rolled so
// results are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(SamplerState state) : state_(state) {
    std::uint64_t s = state.seed;
    (void)detail::splitmix64(s);
    s ^= state.stream * 0xda942042e4dd58b5ULL;
    engine_.seed(detail::splitmix64(s));
  }

  SamplerState state() const { return state_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1): 53 random mantissa bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, n); Lemire rejection, bias-free.
  std::uint64_t bounded(std::uint64_t n) {
    __uint128_t m = static_cast<__uint128_t>(engine_()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t threshold = (0ULL - n) % n;
      while (lo < threshold) {
        m = static_cast<__uint128_t>(engine_()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Fair coin as a single bit.
  bool coin() { return (engine_() >> 63) != 0; }

 private:
  SamplerState state_;
  std::mt19937_64 engine_;
};

// Fills a vector with `count` draws, deterministically for any thread count.
// The index space is cut into fixed-width chunks; chunk c always runs on its
// own generator seeded from stream `state.stream + c`, and its outputs land
// at fixed positions, so the result depends only on `state` and `count`.
// `draw` is invoked as draw(rng) and must return double.
template <typename DrawFn>
std::vector<double> chunked_draws(std::size_t count, SamplerState state,
                                  unsigned threads, DrawFn&& draw) {
  constexpr std::size_t kChunk = 65536;
  std::vector<double> out(count);
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  auto run_range = [&](std::size_t chunk_lo, std::size_t chunk_hi) {
    for (std::size_t c = chunk_lo; c < chunk_hi; ++c) {
      Rng rng(SamplerState{state.seed, state.stream + c});
      const std::size_t lo = c * kChunk;
      const std::size_t hi = std::min(count, lo + kChunk);
      for (std::size_t i = lo; i < hi; ++i) {
        out[i] = draw(rng);
      }
    }
  };
  const unsigned workers = std::max(
      1u, std::min<unsigned>(
              threads,
              static_cast<unsigned>(std::max<std::size_t>(chunks, 1))));
  if (workers <= 1) {
    run_range(0, chunks);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t per = (chunks + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * per;
    const std::size_t hi = std::min(chunks, lo + per);
    if (lo >= hi) break;
    pool.emplace_back(run_range, lo, hi);
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace feasidist

#endif  // FEASIDIST_RNG_HPP
