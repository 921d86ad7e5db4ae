#pragma once

#include <cstdint>
#include <random>

namespace csparrow {

// Seeded random source shared by the solvers and experiments.
//
// Engine: std::mt19937_64 (bit-exact output is pinned by the standard).
// The derived draws are fixed here, independent of the standard library's
// distribution implementations, so identical seeds give identical runs:
//
//   next_u64()    raw engine word
//   next_real01() top 53 bits scaled into [0, 1)
//   next_below(n) fixed-point multiply reduction of one raw word
//   next_bool()   low bit of one raw word
//
// One Rng instance per solver run or experiment trial. Parallel trials use
// derive_stream(master, index) to obtain decorrelated per-trial seeds.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double next_real01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform draw from {0, ..., n-1}. n must be positive.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool next_bool() { return (next_u64() & 1u) != 0; }

  // SplitMix64 over (master, stream): scrambles consecutive stream ids into
  // unrelated seeds for independent trial streams.
  static std::uint64_t derive_stream(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace csparrow
