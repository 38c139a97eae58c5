#pragma once

#include <cstdint>
#include <random>

namespace mtirl {

// Per-run pseudo-random stream. Every stochastic decision in a run draws from
// exactly one of these, so a run is a pure function of its seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  // Uniform integer in [0, n).
  int uniform_int(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }

  double normal(double stddev) { return std::normal_distribution<double>(0.0, stddev)(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for run `run` of cell `cell`. Distinct (cell, run) pairs get unrelated
// streams for the same base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t cell, std::uint64_t run) {
  return mix64(mix64(mix64(base_seed) ^ cell) ^ (run * 0xd1b54a32d192ed03ULL));
}

// Stream reserved for teacher pre-training, disjoint from every sweep cell.
inline constexpr std::uint64_t kTeacherStream = 0xffffffff00000000ULL;

}  // namespace mtirl
