#pragma once

#include <cstdint>
#include <random>

namespace coex {

/// SplitMix64 finaliser. Used to derive independent child seeds for sweep rows.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept
{
  return mix64(mix64(base) ^ mix64(index + 0x5851f42d4c957f2dULL));
}

/// Seeded random stream with portable draws.
///
/// std::mt19937_64 output is fully specified by the standard, but the std
/// distributions are not, so integer and real draws are done here to keep
/// results bit-identical across standard libraries.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed) : m_engine(mix64(seed)) {}

  std::uint64_t next_u64() { return m_engine(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

  /// Uniform integer in {0, ..., n-1}; n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n)
  {
    // Rejection on the top of the range removes modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = m_engine();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform integer in the inclusive range {lo, ..., hi}.
  int uniform_int(int lo, int hi)
  {
    return lo + static_cast<int>(uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool bernoulli(double p) { return uniform01() < p; }

private:
  std::mt19937_64 m_engine;
};

} // namespace coex
