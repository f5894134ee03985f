#ifndef BINRATIO_RNG_HPP
#define BINRATIO_RNG_HPP

#include <cstdint>
#include <random>

namespace binratio {

/// Identifies one reproducible random stream.
///
/// Seed-to-stream mapping (stable, part of the output format contract):
/// the engine is std::mt19937_64 seeded through std::seed_seq with the
/// 32-bit words
///
///   { lo(master_seed), hi(master_seed), lo(stream_index), hi(stream_index), role }
///
/// Both mt19937_64 and seed_seq are fully specified by the C++ standard, so
/// the uniform stream is identical across platforms. Sweeps use
/// stream_index = grid point index; within one experiment the X draws, the
/// Y draws and the Normal reference draws each get their own role.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

enum class StreamRole : std::uint32_t {
  BinomialX = 0,
  BinomialY = 1,
  NormalReference = 2,
  Auxiliary = 3,
};

using Engine = std::mt19937_64;

inline Engine make_engine(const SeedSpec& seed, StreamRole role) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed.master_seed & 0xffffffffu),
      static_cast<std::uint32_t>(seed.master_seed >> 32),
      static_cast<std::uint32_t>(seed.stream_index & 0xffffffffu),
      static_cast<std::uint32_t>(seed.stream_index >> 32),
      static_cast<std::uint32_t>(role),
  };
  return Engine(seq);
}

/// Uniform double on the open interval (0, 1) with 53 random bits.
template <class URBG>
double uniform_open01(URBG& gen) {
  static_assert(URBG::max() - URBG::min() == ~std::uint64_t{0}, "needs a 64-bit engine");
  return (static_cast<double>((gen() - URBG::min()) >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace binratio

#endif  // BINRATIO_RNG_HPP
