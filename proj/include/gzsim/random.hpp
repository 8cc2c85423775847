#pragma once

#include <cstdint>
#include <random>

namespace gzsim {

using RandomStream = std::mt19937_64;

/// Purpose tags keep substreams drawn for different jobs disjoint even when
/// they share a master seed and an index.
enum class StreamPurpose : std::uint32_t {
  realization = 1,
  oracle = 2,
  chip = 3,
  misc = 4,
};

/// Independent stream for work item `index` under `master_seed`.
/// Item i always gets the same stream, no matter how items are split
/// across workers.
inline RandomStream substream(std::uint64_t master_seed, std::uint64_t index,
                              StreamPurpose purpose = StreamPurpose::realization) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(purpose)};
  return RandomStream(seq);
}

/// Uniform double in [0, 1).
inline double uniform01(RandomStream& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace gzsim
