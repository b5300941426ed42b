#pragma once

#include <cstdint>
#include <random>

namespace hs6v {

/// Engine used by all samplers.
using Engine = std::mt19937_64;

/// Engine for sample `index` of a batch drawn under `master_seed`.
/// Every sample owns its stream, so a batch is reproducible from
/// (master_seed, index) whatever the worker count.
inline Engine substream(std::uint64_t master_seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x6a09e667u};
  return Engine(seq);
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Engine& engine) { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

}  // namespace hs6v
