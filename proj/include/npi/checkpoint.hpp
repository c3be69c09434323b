#ifndef NPI_CHECKPOINT_HPP
#define NPI_CHECKPOINT_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "npi/core.hpp"

namespace npi {

// Self-describing binary checkpoint. Layout (all little-endian):
//   magic "NPI1", format_version (u32), spec hash (32 bytes),
//   time (f64), rng_cursor (u64),
//   then positions and momenta as dimension-tagged row-major f64 arrays:
//   rank (u8), dims (u64 each), data.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void save_checkpoint(const RingPolymerState& state, const SystemSpec& spec,
                     const std::string& path);

struct LoadedCheckpoint {
    RingPolymerState state;
    std::array<std::uint8_t, 32> spec_hash;
};

// Loads and verifies magic/version; if `expected_spec` is non-null, the
// stored hash must match spec_hash(*expected_spec).
LoadedCheckpoint load_checkpoint(const std::string& path,
                                 const SystemSpec* expected_spec = nullptr);

}  // namespace npi

#endif
