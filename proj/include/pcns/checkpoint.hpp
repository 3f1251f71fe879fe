#pragma once

#include <filesystem>

#include "pcns/pulse.hpp"
#include "pcns/state.hpp"

namespace pcns {

/// Contents of a checkpoint file. Only the physical constants are stored, so
/// pulse shape fields of `params` keep their defaults on read.
struct Checkpoint {
    State state;
    PulseParams params;
};

/// Layout: "PCNS", u32 version, u32 n1 n2 n3, f64 L gamma mu lambda t, then
/// rho, u1, u2, u3 as row-major f64 arrays. All little-endian.
void write_checkpoint(const std::filesystem::path& path, const State& s, const PulseParams& p);

/// Throws InputError on a missing file, bad magic, unknown version, a
/// non-cubic or non power-of-two grid, or truncation.
Checkpoint read_checkpoint(const std::filesystem::path& path);

} // namespace pcns
