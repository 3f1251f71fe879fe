#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pcns/diagnostics.hpp"
#include "pcns/lagrangian.hpp"
#include "pcns/pulse.hpp"
#include "pcns/solver.hpp"

namespace pcns {

/// Everything a run needs. The file form is one `key = value` per line with
/// dotted section prefixes; `#` starts a comment.
///
///   grid.n grid.L
///   pulse.delta pulse.alpha pulse.gamma pulse.mu pulse.lambda pulse.epsilon
///   pulse.phi_amp pulse.v_amp
///   solver.dt_init solver.cfl_safety solver.t_end solver.dealias (true|false)
///   solver.scheme (explicit_rk4|imex) solver.checkpoint_every
///   solver.diagnostics_every solver.positivity_floor
///   diagnostics.c1 diagnostics.q diagnostics.r diagnostics.besov_every
///   tracking.seeds ("x y z; x y z; ..." in box units) tracking.tau tracking.every
///   output.dir
struct RunConfig {
    int n = 64;
    double L = 1.0;
    PulseParams pulse;
    SolverConfig solver;
    DiagnosticsOptions diagnostics;
    std::vector<Point> seeds;
    double tau = 0.0;
    long track_every = 4;  ///< steps between tracker snapshots
    std::filesystem::path output_dir = "out";

    Grid grid() const { return Grid(n, L); }
    /// Throws ConfigError (line 0) for values each module would reject.
    void validate() const;
};

/// Throws ConfigError naming the line for unknown or repeated keys, lines
/// without '=', and unparsable values; validation errors carry line 0.
RunConfig parse_config(const std::string& text);
/// Throws InputError if the file cannot be read.
RunConfig read_config(const std::filesystem::path& path);
/// Text that parse_config maps back to the same configuration.
std::string format_config(const RunConfig& c);

} // namespace pcns
