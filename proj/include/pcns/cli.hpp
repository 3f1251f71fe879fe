#pragma once

#include <iosfwd>

namespace pcns {

/// Entry point of the pulse_cns tool. Subcommands: init, run, diagnose,
/// envelope, toy, verify, report. Returns 0 on success, 1 when a check fails
/// or a run aborts, 2 for usage, configuration and input errors.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace pcns
