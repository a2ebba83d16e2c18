// Command-line front end: synthesize family waveforms, sweep cost profiles
// by several evaluation methods, tabulate curve moments, and run the
// phase-only optimizer.
#pragma once

namespace pulses::cli {

/// Execute the tool with the given command line. Returns the process exit
/// code: 0 success, 1 usage error, 2 numeric/domain error, 3 I/O error.
int run(int argc, const char* const* argv);

}  // namespace pulses::cli
