#pragma once

#include <iosfwd>

namespace teda::cli {

// Full command-line front end (detect / simulate / synth / bench / score /
// oracle-check). The stream-taking overload exists so tests can drive the
// CLI in-process and capture its output.
int run_cli(int argc, const char* const* argv);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace teda::cli
