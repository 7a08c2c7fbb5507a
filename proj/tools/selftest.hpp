#ifndef INCOMPAT_TOOLS_SELFTEST_HPP
#define INCOMPAT_TOOLS_SELFTEST_HPP

#include <string>

// Runs the built-in verification suites, printing one [PASS]/[FAIL] line per
// suite.  `full` adds the long-running sweeps (500 hidden-object assemblages,
// the channel-level optimizer, determinism across worker counts).  A non-empty
// fixtures_dir additionally parses and witnesses every .json file in it.
// Returns 0 when every suite passed, 1 otherwise.
int run_selftest(bool full, const std::string& fixtures_dir);

#endif
