#pragma once

// Command-line front end. run() is the whole program minus process setup so
// tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace homog::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2 };

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// HOMOG_THREADS, falling back to the hardware concurrency; at least 1.
unsigned thread_count();

}  // namespace homog::cli
