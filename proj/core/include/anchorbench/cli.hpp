#pragma once
// Operator entry point. Exit codes: 0 success, 1 usage error, 2 runtime
// failure (with a summary of failed sessions on stderr).

namespace anchorbench {

int run_cli(int argc, const char* const* argv);

}  // namespace anchorbench
