#pragma once

namespace topk {

// Parses argv and dispatches to the analyze/certify/run/sweep subcommands.
// Returns the process exit code: 0 on success, 2 on validation errors
// (including flag misuse), 1 on runtime failures.
int cli_main(int argc, const char* const* argv);

} // namespace topk
