#pragma once

namespace reducebench {

/// Entry point behind the reducebench binary, callable in-process.
/// Subcommands: run, reduce, evaluate, validate-config. Returns 0 on
/// success, 1 on runtime errors (after printing "error: <Code>: <message>"
/// on stderr), 2 on usage errors.
int run_cli(int argc, const char* const* argv);

} // namespace reducebench
