#pragma once

namespace qplab {

// Entry point of the qplab tool; returns the process exit code
// (0 success, 1 I/O or parse error, 2 promise violation detected).
int cli_run(int argc, char** argv);

}  // namespace qplab
