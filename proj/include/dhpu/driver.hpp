#pragma once

namespace dhpu {

// Full command-line entry point: parses argv, runs the selected queries from
// the input file, prints reports to stdout.  Returns 0 when every query was
// answered with a drained search, 2 when some search hit its bound, 3 on
// input or validation errors, 4 on a broken internal invariant.
int run_cli(int argc, char** argv);

}  // namespace dhpu
