#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dynmand {

/*
 * Full command-line surface. Returns the process exit code: 0 success,
 * 2 precondition or hypothesis failure (reported as JSON on out),
 * 1 internal error (message on err). Canonical machine output is JSON on
 * out; CSV and PGM files are written where flags request them.
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace dynmand
