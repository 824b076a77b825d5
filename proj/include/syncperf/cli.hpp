// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace syncperf {

// Runs one CLI invocation. `args` excludes the program name. `in` backs the
// "-" measurement path. Returns 0 on success, 1 on validation or data errors
// and 2 on usage errors; every diagnostic line on `err` starts with an error
// code such as E_PARSE.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace syncperf
