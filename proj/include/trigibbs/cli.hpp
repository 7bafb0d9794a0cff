#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trigibbs {

// Entry point behind the `trigibbs` binary. `args` excludes the program
// name. Machine-readable results (JSON/CSV) go to `out`; human summaries
// and errors go to `err`. Returns 0 on success, 1 on validation or
// execution failure, 2 on usage errors.
int cli_dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace trigibbs
