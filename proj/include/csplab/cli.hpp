#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csplab {

// Entry point shared by the csplab binary and the tests. args excludes the
// program name. Returns 0 on success, 1 on configuration errors, 2 on
// capacity or budget errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace csplab
