#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bai {

/// Entry point of the bai_lab tool. args[0] is the program name.
/// Returns 0 on success, 1 on validation errors, 2 on internal or I/O errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bai
