#pragma once

#include "confrec/ifs.hpp"

#include <string>
#include <string_view>

namespace confrec {

// Parses an IFS document. Errors are ValidationError with a "line N" or
// field-path prefix.
IfsSpec parse_ifs_json(std::string_view text);
IfsSpec load_ifs_json(const std::string& path);

} // namespace confrec
