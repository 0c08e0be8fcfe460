#pragma once

#include <string_view>

namespace repofix::util {

// fnmatch-style matching with '*' and '?'. '*' does not cross '/' when the
// pattern itself contains a '/', mirroring shell path-glob intuition.
bool glob_match(std::string_view pattern, std::string_view text);

}  // namespace repofix::util
