#include "repofix/util/glob.hpp"

#include <string>

namespace repofix::util {

static bool match_impl(std::string_view pat, std::string_view text, bool star_crosses_slash) {
    std::size_t p = 0, t = 0;
    std::size_t star_p = std::string::npos, star_t = 0;
    while (t < text.size()) {
        if (p < pat.size() && (pat[p] == text[t] || pat[p] == '?')) {
            ++p;
            ++t;
        } else if (p < pat.size() && pat[p] == '*') {
            star_p = p++;
            star_t = t;
        } else if (star_p != std::string::npos &&
                   (star_crosses_slash || text[star_t] != '/')) {
            p = star_p + 1;
            t = ++star_t;
        } else {
            return false;
        }
    }
    while (p < pat.size() && pat[p] == '*') ++p;
    return p == pat.size();
}

bool glob_match(std::string_view pattern, std::string_view text) {
    bool has_slash = pattern.find('/') != std::string_view::npos;
    return match_impl(pattern, text, !has_slash);
}

}  // namespace repofix::util
