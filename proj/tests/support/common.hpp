#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "mpst/surface.hpp"

namespace mpst::test {

inline SourceFile load_example(const std::string& name) {
    std::ifstream in(std::string(MPST_EXAMPLES_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

inline LocalTypePtr L(std::string_view text) { return parse_local(text); }
inline GlobalTypePtr G(std::string_view text) { return parse_global(text); }

}  // namespace mpst::test
