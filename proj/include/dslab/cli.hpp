#pragma once

#include <string>
#include <vector>

namespace dslab {

/// Exit status: 0 when every asserted check passes, 1 on a check failure,
/// 2 on a configuration error (error JSON on stderr).
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

}  // namespace dslab
