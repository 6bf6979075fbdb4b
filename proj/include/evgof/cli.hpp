#pragma once

#include <string>
#include <vector>

namespace evgof {

/// Entry point behind the evgof binary; `args` excludes the program name.
/// Exit codes: 0 success, 2 input/configuration error, 3 tie error,
/// 4 internal numeric degeneracy.
int cli_main(const std::vector<std::string>& args);

int cli_main(int argc, char** argv);

}  // namespace evgof
