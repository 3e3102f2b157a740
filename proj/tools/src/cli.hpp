#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dgprobe::cli {

/// Exit status: 0 success, 2 invalid configuration or usage, 3 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Text table of models, parameters, defaults and presets.
void list_models(std::ostream& out);

}  // namespace dgprobe::cli
