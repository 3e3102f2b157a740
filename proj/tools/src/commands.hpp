#pragma once

#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace dgprobe::cli {

/// Runs the configured command and returns its tables, main table first.
std::vector<Table> execute(const RunConfig& config);

}  // namespace dgprobe::cli
