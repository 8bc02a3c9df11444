// CSV output for metrics reports.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pollushield/scenarios.hpp"

namespace pollushield {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed six fractional digits, ties to even on the exact binary value.
std::string format_value(double v);

std::string trajectories_csv(const MetricsReport& report);
std::string summary_csv(const MetricsReport& report);
std::string meta_csv(const MetricsReport& report);

/// Writes <label>_trajectories.csv, <label>_summary.csv and <label>_meta.csv
/// into `dir` (created if missing). Throws OutputError naming the failing path.
std::vector<std::filesystem::path> emit_csv(const MetricsReport& report,
                                            const std::filesystem::path& dir);

}  // namespace pollushield
