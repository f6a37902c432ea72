#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sap {

/// One row of a convergence trajectory, the unit persisted to CSV.
struct ConvergenceRecord {
    std::string method;
    std::uint64_t seed = 0;
    std::int64_t iteration = 0;
    double elapsed_s = 0.0;
    double residual = 0.0;
    std::optional<double> lyapunov;
    std::optional<double> lambda_min_x;
};

using Trajectory = std::vector<ConvergenceRecord>;

} // namespace sap
