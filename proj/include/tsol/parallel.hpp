#pragma once

#include <Eigen/Core>

#include <functional>

namespace tsol {

/// Worker count from TSOL_THREADS (default 1; 0 or invalid means 1).
int thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks write disjoint data,
/// so results do not depend on the thread count.
void parallel_for(Eigen::Index n, const std::function<void(Eigen::Index, Eigen::Index)>& body);

}  // namespace tsol
