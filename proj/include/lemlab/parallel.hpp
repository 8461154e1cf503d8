#pragma once

#include <cstddef>
#include <functional>

namespace lemlab {

/// Worker count: LEMLAB_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_count();

/// Calls fn(i) for i in [0, n). Each index is handled exactly once; callers
/// write results into per-index slots so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace lemlab
