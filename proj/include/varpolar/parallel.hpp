#ifndef VARPOLAR_PARALLEL_HPP
#define VARPOLAR_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace varpolar {

// Worker count: VARPOLAR_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Calls body(i) for i in [0, n) on up to worker_count() threads. Each index
// runs exactly once; callers write results into slot i, so output order does
// not depend on scheduling. The first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace varpolar

#endif
