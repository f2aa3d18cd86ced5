#ifndef RISKOWA_PARALLEL_HPP
#define RISKOWA_PARALLEL_HPP

namespace riskowa {

/// Kernels with a data-parallel loop take this switch. kSerial runs the
/// plain loop and is the reference the OpenMP path is tested against.
enum class Execution { kSerial, kParallel };

/// Worker count for OpenMP regions: omp_get_max_threads(), capped by the
/// RISKOWA_THREADS environment variable when it holds a positive integer.
int thread_count();

}  // namespace riskowa

#endif  // RISKOWA_PARALLEL_HPP
