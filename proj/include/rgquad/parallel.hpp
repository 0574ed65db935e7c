#pragma once

namespace rgquad {

/// Selects between the OpenMP kernels and their serial reference versions.
enum class Execution { kSerial, kParallel };

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads() noexcept;

}  // namespace rgquad
