#pragma once

namespace betheforge {

/// Applies the BETHEFORGE_THREADS override (if set) to the OpenMP runtime.
/// Called once at tool startup; library code just uses omp pragmas.
void apply_thread_env();

/// Current OpenMP thread budget.
int thread_count();

}  // namespace betheforge
