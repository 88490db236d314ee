#pragma once

namespace krein::parallel {

/// Worker count for OpenMP kernels: KREIN_LAB_THREADS when set (capped at
/// the OpenMP maximum), otherwise the OpenMP default. Thread count never
/// changes results, only speed.
int thread_count();

/// Override for tests and benchmarks; n <= 0 restores the environment default.
void set_thread_count(int n);

}  // namespace krein::parallel
