#pragma once
// Worker-thread cap shared by the OpenMP-parallel kernels. The environment
// variable MOCHON_FORGE_THREADS limits parallelism; 0/unset means "let the
// runtime decide". All parallel loops must aggregate deterministically.

namespace mforge {

// Number of workers to use (>= 1). Honors MOCHON_FORGE_THREADS.
int worker_count();

// True when compiled with OpenMP and more than one worker is allowed.
bool parallel_enabled();

}  // namespace mforge
