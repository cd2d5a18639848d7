#include "mforge/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef MFORGE_HAVE_OPENMP
#include <omp.h>
#endif

namespace mforge {

int worker_count() {
#ifdef MFORGE_HAVE_OPENMP
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("MOCHON_FORGE_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1 && cap < n) n = cap;
        } catch (...) {
            // Malformed value: ignore, keep the runtime default.
        }
    }
    return n < 1 ? 1 : n;
#else
    return 1;
#endif
}

bool parallel_enabled() { return worker_count() > 1; }

}  // namespace mforge
