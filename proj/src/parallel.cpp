#include "normtest/parallel.hpp"

#include <atomic>

namespace normtest {

namespace {
std::atomic<int> g_workers{0};
}

void set_worker_count(int workers) noexcept {
    g_workers.store(workers < 0 ? 0 : workers);
}

int worker_count() noexcept {
    const int w = g_workers.load();
#ifdef _OPENMP
    return w > 0 ? w : omp_get_max_threads();
#else
    return w > 0 ? w : 1;
#endif
}

}  // namespace normtest
