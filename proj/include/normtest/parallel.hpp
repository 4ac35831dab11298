#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace normtest {

/// Number of OpenMP workers used by replication loops; 0 selects the runtime default.
void set_worker_count(int workers) noexcept;
[[nodiscard]] int worker_count() noexcept;

[[nodiscard]] inline bool in_parallel_region() noexcept {
#ifdef _OPENMP
    return omp_in_parallel() != 0;
#else
    return false;
#endif
}

/// Evaluates fn(i) for i in [first, first + count) and returns the values in index order.
///
/// Each replication must derive its randomness from its own index only; the gathered
/// output is then identical for every worker count.
template <class Fn>
std::vector<double> run_replications(std::uint64_t first, std::size_t count, Fn&& fn) {
    std::vector<double> out(count);
    const auto total = static_cast<std::ptrdiff_t>(count);
#ifdef _OPENMP
    const int workers = worker_count();
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers) if (total > 1 && !in_parallel_region())
#endif
    for (std::ptrdiff_t i = 0; i < total; ++i) {
        out[static_cast<std::size_t>(i)] = fn(first + static_cast<std::uint64_t>(i));
    }
    return out;
}

/// Plain loop; the reference the parallel engine is tested against.
template <class Fn>
std::vector<double> run_replications_serial(std::uint64_t first, std::size_t count, Fn&& fn) {
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(fn(first + i));
    }
    return out;
}

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace normtest
