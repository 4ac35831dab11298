#include "normtest/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "normtest/parallel.hpp"

namespace normtest::kernels {

namespace {

constexpr Eigen::Index kParallelThreshold = 256;

void check_shapes(const Matrix& y, const Vector& w) {
    if (y.rows() != w.size()) {
        throw InvalidArgument("kernel weights must have one entry per point");
    }
}

bool use_threads(Eigen::Index n) {
    return n >= kParallelThreshold && !in_parallel_region() && worker_count() > 1;
}

// Squared distances from point j to points k in [begin, n), written to dist[k].
void squared_distances(const Matrix& y, Eigen::Index j, Eigen::Index begin, std::vector<double>& dist) {
    const Eigen::Index n = y.rows();
    for (Eigen::Index k = begin; k < n; ++k) {
        dist[static_cast<std::size_t>(k)] = 0.0;
    }
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
        const double* col = y.col(c).data();
        const double yj = col[j];
        double* out = dist.data();
#pragma omp simd
        for (Eigen::Index k = begin; k < n; ++k) {
            const double diff = col[k] - yj;
            out[k] += diff * diff;
        }
    }
}

}  // namespace

double gauss_pair_sum(const Matrix& y, const Vector& w, double c) {
    check_shapes(y, w);
    const Eigen::Index n = y.rows();
    std::vector<double> row(static_cast<std::size_t>(n), 0.0);
    const bool threaded = use_threads(n);
#pragma omp parallel if (threaded) num_threads(worker_count())
    {
        std::vector<double> dist(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 16)
        for (Eigen::Index j = 0; j < n; ++j) {
            squared_distances(y, j, j + 1, dist);
            double acc = 0.0;
            for (Eigen::Index k = j + 1; k < n; ++k) {
                acc += w(k) * std::exp(-c * dist[static_cast<std::size_t>(k)]);
            }
            row[static_cast<std::size_t>(j)] = w(j) * acc;
        }
    }
    CompensatedSum total;
    for (double v : row) {
        total.add(v);
    }
    return total.value();
}

double gauss_pair_sum_serial(const Matrix& y, const Vector& w, double c) {
    check_shapes(y, w);
    double total = 0.0;
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
        for (Eigen::Index k = 0; k < y.rows(); ++k) {
            if (j != k) {
                total += w(j) * w(k) * std::exp(-c * (y.row(j) - y.row(k)).squaredNorm());
            }
        }
    }
    return 0.5 * total;
}

RowSums gauss_row_sums(const Matrix& y, const Vector& w, double c) {
    check_shapes(y, w);
    const Eigen::Index n = y.rows();
    const Eigen::Index d = y.cols();
    RowSums out{Vector::Zero(n), Matrix::Zero(n, d)};
    const bool threaded = use_threads(n);
#pragma omp parallel if (threaded) num_threads(worker_count())
    {
        std::vector<double> dist(static_cast<std::size_t>(n));
        std::vector<double> e(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 16)
        for (Eigen::Index j = 0; j < n; ++j) {
            squared_distances(y, j, 0, dist);
            double s = 0.0;
            for (Eigen::Index k = 0; k < n; ++k) {
                e[static_cast<std::size_t>(k)] = w(k) * std::exp(-c * dist[static_cast<std::size_t>(k)]);
                s += e[static_cast<std::size_t>(k)];
            }
            out.sums(j) = s;
            for (Eigen::Index col = 0; col < d; ++col) {
                const double* yc = y.col(col).data();
                double m = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    m += e[static_cast<std::size_t>(k)] * yc[k];
                }
                out.moments(j, col) = m;
            }
        }
    }
    return out;
}

RowSums gauss_row_sums_serial(const Matrix& y, const Vector& w, double c) {
    check_shapes(y, w);
    const Eigen::Index n = y.rows();
    RowSums out{Vector::Zero(n), Matrix::Zero(n, y.cols())};
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double e = w(k) * std::exp(-c * (y.row(j) - y.row(k)).squaredNorm());
            out.sums(j) += e;
            out.moments.row(j) += e * y.row(k);
        }
    }
    return out;
}

}  // namespace normtest::kernels
