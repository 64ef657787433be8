// batch.hpp — Index-parallel batch evaluation. The OpenMP path and the serial
// reference produce identical results: every task depends only on its index
// and results are merged in index order.

#pragma once

#include <exception>
#include <optional>
#include <vector>

#include <omp.h>

namespace qmt::batch {

// Serial reference implementation.
template <typename R, typename Fn>
std::vector<R> map_serial(int n, Fn&& fn) {
    std::vector<R> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
}

// OpenMP-parallel map over [0, n). threads <= 0 means the runtime default;
// threads == 1 selects the serial reference. Exceptions from tasks are
// captured and the lowest-index one is rethrown after the region.
template <typename R, typename Fn>
std::vector<R> map(int n, Fn&& fn, int threads = 0) {
    if (threads == 1 || n <= 1) return map_serial<R>(n, fn);
    std::vector<std::optional<R>> slots(static_cast<size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int i = 0; i < n; ++i) {
        try {
            slots[i].emplace(fn(i));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (int i = 0; i < n; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);
    std::vector<R> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(std::move(*slots[i]));
    return out;
}

inline int hardware_threads() { return omp_get_max_threads(); }

} // namespace qmt::batch
