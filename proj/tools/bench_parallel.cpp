// bench_parallel.cpp — Serial reference vs OpenMP batch evaluation on
// representative workloads: metric solves, curvature samples, and transport
// distances.

#include <chrono>
#include <cstdio>

#include "qmt/batch.hpp"
#include "qmt/builtins.hpp"
#include "qmt/curvature.hpp"
#include "qmt/entropic.hpp"
#include "qmt/transport.hpp"

using namespace qmt;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename Fn>
void bench_row(const char* name, int n, Fn&& task) {
    auto t0 = Clock::now();
    auto serial = batch::map_serial<double>(n, task);
    double ts = seconds_since(t0);

    t0 = Clock::now();
    auto parallel = batch::map<double>(n, task, 0);
    double tp = seconds_since(t0);

    double max_diff = 0;
    for (int i = 0; i < n; ++i) max_diff = std::max(max_diff, std::abs(serial[i] - parallel[i]));
    std::printf("%-28s n=%-4d serial %8.3fs  omp %8.3fs  speedup %5.2fx  max|diff| %.1e\n",
                name, n, ts, tp, ts / tp, max_diff);
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", batch::hardware_threads());

    {
        auto gen = make_depolarizing(3);
        bench_row("fisher_information d=3", 512, [&](int i) {
            DensityMatrix rho = random_density(3, 1000 + i, 1e-3);
            return fisher_information(gen, rho);
        });
    }
    {
        auto gen = make_thermal_qubit(1.0);
        bench_row("continuity solve d=2", 512, [&](int i) {
            DensityMatrix rho = random_density(2, 2000 + i, 1e-3);
            TangentField tf = solve_continuity(gen, rho, gen.schrodinger(rho.matrix()));
            return tangent_norm(gen, rho, tf.potential);
        });
    }
    {
        auto gen = make_depolarizing(4);
        bench_row("entropy hessian d=4", 256, [&](int i) {
            Rng rng(3000 + i);
            DensityMatrix rho = random_density(4, rng, 1e-3);
            Matrix U = random_traceless_hermitian(4, rng);
            return b_value(gen, rho, U);
        });
    }
    {
        auto gen = make_thermal_qubit(0.7);
        W2Options opts;
        bench_row("w2 distance d=2", 32, [&](int i) {
            DensityMatrix a = random_density(2, 4000 + 2 * i, 1e-3);
            DensityMatrix b = random_density(2, 4001 + 2 * i, 1e-3);
            return w2_distance(gen, a, b, opts).value;
        });
    }
    return 0;
}
