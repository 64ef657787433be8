// transport_coupling.cpp — Spectral couplings and the order-two coupling
// distance; exact transportation LP by successive shortest augmenting paths.

#include <algorithm>
#include <cmath>
#include <limits>

#include "qmt/batch.hpp"
#include "qmt/transport.hpp"

namespace qmt {

TransportPlan transport_lp(const RealMatrix& cost, const RealVector& supply,
                           const RealVector& demand) {
    const int m = static_cast<int>(supply.size());
    const int n = static_cast<int>(demand.size());
    if (cost.rows() != m || cost.cols() != n)
        throw InvalidInput("transport_lp: cost shape mismatch");
    const double sa = supply.sum(), sb = demand.sum();
    if (std::abs(sa - sb) > 1e-10 * std::max(1.0, std::max(sa, sb)))
        throw InvalidInput("transport_lp: supply and demand do not balance");
    for (int i = 0; i < m; ++i)
        if (supply[i] < -1e-14) throw InvalidInput("transport_lp: negative supply");
    for (int j = 0; j < n; ++j)
        if (demand[j] < -1e-14) throw InvalidInput("transport_lp: negative demand");

    RealVector a = supply.cwiseMax(0.0);
    RealVector b = demand.cwiseMax(0.0) * (a.sum() / std::max(demand.cwiseMax(0.0).sum(), 1e-300));

    TransportPlan plan;
    plan.q = RealMatrix::Zero(m, n);
    plan.u = RealVector::Zero(m);
    plan.v = RealVector::Zero(n);

    // Successive shortest augmenting paths on the bipartite residual graph.
    // Nodes: 0..m-1 sources, m..m+n-1 sinks. Bellman-Ford keeps it simple and
    // exact enough at these sizes.
    RealVector rem_a = a, rem_b = b;
    const double inf = std::numeric_limits<double>::infinity();
    const double tiny = 1e-15;

    while (true) {
        int src_seed = -1;
        for (int i = 0; i < m; ++i)
            if (rem_a[i] > tiny) {
                src_seed = i;
                break;
            }
        if (src_seed < 0) break;

        std::vector<double> dist(m + n, inf);
        std::vector<int> parent(m + n, -1);
        for (int i = 0; i < m; ++i)
            if (rem_a[i] > tiny) dist[i] = 0.0;
        for (int it = 0; it < m + n; ++it) {
            bool changed = false;
            for (int i = 0; i < m; ++i) {
                if (dist[i] == inf) continue;
                for (int j = 0; j < n; ++j) {
                    double nd = dist[i] + cost(i, j);
                    if (nd < dist[m + j] - 1e-15) {
                        dist[m + j] = nd;
                        parent[m + j] = i;
                        changed = true;
                    }
                }
            }
            for (int j = 0; j < n; ++j) {
                if (dist[m + j] == inf) continue;
                for (int i = 0; i < m; ++i) {
                    if (plan.q(i, j) <= tiny) continue; // residual back-arc
                    double nd = dist[m + j] - cost(i, j);
                    if (nd < dist[i] - 1e-15) {
                        dist[i] = nd;
                        parent[i] = m + j;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }

        // cheapest reachable sink with remaining demand
        int sink = -1;
        for (int j = 0; j < n; ++j)
            if (rem_b[j] > tiny && dist[m + j] < inf && (sink < 0 || dist[m + j] < dist[m + sink]))
                sink = j;
        if (sink < 0) throw InternalError("transport_lp: no augmenting path (infeasible)");

        // bottleneck along the path
        double push = rem_b[sink];
        int node = m + sink;
        while (parent[node] != -1) {
            int p = parent[node];
            if (node >= m) {
                // arc p -> sink(node)
            } else {
                push = std::min(push, plan.q(node, p - m));
            }
            node = p;
        }
        push = std::min(push, rem_a[node]);
        if (!(push > 0)) throw InternalError("transport_lp: zero augmentation");

        node = m + sink;
        while (parent[node] != -1) {
            int p = parent[node];
            if (node >= m)
                plan.q(p, node - m) += push;
            else
                plan.q(node, p - m) -= push;
            node = p;
        }
        rem_a[node] -= push;
        rem_b[sink] -= push;
    }

    // dual potentials from the optimal basis (complementary slackness)
    {
        std::vector<bool> udone(m, false), vdone(n, false);
        std::vector<int> stack;
        for (int i0 = 0; i0 < m; ++i0) {
            if (udone[i0]) continue;
            plan.u[i0] = 0.0;
            udone[i0] = true;
            stack.push_back(i0);
            while (!stack.empty()) {
                int node = stack.back();
                stack.pop_back();
                if (node < m) {
                    for (int j = 0; j < n; ++j)
                        if (plan.q(node, j) > tiny && !vdone[j]) {
                            plan.v[j] = cost(node, j) - plan.u[node];
                            vdone[j] = true;
                            stack.push_back(m + j);
                        }
                } else {
                    int j = node - m;
                    for (int i = 0; i < m; ++i)
                        if (plan.q(i, j) > tiny && !udone[i]) {
                            plan.u[i] = cost(i, j) - plan.v[j];
                            udone[i] = true;
                            stack.push_back(i);
                        }
                }
            }
        }
        for (int j = 0; j < n; ++j)
            if (!vdone[j]) {
                double best = inf;
                for (int i = 0; i < m; ++i) best = std::min(best, cost(i, j) - plan.u[i]);
                plan.v[j] = best;
            }
    }

    plan.cost = (plan.q.array() * cost.array()).sum();
    return plan;
}

namespace {

struct SpectralBlocks {
    std::vector<Matrix> projectors;
    std::vector<double> mass; // eigenvalue sum over the block
};

SpectralBlocks cluster_spectrum(const DensityMatrix& rho, double gap_tol = 1e-9) {
    const Spectrum& s = rho.spectrum();
    const int d = rho.dim();
    SpectralBlocks out;
    int i = 0;
    while (i < d) {
        int j = i;
        while (j + 1 < d && s.values[j + 1] - s.values[j] < gap_tol) ++j;
        double mass = 0.0;
        Matrix P = Matrix::Zero(d, d);
        for (int k = i; k <= j; ++k) {
            mass += s.values[k];
            P += s.vectors.col(k) * s.vectors.col(k).adjoint();
        }
        if (mass > 1e-12) {
            out.projectors.push_back(hermitian_part(P));
            out.mass.push_back(mass);
        }
        i = j + 1;
    }
    return out;
}

} // namespace

CouplingW2Result coupling_w2(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                             const DensityMatrix& omega, const W2Options& opts, int threads) {
    SpectralBlocks A = cluster_spectrum(rho);
    SpectralBlocks B = cluster_spectrum(omega);
    const int m = static_cast<int>(A.projectors.size());
    const int n = static_cast<int>(B.projectors.size());

    struct CostEntry {
        double c2;
    };
    std::vector<CostEntry> entries = batch::map<CostEntry>(
        m * n,
        [&](int idx) {
            const int i = idx / n, j = idx % n;
            Matrix pa = A.projectors[i] / A.projectors[i].trace().real();
            Matrix pb = B.projectors[j] / B.projectors[j].trace().real();
            W2Result w = w2_distance(gen, DensityMatrix(pa), DensityMatrix(pb), opts);
            return CostEntry{w.value * w.value};
        },
        threads);

    RealMatrix cost(m, n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = entries[i * n + j].c2;

    RealVector supply(m), demand(n);
    for (int i = 0; i < m; ++i) supply[i] = A.mass[i];
    for (int j = 0; j < n; ++j) demand[j] = B.mass[j];

    TransportPlan plan = transport_lp(cost, supply, demand);

    CouplingW2Result res;
    res.value = std::sqrt(std::max(plan.cost, 0.0));
    res.coupling.row_mass = A.mass;
    res.coupling.col_mass = B.mass;
    res.coupling.q = plan.q;
    res.cost = cost;
    res.dual_u = plan.u;
    res.dual_v = plan.v;
    return res;
}

} // namespace qmt
