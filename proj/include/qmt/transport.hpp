// transport.hpp — The transport metric on faithful states: twisted
// multiplication [rho]_omega, gradient/divergence, the metric operator,
// continuity-equation solves, the discretized Wasserstein distance, the
// trace-norm comparison bound, diameter estimation, and the coupling distance.

#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "qmt/generator.hpp"

namespace qmt {

// [rho]_omega(A): entry (k,l) in rho's eigenbasis is phi_omega(lam_k, lam_l) A_kl.
Matrix apply_rho_omega(const Spectrum& rho_spec, double omega, const Matrix& A);
Matrix apply_rho_omega(const DensityMatrix& rho, double omega, const Matrix& A);

struct TangentField {
    Matrix potential;                // traceless Hermitian U
    std::vector<Matrix> components;  // partial_j U = [L_j, U]
};

// Stores the traceless projection of U; the commutator components ignore the
// trace part, so U proportional to the identity gives the zero field.
TangentField gradient(const DetailedBalanceGenerator& gen, const Matrix& U);

// div(A) = sum_j c_j [A_j, L_j^dag]; length must match the mode count.
Matrix divergence(const DetailedBalanceGenerator& gen, const std::vector<Matrix>& A);

// U |-> -div([rho]_omega grad U) in traceless-basis coordinates. Symmetric
// positive definite for faithful rho.
class MetricOperator {
public:
    MetricOperator(const DetailedBalanceGenerator& gen, const DensityMatrix& rho);
    MetricOperator(const DetailedBalanceGenerator& gen, const Spectrum& rho_spec);

    const RealMatrix& matrix() const { return m_; }
    double min_eigenvalue() const { return min_eig_; }
    double max_eigenvalue() const { return max_eig_; }
    double symmetry_residual() const { return sym_residual_; }

    // Solve -div([rho]_omega grad U) = rhs for traceless U (one refinement step).
    Matrix solve(const Matrix& traceless_rhs) const;
    RealVector solve_coords(const RealVector& rhs_coords) const;
    RealVector apply_coords(const RealVector& u_coords) const { return m_ * u_coords; }

private:
    void build(const DetailedBalanceGenerator& gen, const Spectrum& spec);
    const TracelessBasis* basis_;
    RealMatrix m_;
    Eigen::LDLT<RealMatrix> ldlt_;
    double min_eig_ = 0, max_eig_ = 0, sym_residual_ = 0;
};

// Unique traceless U with -div([rho]_omega grad U) = gamma_dot.
TangentField solve_continuity(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                              const Matrix& gamma_dot);

// sqrt(sum_j c_j <partial_j U, [rho]_omega_j partial_j U>).
double tangent_norm(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                    const Matrix& U);
double tangent_norm(const DetailedBalanceGenerator& gen, const Spectrum& rho_spec,
                    const Matrix& U);

struct DiscretePath {
    RealVector grid;                 // s_i = i/N
    std::vector<Matrix> states;      // N+1 density matrices
    std::vector<Matrix> potentials;  // N midpoint potentials
    double energy = 0.0;             // sum_i ||grad U_i||^2 at midpoints * ds
};

// Recompute the discrete transport energy from states and potentials.
double path_energy(const DetailedBalanceGenerator& gen, const DiscretePath& path);

nlohmann::json path_to_json(const DiscretePath& path);

struct W2Options {
    int grid_points = 16;           // interior segments N
    double eps_floor = 1e-8;        // eigenvalue floor for interior states
    int max_iters = 600;
    double tol = 1e-4;              // stationarity target for the descent
    double faithful_threshold = 1e-10;
    int reparam_rounds = 2;
    std::uint64_t unused_seed = 0;  // reserved
};

struct W2Result {
    double value = 0.0;     // length of the optimized path (upper bound)
    DiscretePath path;
    double stationarity = 0.0;
    int iterations = 0;
    bool converged = true;  // false = iteration budget exhausted (warning)
    std::vector<double> energy_trace;
};

// Discretized Wasserstein distance. Non-faithful endpoints are replaced by
// (1-eps) rho + eps I/d for eps in {1e-2, 1e-3, 1e-4} with order-1 Richardson
// extrapolation of the value; the returned path belongs to the smallest eps.
W2Result w2_distance(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                     const DensityMatrix& omega, const W2Options& opts = {});

struct W1BoundResult {
    double lhs = 0;  // ||rho - omega||_1
    double rhs = 0;  // 2 (sum_j c_j (e^{-w/2}+e^{w/2}) ||L_j||_inf^2)^{1/2} W2
    bool ok = false;
    W2Result w2;
};

W1BoundResult w1_bound_check(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                             const DensityMatrix& omega, const W2Options& opts = {});

struct DiameterEstimate {
    double value = 0.0;  // certified lower bound on the diameter
    DensityMatrix best_a, best_b;
};

// Max of w2_distance over n_pairs sampled pairs (nested in n_pairs for a fixed
// seed), seeded with orthogonal pure-state pairs.
DiameterEstimate diameter_estimate(const DetailedBalanceGenerator& gen, int n_pairs,
                                   std::uint64_t seed, const W2Options& opts = {},
                                   int threads = 0);

struct Coupling {
    std::vector<double> row_mass;  // lam_i Tr(P_i)
    std::vector<double> col_mass;  // mu_j Tr(Q_j)
    RealMatrix q;                  // optimal table, marginals above
};

struct CouplingW2Result {
    double value = 0.0;  // sqrt(sum q_ij W2(rho_i, omega_j)^2)
    Coupling coupling;
    RealMatrix cost;     // squared pure-block distances
    RealVector dual_u, dual_v;  // optimality certificate potentials
};

CouplingW2Result coupling_w2(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                             const DensityMatrix& omega, const W2Options& opts = {},
                             int threads = 0);

// Exact transportation LP by successive shortest augmenting paths.
// supply/demand must balance within 1e-10 (rescaled internally).
struct TransportPlan {
    RealMatrix q;
    RealVector u, v;  // dual potentials
    double cost = 0.0;
};
TransportPlan transport_lp(const RealMatrix& cost, const RealVector& supply,
                           const RealVector& demand);

} // namespace qmt
