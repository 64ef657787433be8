// curvature.hpp — Entropy Hessian along geodesics, geodesic integration,
// Ricci-lower-bound estimation, and its dynamic consequences.

#pragma once

#include <cstdint>
#include <vector>

#include "qmt/transport.hpp"

namespace qmt {

// The Hermitian M with <A, M> = d/dt ||grad U||^2_{L, rho + tA} at t = 0 for
// every traceless Hermitian direction A. First divided differences of the
// twisted kernel in rho's eigenbasis.
Matrix quad_form_gradient(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                          const Matrix& U);
Matrix quad_form_gradient(const DetailedBalanceGenerator& gen, const Spectrum& rho_spec,
                          const Matrix& U);

// B(rho, U) = 1/2 <grad U . grad U, L_*(rho)> - <grad L(U), grad U>_{L, rho},
// the second derivative of D(gamma(s)||sigma) along the geodesic through
// (rho, U).
double b_value(const DetailedBalanceGenerator& gen, const DensityMatrix& rho, const Matrix& U);

struct GeodesicState {
    Matrix gamma;  // density matrix along the path
    Matrix U;      // traceless Hermitian potential
    double s = 0;
};

// Classical RK4 on the coupled system
//   d gamma/ds = -div([gamma]_omega grad U),  dU/ds = -1/2 grad U ._gamma grad U.
// Aborts with BoundaryHit if the state loses faithfulness (min eig < 1e-7).
std::vector<GeodesicState> integrate_geodesic(const DetailedBalanceGenerator& gen,
                                              const DensityMatrix& rho0, const Matrix& U0,
                                              double s_max, int steps);

// B(rho, U) / ||grad U||^2; an upper bound on the optimal curvature constant.
double ricci_ratio(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                   const Matrix& U);

struct HessianSample {
    DensityMatrix rho;
    Matrix U;
    double b = 0, norm_sq = 0, ratio = 0;
};

struct RicciEstimate {
    double kappa_hat = 0;          // min ratio found; upper bound on the true kappa
    HessianSample worst;
    double stationarity = 0;       // gradient norm at the reported minimizer
    double boundary_proximity = 0; // min eigenvalue of the witness state
    bool converged = true;
};

struct RicciOptions {
    int iters = 300;
    double grad_step = 1e-5;  // numerical-gradient step
    double tol = 1e-8;        // stationarity target
    int threads = 0;
};

// Multi-start projected descent of ricci_ratio over faithful states (smooth
// exponential chart) and the unit sphere of traceless Hermitians.
RicciEstimate estimate_ricci_lower_bound(const DetailedBalanceGenerator& gen, int n_starts,
                                         std::uint64_t seed, const RicciOptions& opts = {});

// max over t_grid of (||grad Lambda_t(U)||^2_rho - e^{-2 kappa t}
// ||grad U||^2_{Lambda_*t rho}) / rhs; non-positive up to tolerance when the
// curvature bound holds.
double gradient_estimate_check(const DetailedBalanceGenerator& gen, double kappa,
                               const DensityMatrix& rho, const Matrix& U,
                               const std::vector<double>& t_grid);

struct ReversePoincareResult {
    double lhs = 0;  // Tr(Lambda_*t(rho) U^2) - Tr(rho Lambda_t(U)^2)
    double rhs = 0;  // (e^{2 kappa t} - 1)/(2 kappa) ||grad Lambda_t U||^2_rho
    bool ok = false;
};

ReversePoincareResult reverse_poincare_check(const DetailedBalanceGenerator& gen, double kappa,
                                             const DensityMatrix& rho, const Matrix& U, double t);

// Forward difference of t -> W2(rho_t, omega)^2 at 0 plus the curvature and
// entropy terms of the evolution variational inequality; <= tolerance when the
// bound holds. Positive residuals are violations.
double evi_check(const DetailedBalanceGenerator& gen, double kappa, const DensityMatrix& rho,
                 const DensityMatrix& omega_state, double h, const W2Options& opts = {});

// max over the path grid of D(gamma(s)||sigma) - [(1-s) D0 + s D1 -
// kappa/2 s(1-s) W^2]; violations are positive.
double displacement_convexity_check(const DetailedBalanceGenerator& gen, double kappa,
                                    const DiscretePath& path, double w2_value);

} // namespace qmt
