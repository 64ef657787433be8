// curvature.cpp — Entropy Hessian, geodesics, curvature estimation, and the
// dynamic consequence checks

#include "qmt/curvature.hpp"

#include <cmath>

#include "qmt/batch.hpp"
#include "qmt/entropic.hpp"

namespace qmt {

Matrix quad_form_gradient(const DetailedBalanceGenerator& gen, const Spectrum& spec,
                          const Matrix& U) {
    const int d = gen.dim();
    if (U.rows() != d || U.cols() != d) throw InvalidInput("quad_form_gradient: dim mismatch");
    const RealVector& lam = spec.values;
    const Matrix& V = spec.vectors;

    Matrix W = Matrix::Zero(d, d);
    for (const auto& mode : gen.modes()) {
        Matrix dj = mode.L * U - U * mode.L;
        Matrix Vt = V.adjoint() * dj * V;
        for (int k = 0; k < d; ++k) {
            for (int m = 0; m < d; ++m) {
                Complex s1(0, 0), s2(0, 0);
                for (int l = 0; l < d; ++l) {
                    s1 += kernel_phi_dd_first(lam[k], lam[m], lam[l], mode.omega) *
                          Vt(m, l) * std::conj(Vt(k, l));
                    s2 += kernel_phi_dd_second(lam[l], lam[k], lam[m], mode.omega) *
                          Vt(l, k) * std::conj(Vt(l, m));
                }
                W(k, m) += mode.c * (s1 + s2);
            }
        }
    }
    Matrix M = hermitian_part(W.transpose());
    M -= (M.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
    return V * M * V.adjoint();
}

Matrix quad_form_gradient(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                          const Matrix& U) {
    if (!rho.faithful()) throw NotFaithful("quad_form_gradient: rho is not faithful");
    return quad_form_gradient(gen, rho.spectrum(), U);
}

double b_value(const DetailedBalanceGenerator& gen, const DensityMatrix& rho, const Matrix& U) {
    if (!rho.faithful()) throw NotFaithful("b_value: rho is not faithful");
    const Spectrum& spec = rho.spectrum();
    Matrix M = quad_form_gradient(gen, spec, U);
    Matrix drift = gen.schrodinger(rho.matrix());
    double first = 0.5 * (M.adjoint() * drift).trace().real();

    Matrix LU = gen.heisenberg(U);
    Complex second(0, 0);
    for (const auto& mode : gen.modes()) {
        Matrix dLU = mode.L * LU - LU * mode.L;
        Matrix dU = mode.L * U - U * mode.L;
        second += mode.c * (dLU.adjoint() * apply_rho_omega(spec, mode.omega, dU)).trace();
    }
    return first - second.real();
}

namespace {

struct GeodesicRhs {
    const DetailedBalanceGenerator& gen;

    void operator()(const Matrix& gamma, const Matrix& U, Matrix& dgamma, Matrix& dU) const {
        Spectrum spec = spectral_decompose(hermitian_part(gamma));
        if (spec.values.minCoeff() < 1e-7)
            throw BoundaryHit("integrate_geodesic: state lost faithfulness");
        std::vector<Matrix> flux;
        flux.reserve(gen.modes().size());
        for (const auto& mode : gen.modes()) {
            Matrix dj = mode.L * U - U * mode.L;
            flux.push_back(apply_rho_omega(spec, mode.omega, dj));
        }
        dgamma = -divergence(gen, flux);
        dU = -0.5 * quad_form_gradient(gen, spec, U);
    }
};

} // namespace

std::vector<GeodesicState> integrate_geodesic(const DetailedBalanceGenerator& gen,
                                              const DensityMatrix& rho0, const Matrix& U0,
                                              double s_max, int steps) {
    if (!rho0.faithful()) throw NotFaithful("integrate_geodesic: rho0 is not faithful");
    ensure_hermitian(U0, 1e-10, "geodesic potential");
    if (std::abs(U0.trace()) > 1e-10 * std::max(1.0, U0.norm()))
        throw InvalidInput("integrate_geodesic: U0 must be traceless");
    if (steps < 1 || !(s_max > 0)) throw InvalidInput("integrate_geodesic: bad grid");
    const double h = s_max / steps;
    if (h < 1e-12) throw IntegrationError("integrate_geodesic: step size underflow");

    GeodesicRhs rhs{gen};
    std::vector<GeodesicState> out;
    out.reserve(steps + 1);
    Matrix g = rho0.matrix(), u = U0;
    out.push_back({g, u, 0.0});
    Matrix k1g, k1u, k2g, k2u, k3g, k3u, k4g, k4u;
    for (int i = 0; i < steps; ++i) {
        rhs(g, u, k1g, k1u);
        rhs(g + 0.5 * h * k1g, u + 0.5 * h * k1u, k2g, k2u);
        rhs(g + 0.5 * h * k2g, u + 0.5 * h * k2u, k3g, k3u);
        rhs(g + h * k3g, u + h * k3u, k4g, k4u);
        g += (h / 6.0) * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        g = hermitian_part(g);
        u = hermitian_part(u);
        out.push_back({g, u, (i + 1) * h});
    }
    return out;
}

double ricci_ratio(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                   const Matrix& U) {
    double n = tangent_norm(gen, rho, U);
    if (n < 1e-12 * std::max(1.0, U.norm()))
        throw InvalidInput("ricci_ratio: potential has zero gradient norm");
    return b_value(gen, rho, U) / (n * n);
}

namespace {

// smooth chart: rho(x) = exp(H(x)) / Tr exp(H(x)), U(y) = y / |y| in the
// traceless basis
struct RicciObjective {
    const DetailedBalanceGenerator& gen;
    const TracelessBasis& basis;

    double operator()(const RealVector& x, const RealVector& y) const {
        Matrix H = basis.from_coordinates(x);
        Matrix expH = matrix_function(H, [](double t) { return std::exp(t); });
        Matrix rho = expH / expH.trace().real();
        Spectrum spec = spectral_decompose(hermitian_part(rho));
        Matrix U = basis.from_coordinates(RealVector(y / y.norm()));

        double nrm = tangent_norm(gen, spec, U);
        if (nrm < 1e-10) return std::numeric_limits<double>::infinity();

        // inline b_value on the shared spectrum
        Matrix M = quad_form_gradient(gen, spec, U);
        Matrix drift = gen.schrodinger(rho);
        double first = 0.5 * (M.adjoint() * drift).trace().real();
        Matrix LU = gen.heisenberg(U);
        Complex second(0, 0);
        for (const auto& mode : gen.modes()) {
            Matrix dLU = mode.L * LU - LU * mode.L;
            Matrix dU = mode.L * U - U * mode.L;
            second += mode.c * (dLU.adjoint() * apply_rho_omega(spec, mode.omega, dU)).trace();
        }
        return (first - second.real()) / (nrm * nrm);
    }
};

} // namespace

RicciEstimate estimate_ricci_lower_bound(const DetailedBalanceGenerator& gen, int n_starts,
                                         std::uint64_t seed, const RicciOptions& opts) {
    if (!gen.is_primitive()) throw NotPrimitive("estimate_ricci_lower_bound: not primitive");
    if (n_starts < 1) throw InvalidInput("estimate_ricci_lower_bound: n_starts must be >= 1");
    const TracelessBasis& basis = gen.traceless_basis();
    const int n = basis.size();
    RicciObjective obj{gen, basis};

    struct StartResult {
        double value = std::numeric_limits<double>::infinity();
        RealVector x, y;
        double grad_norm = 0;
        bool converged = false;
    };

    auto run_start = [&](int s) {
        Rng rng(seed + 0x9e3779b97f4a7c15ull * (s + 1));
        DensityMatrix rho0 = random_density(gen.dim(), rng, 1e-3);
        Matrix H0 = matrix_function(rho0.spectrum(), [](double t) { return std::log(t); });
        H0 -= (H0.trace() / static_cast<double>(gen.dim())) * Matrix::Identity(gen.dim(), gen.dim());
        RealVector x = basis.coordinates(H0);
        RealVector y(n);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int i = 0; i < n; ++i) y[i] = gauss(rng);
        y /= y.norm();

        double f = obj(x, y);
        RealVector gx(n), gy(n);
        double step = 0.1;
        StartResult res;
        for (int it = 0; it < opts.iters; ++it) {
            // central-difference gradient
            const double h = opts.grad_step;
            for (int i = 0; i < n; ++i) {
                RealVector xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                gx[i] = (obj(xp, y) - obj(xm, y)) / (2 * h);
                RealVector yp = y, ym = y;
                yp[i] += h;
                ym[i] -= h;
                gy[i] = (obj(x, yp) - obj(x, ym)) / (2 * h);
            }
            // project the y-gradient onto the sphere tangent
            gy -= gy.dot(y) * y;
            double gnorm = std::sqrt(gx.squaredNorm() + gy.squaredNorm());
            res.grad_norm = gnorm;
            if (gnorm < opts.tol) {
                res.converged = true;
                break;
            }
            // backtracking
            bool accepted = false;
            for (int bt = 0; bt < 40; ++bt) {
                RealVector xn = x - step * gx;
                RealVector yn = y - step * gy;
                yn /= yn.norm();
                double fn = obj(xn, yn);
                if (fn < f - 1e-4 * step * gnorm * gnorm) {
                    x = xn;
                    y = yn;
                    f = fn;
                    accepted = true;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                res.converged = res.grad_norm < 1e2 * opts.tol;
                break;
            }
        }
        res.value = f;
        res.x = x;
        res.y = y;
        return res;
    };

    std::vector<StartResult> results =
        batch::map<StartResult>(n_starts, run_start, opts.threads);

    RicciEstimate est;
    est.kappa_hat = std::numeric_limits<double>::infinity();
    bool any_conv = false;
    int best = 0;
    for (int s = 0; s < n_starts; ++s) {
        if (results[s].value < est.kappa_hat) {
            est.kappa_hat = results[s].value;
            best = s;
        }
        any_conv = any_conv || results[s].converged;
    }
    est.converged = any_conv;
    est.stationarity = results[best].grad_norm;

    Matrix H = basis.from_coordinates(results[best].x);
    Matrix expH = matrix_function(H, [](double t) { return std::exp(t); });
    DensityMatrix rho(Matrix(expH / expH.trace().real()));
    Matrix U = basis.from_coordinates(RealVector(results[best].y / results[best].y.norm()));
    double nrm = tangent_norm(gen, rho, U);
    est.worst = HessianSample{rho, U, est.kappa_hat * nrm * nrm, nrm * nrm, est.kappa_hat};
    est.boundary_proximity = rho.min_eigenvalue();
    return est;
}

double gradient_estimate_check(const DetailedBalanceGenerator& gen, double kappa,
                               const DensityMatrix& rho, const Matrix& U,
                               const std::vector<double>& t_grid) {
    if (!rho.faithful()) throw NotFaithful("gradient_estimate_check: rho is not faithful");
    double worst = -std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        Matrix Ut = gen.propagate_observable(U, t);
        Ut -= (Ut.trace() / static_cast<double>(gen.dim())) *
              Matrix::Identity(gen.dim(), gen.dim());
        double lhs = tangent_norm(gen, rho, Ut);
        lhs *= lhs;
        DensityMatrix rho_t(gen.propagate_state(rho.matrix(), t), 1e-8, 1e-8);
        double rhs = tangent_norm(gen, rho_t, U);
        rhs *= rhs;
        double bound = std::exp(-2.0 * kappa * t) * rhs;
        worst = std::max(worst, (lhs - bound) / std::max(rhs, 1e-300));
    }
    return worst;
}

ReversePoincareResult reverse_poincare_check(const DetailedBalanceGenerator& gen, double kappa,
                                             const DensityMatrix& rho, const Matrix& U,
                                             double t) {
    if (!rho.faithful()) throw NotFaithful("reverse_poincare_check: rho is not faithful");
    if (!(t > 0)) throw InvalidInput("reverse_poincare_check: t must be positive");
    Matrix Ut = gen.propagate_observable(U, t);
    Matrix rho_t = gen.propagate_state(rho.matrix(), t);
    double lhs = (rho_t * U * U).trace().real() - (rho.matrix() * Ut * Ut).trace().real();

    Matrix Ut0 = Ut - (Ut.trace() / static_cast<double>(gen.dim())) *
                          Matrix::Identity(gen.dim(), gen.dim());
    double gn = tangent_norm(gen, rho, Ut0);
    double factor = std::abs(kappa) < 1e-12 ? t : (std::expm1(2.0 * kappa * t) / (2.0 * kappa));
    double rhs = factor * gn * gn;
    return ReversePoincareResult{lhs, rhs, lhs >= rhs * (1.0 - 1e-6) - 1e-12};
}

double evi_check(const DetailedBalanceGenerator& gen, double kappa, const DensityMatrix& rho,
                 const DensityMatrix& omega_state, double h, const W2Options& opts) {
    if (!rho.faithful() || !omega_state.faithful())
        throw NotFaithful("evi_check: states must be faithful");
    W2Result w0 = w2_distance(gen, rho, omega_state, opts);
    DensityMatrix rho_h = gen.evolve(rho, h);
    W2Result wh = w2_distance(gen, rho_h, omega_state, opts);
    double ddt = (wh.value * wh.value - w0.value * w0.value) / h;
    double lhs = 0.5 * ddt + 0.5 * kappa * w0.value * w0.value;
    double rhs = relative_entropy(omega_state, gen.sigma()) - relative_entropy(rho, gen.sigma());
    return lhs - rhs; // positive = violation
}

double displacement_convexity_check(const DetailedBalanceGenerator& gen, double kappa,
                                    const DiscretePath& path, double w2_value) {
    const auto& sigma = gen.sigma();
    const int n = static_cast<int>(path.states.size());
    if (n < 2) return 0.0;
    double d0 = relative_entropy(DensityMatrix(path.states.front(), 1e-8, 1e-8), sigma);
    double d1 = relative_entropy(DensityMatrix(path.states.back(), 1e-8, 1e-8), sigma);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double s = path.grid[i];
        double ds = relative_entropy(DensityMatrix(path.states[i], 1e-8, 1e-8), sigma);
        double bound = (1 - s) * d0 + s * d1 - 0.5 * kappa * s * (1 - s) * w2_value * w2_value;
        worst = std::max(worst, ds - bound);
    }
    return worst;
}

} // namespace qmt
