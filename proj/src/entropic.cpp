// entropic.cpp — Entropic functionals and the gradient-flow identity

#include "qmt/entropic.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>

#include "qmt/transport.hpp"

namespace qmt {

RelativeEntropyResult relative_entropy_checked(const DensityMatrix& rho,
                                               const DensityMatrix& sigma,
                                               double support_cut) {
    RelativeEntropyResult out;
    const Spectrum& rs = rho.spectrum();
    const Spectrum& ss = sigma.spectrum();
    const int d = rho.dim();
    if (sigma.dim() != d) throw InvalidInput("relative_entropy: dimension mismatch");

    // support check: mass of rho outside supp(sigma)
    double outside = 0.0;
    for (int i = 0; i < d; ++i) {
        if (ss.values[i] > support_cut) continue;
        outside += (ss.vectors.col(i).adjoint() * rho.matrix() * ss.vectors.col(i))[0].real();
    }
    if (outside > 1e-10) {
        out.support_violation = true;
        out.value = 0.0;
        return out;
    }

    double tr_rho_log_rho = 0.0;
    for (int i = 0; i < d; ++i)
        if (rs.values[i] > support_cut)
            tr_rho_log_rho += rs.values[i] * std::log(rs.values[i]);
    Matrix log_sigma = log_on_support(ss, support_cut);
    double cross = (rho.matrix() * log_sigma).trace().real();
    out.value = std::max(tr_rho_log_rho - cross, 0.0);
    return out;
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return relative_entropy_checked(rho, sigma).value;
}

double fisher_information(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                          double faithful_threshold) {
    if (!rho.faithful(faithful_threshold)) return std::numeric_limits<double>::infinity();
    Matrix log_rho = matrix_function(rho.spectrum(), [](double x) { return std::log(x); });
    Matrix drift = gen.schrodinger(rho.matrix());
    return -(drift * (log_rho - gen.log_sigma())).trace().real();
}

double dirichlet_form(const DetailedBalanceGenerator& gen, const Matrix& f) {
    ensure_hermitian(f, 1e-10, "dirichlet_form argument");
    return -(gen.sigma().matrix() * f * gen.heisenberg(f)).trace().real();
}

double variance(const DensityMatrix& sigma, const Matrix& f) {
    double second = (sigma.matrix() * f * f).trace().real();
    double first = (sigma.matrix() * f).trace().real();
    return second - first * first;
}

SpectralGapResult spectral_gap(const DetailedBalanceGenerator& gen) {
    if (!gen.is_primitive()) throw NotPrimitive("spectral_gap: generator is not primitive");
    const int d = gen.dim();

    // GNS-symmetrized Heisenberg generator H = G^{1/2} Lhat G^{-1/2} with
    // G^{1/2} = (sigma^{1/2})^T kron I.
    Matrix sqrt_sigma = matrix_function(gen.sigma().spectrum(),
                                        [](double x) { return std::sqrt(x); });
    Matrix isqrt_sigma = matrix_function(gen.sigma().spectrum(),
                                         [](double x) { return 1.0 / std::sqrt(x); });
    const Matrix id = Matrix::Identity(d, d);
    Matrix Gh = Eigen::kroneckerProduct(sqrt_sigma.transpose(), id).eval();
    Matrix Gi = Eigen::kroneckerProduct(isqrt_sigma.transpose(), id).eval();
    const Matrix& Lh = gen.superoperator(DetailedBalanceGenerator::Picture::Heisenberg);
    Matrix H = Gh * Lh * Gi;
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(H));

    // spectrum is non-positive; the gap is the largest nonzero -eigenvalue
    double lambda = 0.0;
    int idx = -1;
    const double zero_cut = 1e-9 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int i = es.eigenvalues().size() - 1; i >= 0; --i) {
        if (std::abs(es.eigenvalues()[i]) < zero_cut) continue; // kernel (multiples of I)
        lambda = -es.eigenvalues()[i];
        idx = i;
        break;
    }
    if (idx < 0) throw InternalError("spectral_gap: no nonzero eigenvalue found");

    Matrix f = devectorize(Vector(Gi * es.eigenvectors().col(idx)), d);
    // eigenspaces of a GNS-symmetric generator are *-closed; pick a Hermitian
    // representative and normalize in the sigma-weighted norm
    Matrix fh = hermitian_part(f);
    if (fh.norm() < 1e-8 * f.norm()) fh = Matrix(Complex(0, 0.5) * (f - f.adjoint()));
    double nrm = std::sqrt(std::abs((gen.sigma().matrix() * fh * fh).trace().real()));
    if (nrm > 0) fh /= nrm;
    return SpectralGapResult{lambda, fh};
}

GradientFlowResidual gradient_flow_residual(const DetailedBalanceGenerator& gen,
                                            const DensityMatrix& rho, double h) {
    if (!rho.faithful()) throw NotFaithful("gradient_flow_residual: rho is not faithful");
    const double fisher = fisher_information(gen, rho);

    auto entropy_at = [&](double t) {
        DensityMatrix rt(gen.propagate_state(rho.matrix(), t), 1e-8, 1e-8);
        return relative_entropy(rt, gen.sigma());
    };
    const double dDdt = (entropy_at(h) - entropy_at(-h)) / (2.0 * h);

    Matrix drift = gen.schrodinger(rho.matrix());
    TangentField tf = solve_continuity(gen, rho, drift);
    double norm2 = tangent_norm(gen, rho, tf.potential);
    norm2 *= norm2;

    const double scale = std::max(fisher, 1e-14);
    return GradientFlowResidual{std::abs(dDdt + fisher) / scale,
                                std::abs(fisher - norm2) / scale};
}

} // namespace qmt
