// transport.cpp — Twisted multiplication, gradient/divergence, metric operator,
// continuity solves, tangent norms

#include "qmt/transport.hpp"

#include <cmath>

namespace qmt {

Matrix apply_rho_omega(const Spectrum& rho_spec, double omega, const Matrix& A) {
    const int d = static_cast<int>(rho_spec.values.size());
    if (A.rows() != d || A.cols() != d)
        throw InvalidInput("apply_rho_omega: dimension mismatch");
    Matrix At = rho_spec.vectors.adjoint() * A * rho_spec.vectors;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
            At(k, l) *= kernel_phi(rho_spec.values[k], rho_spec.values[l], omega);
    return rho_spec.vectors * At * rho_spec.vectors.adjoint();
}

Matrix apply_rho_omega(const DensityMatrix& rho, double omega, const Matrix& A) {
    if (!rho.faithful()) throw NotFaithful("apply_rho_omega: rho is not faithful");
    return apply_rho_omega(rho.spectrum(), omega, A);
}

TangentField gradient(const DetailedBalanceGenerator& gen, const Matrix& U) {
    ensure_hermitian(U, 1e-10, "gradient potential");
    // commutators ignore the trace part, so the canonical potential is the
    // traceless projection (U = I gives the zero field)
    TangentField tf;
    tf.potential =
        U - (U.trace() / static_cast<double>(gen.dim())) * Matrix::Identity(gen.dim(), gen.dim());
    for (const auto& m : gen.modes()) tf.components.push_back(m.L * U - U * m.L);
    return tf;
}

Matrix divergence(const DetailedBalanceGenerator& gen, const std::vector<Matrix>& A) {
    if (A.size() != gen.modes().size())
        throw InvalidInput("divergence: component count does not match mode count");
    const int d = gen.dim();
    Matrix out = Matrix::Zero(d, d);
    for (size_t j = 0; j < A.size(); ++j) {
        Matrix Ldag = gen.modes()[j].L.adjoint();
        out += gen.modes()[j].c * (A[j] * Ldag - Ldag * A[j]);
    }
    return out;
}

MetricOperator::MetricOperator(const DetailedBalanceGenerator& gen, const DensityMatrix& rho)
    : basis_(&gen.traceless_basis()) {
    if (!rho.faithful()) throw NotFaithful("MetricOperator: rho is not faithful");
    build(gen, rho.spectrum());
}

MetricOperator::MetricOperator(const DetailedBalanceGenerator& gen, const Spectrum& rho_spec)
    : basis_(&gen.traceless_basis()) {
    if (rho_spec.values.minCoeff() <= 0)
        throw NotFaithful("MetricOperator: spectrum not strictly positive");
    build(gen, rho_spec);
}

void MetricOperator::build(const DetailedBalanceGenerator& gen, const Spectrum& spec) {
    const int n = basis_->size();
    const int d = gen.dim();
    m_.resize(n, n);
    Matrix raw(n, n);
    for (int b = 0; b < n; ++b) {
        Matrix img = Matrix::Zero(d, d);
        for (const auto& mode : gen.modes()) {
            Matrix dj = mode.L * (*basis_)[b] - (*basis_)[b] * mode.L;
            Matrix tw = apply_rho_omega(spec, mode.omega, dj);
            Matrix Ldag = mode.L.adjoint();
            img -= mode.c * (tw * Ldag - Ldag * tw); // -div contribution
        }
        for (int a = 0; a < n; ++a) raw(a, b) = ((*basis_)[a].adjoint() * img).trace();
    }
    sym_residual_ = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
    m_ = 0.5 * (raw.real() + raw.real().transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(m_);
    min_eig_ = es.eigenvalues().minCoeff();
    max_eig_ = es.eigenvalues().maxCoeff();
    ldlt_.compute(m_);
}

RealVector MetricOperator::solve_coords(const RealVector& rhs) const {
    RealVector u = ldlt_.solve(rhs);
    u += ldlt_.solve(rhs - m_ * u); // one refinement step
    return u;
}

Matrix MetricOperator::solve(const Matrix& traceless_rhs) const {
    RealVector rhs = basis_->coordinates(traceless_rhs);
    return basis_->from_coordinates(solve_coords(rhs));
}

TangentField solve_continuity(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                              const Matrix& gamma_dot) {
    ensure_hermitian(gamma_dot, 1e-10, "continuity rhs");
    if (std::abs(gamma_dot.trace()) > 1e-10 * std::max(1.0, gamma_dot.norm()))
        throw InvalidInput("solve_continuity: gamma_dot must be traceless");
    if (!rho.faithful()) throw NotFaithful("solve_continuity: rho is not faithful");
    MetricOperator metric(gen, rho);
    return gradient(gen, metric.solve(gamma_dot));
}

double tangent_norm(const DetailedBalanceGenerator& gen, const Spectrum& rho_spec,
                    const Matrix& U) {
    double acc = 0.0;
    for (const auto& m : gen.modes()) {
        Matrix dj = m.L * U - U * m.L;
        Matrix tw = apply_rho_omega(rho_spec, m.omega, dj);
        acc += m.c * (dj.adjoint() * tw).trace().real();
    }
    return std::sqrt(std::max(acc, 0.0));
}

double tangent_norm(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                    const Matrix& U) {
    if (!rho.faithful()) throw NotFaithful("tangent_norm: rho is not faithful");
    return tangent_norm(gen, rho.spectrum(), U);
}

} // namespace qmt
