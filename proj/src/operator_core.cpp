// operator_core.cpp — Spectral calculus and kernel evaluation

#include "qmt/operator_core.hpp"

#include <cmath>

namespace qmt {

double hermiticity_defect(const Matrix& A) {
    const double n = A.norm();
    if (n == 0.0) return 0.0;
    return (A - Matrix(A.adjoint())).norm() / n;
}

void ensure_hermitian(const Matrix& A, double tol, const char* what) {
    if (A.rows() != A.cols()) throw InvalidInput(std::string(what) + ": not square");
    if (hermiticity_defect(A) > tol)
        throw InvalidInput(std::string(what) + ": not Hermitian within tolerance");
}

Spectrum spectral_decompose(const Matrix& A, double herm_tol) {
    ensure_hermitian(A, herm_tol);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(A));
    if (es.info() != Eigen::Success) throw InternalError("eigensolver failed to converge");
    return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

Matrix matrix_function(const Spectrum& spec, const std::function<double(double)>& f) {
    const int d = static_cast<int>(spec.values.size());
    RealVector fv(d);
    for (int i = 0; i < d; ++i) {
        fv[i] = f(spec.values[i]);
        if (!std::isfinite(fv[i]))
            throw DomainError("matrix_function: f not finite at eigenvalue " +
                              std::to_string(spec.values[i]));
    }
    return spec.vectors * fv.asDiagonal() * spec.vectors.adjoint();
}

Matrix matrix_function(const Matrix& A, const std::function<double(double)>& f) {
    return matrix_function(spectral_decompose(A), f);
}

Matrix log_on_support(const Spectrum& spec, double support_cut) {
    const int d = static_cast<int>(spec.values.size());
    RealVector fv(d);
    for (int i = 0; i < d; ++i)
        fv[i] = spec.values[i] > support_cut ? std::log(spec.values[i]) : 0.0;
    return spec.vectors * fv.asDiagonal() * spec.vectors.adjoint();
}

namespace {

// g(x) = (e^x - 1)/x and its derivative, stable near x = 0.
double g_fn(double x) {
    if (std::abs(x) < 1e-12) return 1.0 + 0.5 * x;
    return std::expm1(x) / x;
}

double g_deriv(double x) {
    if (std::abs(x) < 1e-2) {
        // series of (e^x(x-1)+1)/x^2, accurate to ~1e-16 on this range
        return 0.5 + x * (1.0 / 3.0 + x * (1.0 / 8.0 + x * (1.0 / 30.0 + x * (1.0 / 144.0 + x / 840.0))));
    }
    return (std::exp(x) - g_fn(x)) / x;
}

} // namespace

double kernel_phi(double a, double b, double omega) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("kernel_phi: arguments must be positive");
    const double x = std::log(a / b) + omega;
    return b * std::exp(-omega / 2.0) * g_fn(x);
}

double kernel_phi_da(double a, double b, double omega) {
    const double x = std::log(a / b) + omega;
    return (b / a) * std::exp(-omega / 2.0) * g_deriv(x);
}

double kernel_phi_db(double a, double b, double omega) {
    const double x = std::log(a / b) + omega;
    return std::exp(-omega / 2.0) * (g_fn(x) - g_deriv(x));
}

double kernel_phi_dd_first(double a1, double a2, double b, double omega) {
    if (std::abs(a1 - a2) <= 1e-8 * (a1 + a2))
        return kernel_phi_da(0.5 * (a1 + a2), b, omega);
    return (kernel_phi(a1, b, omega) - kernel_phi(a2, b, omega)) / (a1 - a2);
}

double kernel_phi_dd_second(double a, double b1, double b2, double omega) {
    if (std::abs(b1 - b2) <= 1e-8 * (b1 + b2))
        return kernel_phi_db(a, 0.5 * (b1 + b2), omega);
    return (kernel_phi(a, b1, omega) - kernel_phi(a, b2, omega)) / (b1 - b2);
}

Vector vectorize(const Matrix& X) {
    return Eigen::Map<const Vector>(X.data(), X.size());
}

Matrix devectorize(const Vector& v) {
    const int d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (static_cast<long>(d) * d != v.size())
        throw InvalidInput("devectorize: length is not a perfect square");
    return devectorize(v, d);
}

Matrix devectorize(const Vector& v, int dim) {
    if (static_cast<long>(dim) * dim != v.size())
        throw InvalidInput("devectorize: dimension mismatch");
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

TracelessBasis::TracelessBasis(int dim) : dim_(dim) {
    if (dim < 2) throw InvalidInput("TracelessBasis: dim must be >= 2");
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < dim; ++j) {
        for (int k = j + 1; k < dim; ++k) {
            Matrix sym = Matrix::Zero(dim, dim);
            sym(j, k) = inv_sqrt2;
            sym(k, j) = inv_sqrt2;
            elems_.push_back(sym);
            Matrix asym = Matrix::Zero(dim, dim);
            asym(j, k) = Complex(0, -inv_sqrt2);
            asym(k, j) = Complex(0, inv_sqrt2);
            elems_.push_back(asym);
        }
    }
    for (int l = 1; l < dim; ++l) {
        Matrix diag = Matrix::Zero(dim, dim);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
        for (int j = 0; j < l; ++j) diag(j, j) = norm;
        diag(l, l) = -static_cast<double>(l) * norm;
        elems_.push_back(diag);
    }
}

RealVector TracelessBasis::coordinates(const Matrix& A) const {
    RealVector x(size());
    for (int i = 0; i < size(); ++i)
        x[i] = (elems_[i].adjoint() * A).trace().real();
    return x;
}

Matrix TracelessBasis::from_coordinates(const RealVector& x) const {
    if (x.size() != size()) throw InvalidInput("TracelessBasis: coordinate length mismatch");
    Matrix A = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < size(); ++i) A += x[i] * elems_[i];
    return A;
}

DensityMatrix::DensityMatrix(const Matrix& m, double trace_tol, double eig_tol)
    : m_(hermitian_part(m)) {
    ensure_hermitian(m, 1e-10, "DensityMatrix");
    if (std::abs(m.trace().real() - 1.0) > trace_tol || std::abs(m.trace().imag()) > trace_tol)
        throw InvalidInput("DensityMatrix: trace is not 1 within tolerance");
    spec_ = spectral_decompose(m_);
    min_eig_ = spec_.values.minCoeff();
    if (min_eig_ < -eig_tol)
        throw InvalidInput("DensityMatrix: negative eigenvalue " + std::to_string(min_eig_));
}

Matrix random_hermitian(int dim, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix A(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) A(i, j) = Complex(gauss(rng), gauss(rng));
    return hermitian_part(A);
}

Matrix random_traceless_hermitian(int dim, Rng& rng) {
    Matrix A = random_hermitian(dim, rng);
    A -= (A.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
    return A;
}

Matrix random_unitary(int dim, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix G(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) G(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ();
    Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    // fix phases so the distribution is Haar
    for (int j = 0; j < dim; ++j) {
        Complex r = R(j, j);
        Q.col(j) *= (std::abs(r) > 0 ? r / std::abs(r) : Complex(1, 0));
    }
    return Q;
}

DensityMatrix random_density(int dim, Rng& rng, double min_eig) {
    if (min_eig < 0.0 || min_eig >= 1.0 / dim)
        throw InvalidInput("random_density: min_eig must lie in [0, 1/dim)");
    // uniform simplex point via normalized exponentials
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    RealVector p(dim);
    double total = 0.0;
    for (int i = 0; i < dim; ++i) {
        double u = unif(rng);
        while (u <= 0.0) u = unif(rng);
        p[i] = -std::log(u);
        total += p[i];
    }
    p /= total;
    const double shrink = 1.0 - dim * min_eig;
    RealVector lam = (shrink * p).array() + min_eig;
    Matrix U = random_unitary(dim, rng);
    Matrix rho = U * lam.asDiagonal() * U.adjoint();
    return DensityMatrix(hermitian_part(rho));
}

DensityMatrix random_density(int dim, std::uint64_t seed, double min_eig) {
    Rng rng(seed);
    return random_density(dim, rng, min_eig);
}

Matrix basis_pure_state(int dim, int k) {
    if (k < 0 || k >= dim) throw InvalidInput("basis_pure_state: index out of range");
    Matrix m = Matrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return m;
}

} // namespace qmt
