// unit_operator_core.cpp — Spectral calculus, kernels, vectorization, sampling

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmt/operator_core.hpp"
#include "support/oracles.hpp"

using namespace qmt;

TEST_CASE("spectral_decompose basics") {
    Matrix id = Matrix::Identity(2, 2);
    Spectrum s = spectral_decompose(id);
    CHECK(s.values[0] == doctest::Approx(1.0));
    CHECK(s.values[1] == doctest::Approx(1.0));

    Matrix diag = Matrix::Zero(2, 2);
    diag(0, 0) = 0.2;
    diag(1, 1) = 0.8;
    Spectrum sd = spectral_decompose(diag);
    CHECK(sd.values[0] == doctest::Approx(0.2));
    CHECK(sd.values[1] == doctest::Approx(0.8));
}

TEST_CASE("spectral_decompose round trip on random Hermitians, dims 2-6") {
    for (int d = 2; d <= 6; ++d) {
        for (int rep = 0; rep < 20; ++rep) {
            Rng rng(1000 * d + rep);
            Matrix A = random_hermitian(d, rng);
            Spectrum s = spectral_decompose(A);
            Matrix rec = s.vectors * s.values.asDiagonal() * s.vectors.adjoint();
            CHECK((rec - A).norm() <= 1e-11 * A.norm());
            for (int i = 1; i < d; ++i) CHECK(s.values[i] >= s.values[i - 1]);
        }
    }
}

TEST_CASE("spectral_decompose rejects non-Hermitian input") {
    Matrix bad(2, 2);
    bad << 1.0, 2.0, 3.0, 4.0;
    CHECK_THROWS_AS(spectral_decompose(bad), InvalidInput);
}

TEST_CASE("matrix_function diagonal and identity cases") {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = 1.0;
    A(1, 1) = std::exp(1.0);
    Matrix lg = matrix_function(A, [](double x) { return std::log(x); });
    CHECK(std::abs(lg(0, 0)) < 1e-14);
    CHECK(lg(1, 1).real() == doctest::Approx(1.0));

    Rng rng(7);
    Matrix B = random_hermitian(3, rng);
    Matrix same = matrix_function(B, [](double x) { return x; });
    CHECK((same - B).norm() < 1e-12 * B.norm());
}

TEST_CASE("matrix_function power vs recomputed eigendecomposition") {
    Rng rng(42);
    Matrix A = random_hermitian(3, rng);
    Matrix psd = A * A.adjoint() + 0.1 * Matrix::Identity(3, 3);
    psd = hermitian_part(psd);
    Matrix p = matrix_function(psd, [](double x) { return std::pow(x, 0.3); });
    // independent route: diagonalize with Eigen directly
    Eigen::SelfAdjointEigenSolver<Matrix> es(psd);
    Matrix q = es.eigenvectors() *
               es.eigenvalues().array().pow(0.3).matrix().asDiagonal() *
               es.eigenvectors().adjoint();
    CHECK((p - q).norm() <= 1e-9 * q.norm());
}

TEST_CASE("matrix_function domain error on log of singular matrix") {
    Matrix A = Matrix::Zero(2, 2);
    A(1, 1) = 1.0;
    CHECK_THROWS_AS(matrix_function(A, [](double x) { return std::log(x); }), DomainError);
}

TEST_CASE("exp and exp(-x) compose to identity") {
    Rng rng(11);
    Matrix A = random_hermitian(4, rng);
    Matrix e = matrix_function(A, [](double x) { return std::exp(x); });
    Matrix em = matrix_function(A, [](double x) { return std::exp(-x); });
    CHECK((e * em - Matrix::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("kernel_phi coincident-argument values") {
    // phi_0(lam, lam) = lam
    CHECK(kernel_phi(0.3, 0.3, 0.0) == doctest::Approx(0.3).epsilon(1e-12));
    // phi_omega(lam, lam) = lam 2 sinh(omega/2)/omega
    for (double omega : {0.5, -1.3, 2.0}) {
        double expected = 0.7 * 2.0 * std::sinh(omega / 2) / omega;
        CHECK(kernel_phi(0.7, 0.7, omega) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("kernel_phi matches the quadrature of the multiplication integral") {
    Rng rng(5);
    std::uniform_real_distribution<double> unif(0.05, 2.0);
    std::uniform_real_distribution<double> uom(-2.0, 2.0);
    for (int rep = 0; rep < 200; ++rep) {
        double a = unif(rng), b = unif(rng), omega = uom(rng);
        // integral_0^1 e^{omega(1/2-s)} a^s b^{1-s} ds carries the transposed
        // orientation of the spectral kernel
        double integral = oracle::kernel_integral(a, b, omega);
        CHECK(kernel_phi(b, a, omega) == doctest::Approx(integral).epsilon(1e-10));
        CHECK(kernel_phi(a, b, -omega) == doctest::Approx(integral).epsilon(1e-10));
    }
}

TEST_CASE("kernel_phi symmetry phi_omega(a,b) = phi_{-omega}(b,a)") {
    Rng rng(6);
    std::uniform_real_distribution<double> unif(0.01, 3.0);
    std::uniform_real_distribution<double> uom(-3.0, 3.0);
    for (int rep = 0; rep < 500; ++rep) {
        double a = unif(rng), b = unif(rng), omega = uom(rng);
        CHECK(kernel_phi(a, b, omega) ==
              doctest::Approx(kernel_phi(b, a, -omega)).epsilon(1e-13));
    }
}

TEST_CASE("kernel_phi positivity and near-degenerate stability") {
    Rng rng(8);
    std::uniform_real_distribution<double> unif(1e-6, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        double a = unif(rng);
        double b = a * (1.0 + 1e-9);
        double omega = -std::log(a / b); // log a - log b + omega ~ 0
        double v = kernel_phi(a, b, omega);
        CHECK(v > 0);
        CHECK(std::isfinite(v));
        // analytic limit e^{-omega/2} b
        CHECK(v == doctest::Approx(std::exp(-omega / 2) * b).epsilon(1e-6));
    }
    CHECK_THROWS_AS(kernel_phi(-1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(kernel_phi(1.0, 0.0, 0.0), DomainError);
}

TEST_CASE("kernel_phi divided differences match finite differences") {
    Rng rng(9);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        double a = unif(rng), b = unif(rng), omega = unif(rng) - 1.0;
        const double h = 1e-6;
        double fd_a = (kernel_phi(a + h, b, omega) - kernel_phi(a - h, b, omega)) / (2 * h);
        CHECK(kernel_phi_da(a, b, omega) == doctest::Approx(fd_a).epsilon(1e-7));
        double fd_b = (kernel_phi(a, b + h, omega) - kernel_phi(a, b - h, omega)) / (2 * h);
        CHECK(kernel_phi_db(a, b, omega) == doctest::Approx(fd_b).epsilon(1e-7));
        // divided differences: exact quotient away from coincidence
        double a2 = a + 0.3;
        double dd = (kernel_phi(a, b, omega) - kernel_phi(a2, b, omega)) / (a - a2);
        CHECK(kernel_phi_dd_first(a, a2, b, omega) == doctest::Approx(dd).epsilon(1e-12));
        // coincident limit equals the partial derivative
        CHECK(kernel_phi_dd_first(a, a * (1 + 1e-12), b, omega) ==
              doctest::Approx(kernel_phi_da(a, b, omega)).epsilon(1e-8));
    }
}

TEST_CASE("vectorize convention and round trip") {
    Matrix X(2, 2);
    X << Complex(1, 0), Complex(3, 0), Complex(2, 0), Complex(4, 0); // row-major fill
    Vector v = vectorize(X);
    // column stacking: (a, c, b, d) for [[a, b], [c, d]]
    CHECK(v[0] == Complex(1, 0));
    CHECK(v[1] == Complex(2, 0));
    CHECK(v[2] == Complex(3, 0));
    CHECK(v[3] == Complex(4, 0));

    Rng rng(13);
    Matrix Y = random_hermitian(3, rng);
    CHECK((devectorize(vectorize(Y)) - Y).norm() == 0.0);
}

TEST_CASE("vectorize intertwines with Kronecker products") {
    Rng rng(14);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix A = random_hermitian(3, rng), X = random_hermitian(3, rng),
               B = random_hermitian(3, rng);
        Matrix AXB = A * X * B;
        // (B^T kron A) vec(X)
        Matrix kron(9, 9);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                kron.block(3 * i, 3 * j, 3, 3) = B.transpose()(i, j) * A;
        CHECK((vectorize(AXB) - kron * vectorize(X)).norm() < 1e-12 * AXB.norm());
    }
}

TEST_CASE("TracelessBasis is orthonormal and traceless") {
    for (int d = 2; d <= 4; ++d) {
        TracelessBasis basis(d);
        CHECK(basis.size() == d * d - 1);
        for (int i = 0; i < basis.size(); ++i) {
            CHECK(std::abs(basis[i].trace()) < 1e-14);
            CHECK(hermiticity_defect(basis[i]) < 1e-14);
            for (int j = 0; j <= i; ++j) {
                Complex ip = (basis[i].adjoint() * basis[j]).trace();
                CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-13);
            }
        }
        // coordinates round trip
        Rng rng(d);
        Matrix A = random_traceless_hermitian(d, rng);
        CHECK((basis.from_coordinates(basis.coordinates(A)) - A).norm() < 1e-12);
    }
}

TEST_CASE("DensityMatrix validation") {
    Matrix good = Matrix::Identity(2, 2) / 2.0;
    DensityMatrix rho(good);
    CHECK(rho.min_eigenvalue() == doctest::Approx(0.5));
    CHECK(rho.faithful());

    Matrix bad_trace = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix{bad_trace}, InvalidInput);

    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, InvalidInput);
}

TEST_CASE("random_density determinism and eigenvalue range") {
    DensityMatrix a = random_density(2, 123, 0.4);
    DensityMatrix b = random_density(2, 123, 0.4);
    CHECK((a.matrix() - b.matrix()).norm() == 0.0);
    // trace-1 constraint forces both eigenvalues into [0.4, 0.6]
    CHECK(a.min_eigenvalue() >= 0.4 - 1e-12);
    CHECK(a.spectrum().values.maxCoeff() <= 0.6 + 1e-12);

    CHECK_THROWS_AS(random_density(2, 1, 0.5), InvalidInput);
    CHECK_THROWS_AS(random_density(2, 1, -0.1), InvalidInput);
}

TEST_CASE("random_density mean converges to the maximally mixed state") {
    const int n = 10000, d = 3;
    Matrix mean = Matrix::Zero(d, d);
    for (int i = 0; i < n; ++i) mean += random_density(d, 50000 + i, 0.0).matrix();
    mean /= double(n);
    // Haar conjugation gives exactly I/d in expectation; allow 3 sigma with
    // entry fluctuations O(1/sqrt(n))
    CHECK((mean - Matrix::Identity(d, d) / double(d)).norm() < 3.0 * 1.0 / std::sqrt(double(n)));
}

TEST_CASE("random_unitary is unitary") {
    Rng rng(77);
    for (int d = 2; d <= 5; ++d) {
        Matrix u = random_unitary(d, rng);
        CHECK((u * u.adjoint() - Matrix::Identity(d, d)).norm() < 1e-12);
    }
}
