// operator_core.hpp — Hermitian matrix algebra, spectral calculus, the
// divided-difference kernel of the twisted multiplication operator, and
// random test-object generation.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qmt/errors.hpp"
#include "qmt/types.hpp"

namespace qmt {

// Frobenius-relative hermiticity defect ||A - A^dag||_F / ||A||_F.
double hermiticity_defect(const Matrix& A);

// Throws InvalidInput if A is not Hermitian within tol (relative).
void ensure_hermitian(const Matrix& A, double tol = 1e-12, const char* what = "matrix");

inline Matrix hermitian_part(const Matrix& A) { return 0.5 * (A + A.adjoint()); }

struct Spectrum {
    RealVector values;  // ascending
    Matrix vectors;     // unitary, columns are eigenvectors
};

// Eigendecomposition of a Hermitian matrix. A = V diag(values) V^dag.
Spectrum spectral_decompose(const Matrix& A, double herm_tol = 1e-12);

// V f(diag) V^dag. Throws DomainError if f is not finite on the spectrum.
Matrix matrix_function(const Matrix& A, const std::function<double(double)>& f);
Matrix matrix_function(const Spectrum& spec, const std::function<double(double)>& f);

// Matrix logarithm restricted to the support (eigenvalues > support_cut are
// mapped through log, the rest are left at 0). Used by entropic quantities
// where the 0 log 0 = 0 convention applies.
Matrix log_on_support(const Spectrum& spec, double support_cut);

// phi_omega(a,b) = e^{omega/2} (a - e^{-omega} b) / (log a - log b + omega),
// the eigenbasis kernel of the twisted multiplication [rho]_omega.
// Evaluated through the stable form b e^{-omega/2} g(log(a/b)+omega) with
// g(x) = (e^x - 1)/x, so the coincident-argument limit needs no branch.
double kernel_phi(double a, double b, double omega);

// Partial derivatives of kernel_phi in its first/second argument.
double kernel_phi_da(double a, double b, double omega);
double kernel_phi_db(double a, double b, double omega);

// First divided differences of kernel_phi, with the analytic-limit
// substitution when the two arguments coincide within a relative 1e-8.
double kernel_phi_dd_first(double a1, double a2, double b, double omega);
double kernel_phi_dd_second(double a, double b1, double b2, double omega);

// Column-stacking vectorization and its inverse.
Vector vectorize(const Matrix& X);
Matrix devectorize(const Vector& v);
Matrix devectorize(const Vector& v, int dim);

// Generalized Gell-Mann family: d^2 - 1 traceless Hermitian matrices,
// orthonormal in the Hilbert-Schmidt inner product.
class TracelessBasis {
public:
    explicit TracelessBasis(int dim);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(elems_.size()); }
    const Matrix& operator[](int i) const { return elems_[i]; }

    // Coordinates of a traceless Hermitian matrix (real vector of length d^2-1).
    RealVector coordinates(const Matrix& A) const;
    Matrix from_coordinates(const RealVector& x) const;

private:
    int dim_;
    std::vector<Matrix> elems_;
};

// Unit-trace positive semidefinite matrix with cached extreme eigenvalue.
class DensityMatrix {
public:
    // Empty placeholder (dim 0); useful as a slot in result structs.
    DensityMatrix() : min_eig_(0) {}

    // Validates trace within trace_tol and eigenvalues >= -eig_tol.
    explicit DensityMatrix(const Matrix& m, double trace_tol = 1e-12, double eig_tol = 1e-12);

    const Matrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }
    double min_eigenvalue() const { return min_eig_; }
    bool faithful(double threshold = 1e-10) const { return min_eig_ > threshold; }
    const Spectrum& spectrum() const { return spec_; }

private:
    Matrix m_;
    Spectrum spec_;
    double min_eig_;
};

// Deterministic random objects. All sampling goes through an explicit engine
// so callers control reproducibility.
using Rng = std::mt19937_64;

Matrix random_hermitian(int dim, Rng& rng);               // GUE-like, entries O(1)
Matrix random_traceless_hermitian(int dim, Rng& rng);
Matrix random_unitary(int dim, Rng& rng);                 // Haar via Ginibre QR

// Faithful state: eigenvalues sampled uniformly on the simplex, convexly mixed
// toward I/d so that every eigenvalue is >= min_eig, conjugated by a Haar
// unitary. Deterministic given the seed.
DensityMatrix random_density(int dim, std::uint64_t seed, double min_eig = 0.0);
DensityMatrix random_density(int dim, Rng& rng, double min_eig = 0.0);

// |k><k| mixed with I/d by eps (eps = 0 gives the exact pure state, which is
// not faithful).
Matrix basis_pure_state(int dim, int k);

} // namespace qmt
