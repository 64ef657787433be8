// entropic.hpp — Relative entropy, Fisher information / entropy production,
// variance, Dirichlet form, spectral gap, and the gradient-flow identity check.

#pragma once

#include "qmt/generator.hpp"

namespace qmt {

struct RelativeEntropyResult {
    double value = 0.0;
    bool support_violation = false; // supp(rho) not inside supp(sigma); value is 0
};

// D(rho||sigma) = Tr(rho (log rho - log sigma)) when supp(rho) <= supp(sigma),
// else 0 with the violation flag set.
RelativeEntropyResult relative_entropy_checked(const DensityMatrix& rho,
                                               const DensityMatrix& sigma,
                                               double support_cut = 1e-12);
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

// I_sigma(rho) = -Tr(L_*(rho)(log rho - log sigma)) for faithful rho,
// +infinity otherwise.
double fisher_information(const DetailedBalanceGenerator& gen, const DensityMatrix& rho,
                          double faithful_threshold = 1e-10);

// -Tr(sigma f L(f)) for Hermitian f.
double dirichlet_form(const DetailedBalanceGenerator& gen, const Matrix& f);

// Var_sigma(f) = Tr(sigma f^2) - Tr(sigma f)^2.
double variance(const DensityMatrix& sigma, const Matrix& f);

struct SpectralGapResult {
    double lambda = 0.0; // smallest nonzero eigenvalue of -L (GNS-symmetrized)
    Matrix minimizer;    // Hermitian, sigma-centered eigenvector achieving it
};

// Optimal Poincare constant. Throws NotPrimitive for non-primitive generators.
SpectralGapResult spectral_gap(const DetailedBalanceGenerator& gen);

struct GradientFlowResidual {
    double entropy_derivative = 0.0; // |d/dt D(rho_t||sigma) + I_sigma(rho)| / I
    double metric_norm = 0.0;        // |I_sigma(rho) - ||L_*(rho)||_g^2| / I
};

// Both residuals of the gradient-flow identity; finite differences with
// central step h for the time derivative.
GradientFlowResidual gradient_flow_residual(const DetailedBalanceGenerator& gen,
                                            const DensityMatrix& rho, double h = 1e-4);

} // namespace qmt
