// generator.hpp — Detailed-balance quantum Markov semigroup generators:
// construction from raw jump operators per the structure theorem, validation,
// application in both pictures, and semigroup evolution.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmt/operator_core.hpp"

namespace qmt {

struct JumpMode {
    Matrix L;      // normalized so Tr(L^dag L) = dim
    double c;      // positive weight
    double omega;  // Bohr frequency, Delta_sigma(L) = e^{-omega} L
};

// Residuals of the structure-theorem conditions; validate() fills this and
// from_modes() enforces it.
struct GeneratorValidation {
    double normalization = 0;        // |Tr(Lj^dag Lk)/d - delta_jk|, max over pairs
    double traceless = 0;            // |Tr Lj|, max
    double adjoint_closure = 0;      // distance to the best adjoint partner, max
    double modular_eigenvector = 0;  // ||Delta_sigma(Lj) - e^{-omega_j} Lj|| / ||Lj||, max
    double unital = 0;               // ||L(I)||_F
    double invariance = 0;           // ||L_*(sigma)||_F
    double detailed_balance = 0;     // max entry of G Lhat - Lhat^dag G, G the GNS Gram

    // First failing condition name, or empty if all pass.
    std::string failing(double norm_tol = 1e-8, double trace_tol = 1e-10,
                        double adj_tol = 1e-10, double mod_tol = 1e-8,
                        double unital_tol = 1e-10, double inv_tol = 1e-10,
                        double dbc_tol = 1e-9) const;
};

class DetailedBalanceGenerator {
public:
    enum class Picture { Heisenberg, Schrodinger };

    // Converse direction of the structure theorem: decompose raw operators
    // into modular eigencomponents, traceless-project, orthonormalize within
    // each Bohr-frequency block, close under adjoints with matched (c, -omega).
    static DetailedBalanceGenerator from_raw(const DensityMatrix& sigma,
                                             const std::vector<Matrix>& raw_ops,
                                             const std::vector<double>& weights);

    // Validates every structure-theorem condition before accepting.
    static DetailedBalanceGenerator from_modes(const DensityMatrix& sigma,
                                               std::vector<JumpMode> modes);

    // No validation; for diagnostics that want to report residuals of a
    // defective mode set rather than reject it outright.
    static DetailedBalanceGenerator from_modes_unchecked(const DensityMatrix& sigma,
                                                         std::vector<JumpMode> modes);

    int dim() const { return sigma_.dim(); }
    const DensityMatrix& sigma() const { return sigma_; }
    const std::vector<JumpMode>& modes() const { return modes_; }
    const Matrix& log_sigma() const { return log_sigma_; }
    const TracelessBasis& traceless_basis() const { return basis_; }

    // sup_j omega_j / (e^{omega_j/2}-e^{-omega_j/2}) times the spectral norm of
    // the pseudo-inverse of -div(grad .) on the traceless subspace.
    double k_lindblad() const { return k_lindblad_; }

    Matrix heisenberg(const Matrix& X) const;    // L(X)
    Matrix schrodinger(const Matrix& rho) const; // L_*(rho)

    const Matrix& superoperator(Picture p) const;

    // exp(t L_*)(rho); t >= 0, trace and positivity preserved numerically.
    DensityMatrix evolve(const DensityMatrix& rho, double t) const;

    // Unchecked propagators (t may be negative; used by derivative oracles).
    Matrix propagate_state(const Matrix& rho, double t) const;      // exp(t L_*)
    Matrix propagate_observable(const Matrix& X, double t) const;   // exp(t L) = Lambda_t

    // Kernel of the Heisenberg superoperator is one-dimensional.
    bool is_primitive(double threshold = 1e-9) const;

    GeneratorValidation validate() const;

    // Same modes with every weight multiplied by factor > 0.
    DetailedBalanceGenerator scaled(double factor) const;

private:
    DetailedBalanceGenerator(DensityMatrix sigma, std::vector<JumpMode> modes);
    void build_caches();

    DensityMatrix sigma_;
    std::vector<JumpMode> modes_;
    TracelessBasis basis_;
    Matrix log_sigma_;
    double k_lindblad_ = 0;

    // per-mode precomputation
    struct ModeCache {
        Matrix Ldag, LdagL, LLdag;
        double em, ep; // e^{-omega/2}, e^{+omega/2}
    };
    std::vector<ModeCache> mode_cache_;

    Matrix super_h_, super_s_;   // d^2 x d^2 superoperators
    // GNS-symmetrized eigensystem: H = G^{1/2} Lhat G^{-1/2} Hermitian,
    // G = sigma^T kron I.
    Matrix gns_vectors_, gns_half_, gns_half_inv_;
    RealVector gns_values_;
    bool gns_usable_ = false;
};

double spectral_norm(const Matrix& A);
double trace_norm(const Matrix& A);

} // namespace qmt
