// generator.cpp — Structure-theorem construction and semigroup machinery

#include "qmt/generator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace qmt {

double spectral_norm(const Matrix& A) {
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double trace_norm(const Matrix& A) {
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues().sum();
}

namespace {

// omega / (e^{omega/2} - e^{-omega/2}), continuous value 1 at omega = 0.
double omega_over_twosinh(double omega) {
    if (std::abs(omega) < 1e-12) return 1.0;
    return omega / (2.0 * std::sinh(omega / 2.0));
}

struct BohrComponent {
    double weight;
    Matrix C; // in sigma's eigenbasis
};

} // namespace

std::string GeneratorValidation::failing(double norm_tol, double trace_tol, double adj_tol,
                                         double mod_tol, double unital_tol, double inv_tol,
                                         double dbc_tol) const {
    if (traceless > trace_tol) return "condition 2 (traceless modes)";
    if (normalization > norm_tol) return "condition 1 (mode normalization)";
    if (adjoint_closure > adj_tol) return "condition 3 (adjoint closure)";
    if (modular_eigenvector > mod_tol) return "condition 4 (modular eigenvector)";
    if (unital > unital_tol) return "unitality L(I)=0";
    if (invariance > inv_tol) return "invariance L_*(sigma)=0";
    if (detailed_balance > dbc_tol) return "detailed balance";
    return {};
}

DetailedBalanceGenerator::DetailedBalanceGenerator(DensityMatrix sigma, std::vector<JumpMode> modes)
    : sigma_(std::move(sigma)), modes_(std::move(modes)), basis_(sigma_.dim()) {
    build_caches();
}

DetailedBalanceGenerator DetailedBalanceGenerator::from_modes(const DensityMatrix& sigma,
                                                              std::vector<JumpMode> modes) {
    if (!sigma.faithful()) throw NotFaithful("from_modes: sigma is not faithful");
    if (modes.empty()) throw DegenerateGenerator("from_modes: empty mode set");
    for (const auto& m : modes) {
        if (!(m.c > 0)) throw InvalidInput("from_modes: weights must be positive");
        if (m.L.rows() != sigma.dim() || m.L.cols() != sigma.dim())
            throw InvalidInput("from_modes: mode dimension mismatch");
    }
    DetailedBalanceGenerator gen(sigma, std::move(modes));
    GeneratorValidation v = gen.validate();
    if (auto name = v.failing(); !name.empty())
        throw InvalidInput("from_modes: generator violates " + name);
    return gen;
}

DetailedBalanceGenerator DetailedBalanceGenerator::from_modes_unchecked(
    const DensityMatrix& sigma, std::vector<JumpMode> modes) {
    if (!sigma.faithful()) throw NotFaithful("from_modes_unchecked: sigma is not faithful");
    if (modes.empty()) throw DegenerateGenerator("from_modes_unchecked: empty mode set");
    return DetailedBalanceGenerator(sigma, std::move(modes));
}

DetailedBalanceGenerator DetailedBalanceGenerator::from_raw(const DensityMatrix& sigma,
                                                            const std::vector<Matrix>& raw_ops,
                                                            const std::vector<double>& weights) {
    if (!sigma.faithful()) throw NotFaithful("from_raw: sigma is not faithful");
    if (raw_ops.empty() || raw_ops.size() != weights.size())
        throw InvalidInput("from_raw: need matching non-empty raw_ops and weights");
    const int d = sigma.dim();
    for (size_t i = 0; i < raw_ops.size(); ++i) {
        if (raw_ops[i].rows() != d || raw_ops[i].cols() != d)
            throw InvalidInput("from_raw: raw operator dimension mismatch");
        if (raw_ops[i].norm() == 0.0) throw InvalidInput("from_raw: zero raw operator");
        if (!(weights[i] > 0)) throw InvalidInput("from_raw: weights must be positive");
    }

    const Spectrum& ss = sigma.spectrum();
    RealVector loglam(d);
    for (int i = 0; i < d; ++i) loglam[i] = std::log(ss.values[i]);

    // Bohr frequency of entry (k,l): Delta_sigma(E_kl) = (lam_k/lam_l) E_kl,
    // so omega(k,l) = log lam_l - log lam_k. Cluster |omega| with a 1e-8 merge
    // tolerance; clustering absolute values keeps the class set symmetric.
    constexpr double kMergeTol = 1e-8;
    RealMatrix entry_omega(d, d);
    std::vector<double> absvals;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            entry_omega(k, l) = loglam[l] - loglam[k];
            if (std::abs(entry_omega(k, l)) >= kMergeTol)
                absvals.push_back(std::abs(entry_omega(k, l)));
        }
    std::sort(absvals.begin(), absvals.end());
    std::vector<double> centers; // positive class representatives
    for (double v : absvals) {
        if (centers.empty() || v - centers.back() > kMergeTol) centers.push_back(v);
    }
    auto class_of = [&](double om) -> int {
        // 0 encodes the zero class, +/-(i+1) the signed class around centers[i]
        if (std::abs(om) < kMergeTol) return 0;
        int best = -1;
        double bestd = kMergeTol * 2;
        for (size_t i = 0; i < centers.size(); ++i) {
            double dd = std::abs(std::abs(om) - centers[i]);
            if (dd < bestd) {
                bestd = dd;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) throw InternalError("from_raw: unclassified Bohr frequency");
        return (om > 0 ? best + 1 : -(best + 1));
    };

    auto mask_class = [&](const Matrix& R, int cls) {
        Matrix C = Matrix::Zero(d, d);
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
                if (class_of(entry_omega(k, l)) == cls) C(k, l) = R(k, l);
        return C;
    };

    // Components per class, in sigma's eigenbasis. For the zero class the raw
    // contribution and its adjoint are replaced by their Hermitian and
    // anti-Hermitian parts (the cross terms cancel in the quadratic form), so
    // the extracted modes come out self-adjoint.
    std::map<int, std::vector<BohrComponent>> blocks;
    double comp_scale = 0.0;
    for (size_t i = 0; i < raw_ops.size(); ++i) {
        const double w = weights[i];
        Matrix R = ss.vectors.adjoint() * raw_ops[i] * ss.vectors;
        const double rnorm = R.norm();
        for (size_t ci = 0; ci < centers.size(); ++ci) {
            const int cls = static_cast<int>(ci) + 1;
            Matrix Cp = mask_class(R, cls);
            Matrix Cm = mask_class(R, -cls);
            if (Cp.norm() > 1e-12 * rnorm)
                blocks[cls].push_back({w / 2.0, Cp});
            if (Cm.norm() > 1e-12 * rnorm)
                blocks[cls].push_back({w / 2.0, Matrix(Cm.adjoint())});
        }
        Matrix C0 = mask_class(R, 0);
        C0 -= (C0.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
        Matrix h = 0.5 * (C0 + C0.adjoint());
        Matrix a = (C0 - C0.adjoint()) / Complex(0, 2);
        if (h.norm() > 1e-12 * rnorm) blocks[0].push_back({w, h});
        if (a.norm() > 1e-12 * rnorm) blocks[0].push_back({w, a});
        comp_scale += w * rnorm * rnorm;
    }

    std::vector<JumpMode> modes;
    const double mu_cut = 1e-12 * std::max(comp_scale, 1e-300);
    const double sqrt_d = std::sqrt(static_cast<double>(d));

    // Positive-frequency blocks: diagonalize the quadratic-form matrix of the
    // components, emit orthonormal modes, and mirror exact adjoint partners
    // into the opposite block.
    for (auto& [cls, comps] : blocks) {
        if (cls <= 0) continue;
        const double omega = centers[cls - 1];
        Matrix M = Matrix::Zero(d * d, d * d);
        for (const auto& comp : comps) {
            Vector v = vectorize(comp.C);
            M += comp.weight * v * v.adjoint();
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(M);
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            const double mu = es.eigenvalues()[i];
            if (mu <= mu_cut) continue;
            Matrix L = devectorize(Vector(es.eigenvectors().col(i)), d) * sqrt_d;
            modes.push_back({ss.vectors * L * ss.vectors.adjoint(), mu / d, omega});
            modes.push_back({ss.vectors * L.adjoint() * ss.vectors.adjoint(), mu / d, -omega});
        }
    }

    // Zero block in real Gell-Mann coordinates restricted to the class mask;
    // eigenvectors are then Hermitian by construction even when degenerate.
    if (auto it = blocks.find(0); it != blocks.end() && !it->second.empty()) {
        TracelessBasis full(d);
        std::vector<int> sub; // basis elements supported on the zero class
        for (int i = 0; i < full.size(); ++i) {
            bool inside = true;
            for (int k = 0; k < d && inside; ++k)
                for (int l = 0; l < d; ++l)
                    if (std::abs(full[i](k, l)) > 0 && class_of(entry_omega(k, l)) != 0) {
                        inside = false;
                        break;
                    }
            if (inside) sub.push_back(i);
        }
        const int n = static_cast<int>(sub.size());
        RealMatrix M0 = RealMatrix::Zero(n, n);
        for (const auto& comp : it->second) {
            RealVector x(n);
            for (int i = 0; i < n; ++i)
                x[i] = (full[sub[i]].adjoint() * comp.C).trace().real();
            M0 += comp.weight * x * x.transpose();
        }
        Eigen::SelfAdjointEigenSolver<RealMatrix> es(M0);
        for (int i = 0; i < n; ++i) {
            const double mu = es.eigenvalues()[i];
            if (mu <= mu_cut) continue;
            Matrix L = Matrix::Zero(d, d);
            for (int k = 0; k < n; ++k) L += es.eigenvectors()(k, i) * full[sub[k]];
            L *= sqrt_d;
            modes.push_back({ss.vectors * L * ss.vectors.adjoint(), mu / d, 0.0});
        }
    }

    if (modes.empty())
        throw DegenerateGenerator("from_raw: raw operators have no traceless modular component");

    DetailedBalanceGenerator gen(sigma, std::move(modes));
    GeneratorValidation v = gen.validate();
    if (auto name = v.failing(); !name.empty())
        throw InternalError("from_raw: constructed generator violates " + name);
    return gen;
}

void DetailedBalanceGenerator::build_caches() {
    const int d = dim();
    log_sigma_ = matrix_function(sigma_.spectrum(), [](double x) { return std::log(x); });

    mode_cache_.clear();
    for (const auto& m : modes_) {
        ModeCache mc;
        mc.Ldag = m.L.adjoint();
        mc.LdagL = mc.Ldag * m.L;
        mc.LLdag = m.L * mc.Ldag;
        mc.em = std::exp(-m.omega / 2.0);
        mc.ep = std::exp(m.omega / 2.0);
        mode_cache_.push_back(std::move(mc));
    }

    // superoperators, column-stacking convention
    const Matrix id = Matrix::Identity(d, d);
    super_h_ = Matrix::Zero(d * d, d * d);
    for (size_t j = 0; j < modes_.size(); ++j) {
        const auto& m = modes_[j];
        const auto& mc = mode_cache_[j];
        super_h_ += m.c * mc.em *
                    (Eigen::kroneckerProduct(m.L.transpose(), mc.Ldag).eval() -
                     Eigen::kroneckerProduct(id, mc.LdagL).eval());
        super_h_ += m.c * mc.ep *
                    (Eigen::kroneckerProduct(m.L.conjugate(), m.L).eval() -
                     Eigen::kroneckerProduct(mc.LLdag.transpose(), id).eval());
    }
    super_s_ = super_h_.adjoint();

    // GNS symmetrization: G^{1/2} = (sigma^{1/2})^T kron I
    const Spectrum& ss = sigma_.spectrum();
    const double cond = ss.values.maxCoeff() / std::max(ss.values.minCoeff(), 1e-300);
    gns_usable_ = sigma_.faithful() && cond < 1e8;
    if (gns_usable_) {
        Matrix sqrt_sigma = matrix_function(ss, [](double x) { return std::sqrt(x); });
        Matrix isqrt_sigma = matrix_function(ss, [](double x) { return 1.0 / std::sqrt(x); });
        gns_half_ = Eigen::kroneckerProduct(sqrt_sigma.transpose(), id).eval();
        gns_half_inv_ = Eigen::kroneckerProduct(isqrt_sigma.transpose(), id).eval();
        Matrix H = gns_half_ * super_h_ * gns_half_inv_;
        Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(H));
        gns_values_ = es.eigenvalues();
        gns_vectors_ = es.eigenvectors();
    }

    // K_L: pseudo-inverse of -div(grad .) on the traceless subspace
    const int n = basis_.size();
    RealMatrix dirichlet = RealMatrix::Zero(n, n);
    for (int b = 0; b < n; ++b) {
        Matrix img = Matrix::Zero(d, d);
        for (size_t j = 0; j < modes_.size(); ++j) {
            Matrix dj = modes_[j].L * basis_[b] - basis_[b] * modes_[j].L;
            img += modes_[j].c * (mode_cache_[j].Ldag * dj - dj * mode_cache_[j].Ldag);
        }
        for (int a = 0; a <= b; ++a) {
            double v = (basis_[a].adjoint() * img).trace().real();
            dirichlet(a, b) = v;
            dirichlet(b, a) = v;
        }
    }
    Eigen::SelfAdjointEigenSolver<RealMatrix> des(dirichlet);
    double lam_min_pos = 0.0;
    const double cut = 1e-12 * std::max(des.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < n; ++i)
        if (des.eigenvalues()[i] > cut) {
            lam_min_pos = des.eigenvalues()[i];
            break;
        }
    double sup_factor = 0.0;
    for (const auto& m : modes_) sup_factor = std::max(sup_factor, omega_over_twosinh(m.omega));
    k_lindblad_ = lam_min_pos > 0 ? sup_factor / lam_min_pos : 0.0;
}

Matrix DetailedBalanceGenerator::heisenberg(const Matrix& X) const {
    if (X.rows() != dim() || X.cols() != dim())
        throw InvalidInput("heisenberg: dimension mismatch");
    Matrix out = Matrix::Zero(dim(), dim());
    for (size_t j = 0; j < modes_.size(); ++j) {
        const auto& m = modes_[j];
        const auto& mc = mode_cache_[j];
        out += (m.c * mc.em) * (mc.Ldag * X * m.L - mc.LdagL * X);
        out += (m.c * mc.ep) * (m.L * X * mc.Ldag - X * mc.LLdag);
    }
    return out;
}

Matrix DetailedBalanceGenerator::schrodinger(const Matrix& rho) const {
    if (rho.rows() != dim() || rho.cols() != dim())
        throw InvalidInput("schrodinger: dimension mismatch");
    Matrix out = Matrix::Zero(dim(), dim());
    for (size_t j = 0; j < modes_.size(); ++j) {
        const auto& m = modes_[j];
        const auto& mc = mode_cache_[j];
        out += (m.c * mc.ep) * (mc.Ldag * rho * m.L - mc.LLdag * rho);
        out += (m.c * mc.em) * (m.L * rho * mc.Ldag - rho * mc.LdagL);
    }
    return out;
}

const Matrix& DetailedBalanceGenerator::superoperator(Picture p) const {
    return p == Picture::Heisenberg ? super_h_ : super_s_;
}

Matrix DetailedBalanceGenerator::propagate_state(const Matrix& rho, double t) const {
    if (gns_usable_) {
        Vector v = gns_half_inv_ * vectorize(rho);
        v = gns_vectors_.adjoint() * v;
        for (int i = 0; i < v.size(); ++i) v[i] *= std::exp(t * gns_values_[i]);
        v = gns_half_ * (gns_vectors_ * v);
        return hermitian_part(devectorize(v, dim()));
    }
    Matrix expm = (t * super_s_).exp();
    return hermitian_part(devectorize(Vector(expm * vectorize(rho)), dim()));
}

Matrix DetailedBalanceGenerator::propagate_observable(const Matrix& X, double t) const {
    if (gns_usable_) {
        Vector v = gns_half_ * vectorize(X);
        v = gns_vectors_.adjoint() * v;
        for (int i = 0; i < v.size(); ++i) v[i] *= std::exp(t * gns_values_[i]);
        v = gns_half_inv_ * (gns_vectors_ * v);
        return hermitian_part(devectorize(v, dim()));
    }
    Matrix expm = (t * super_h_).exp();
    return hermitian_part(devectorize(Vector(expm * vectorize(X)), dim()));
}

DensityMatrix DetailedBalanceGenerator::evolve(const DensityMatrix& rho, double t) const {
    if (t < 0) throw InvalidInput("evolve: t must be non-negative");
    if (rho.dim() != dim()) throw InvalidInput("evolve: dimension mismatch");
    Matrix out = propagate_state(rho.matrix(), t);
    return DensityMatrix(out, 1e-10, 1e-10);
}

bool DetailedBalanceGenerator::is_primitive(double threshold) const {
    Eigen::JacobiSVD<Matrix> svd(super_h_);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return false;
    int null_dim = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] < threshold * sv[0]) ++null_dim;
    return null_dim == 1;
}

GeneratorValidation DetailedBalanceGenerator::validate() const {
    GeneratorValidation v;
    const int d = dim();
    const size_t nj = modes_.size();

    for (size_t j = 0; j < nj; ++j) {
        v.traceless = std::max(v.traceless, std::abs(modes_[j].L.trace()));
        for (size_t k = 0; k < nj; ++k) {
            Complex ip = (modes_[j].L.adjoint() * modes_[k].L).trace() / static_cast<double>(d);
            double target = (j == k) ? 1.0 : 0.0;
            v.normalization = std::max(v.normalization, std::abs(ip - target));
        }
        // adjoint partner
        double best = std::numeric_limits<double>::infinity();
        Matrix Ldag = modes_[j].L.adjoint();
        for (size_t k = 0; k < nj; ++k) {
            double r = (modes_[k].L - Ldag).norm() / std::sqrt(static_cast<double>(d)) +
                       std::abs(modes_[k].c - modes_[j].c) +
                       std::abs(modes_[k].omega + modes_[j].omega);
            best = std::min(best, r);
        }
        v.adjoint_closure = std::max(v.adjoint_closure, best);
        // modular eigenvector condition in sigma's eigenbasis
        const Spectrum& ss = sigma_.spectrum();
        Matrix Lt = ss.vectors.adjoint() * modes_[j].L * ss.vectors;
        Matrix delta(d, d);
        for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l)
                delta(k, l) = (ss.values[k] / ss.values[l]) * Lt(k, l);
        v.modular_eigenvector =
            std::max(v.modular_eigenvector,
                     (delta - std::exp(-modes_[j].omega) * Lt).norm() / Lt.norm());
    }

    v.unital = heisenberg(Matrix::Identity(d, d)).norm();
    v.invariance = schrodinger(sigma_.matrix()).norm();

    Matrix G = Eigen::kroneckerProduct(sigma_.matrix().transpose(), Matrix::Identity(d, d)).eval();
    Matrix defect = G * super_h_ - super_h_.adjoint() * G;
    v.detailed_balance = defect.cwiseAbs().maxCoeff();
    return v;
}

DetailedBalanceGenerator DetailedBalanceGenerator::scaled(double factor) const {
    if (!(factor > 0)) throw InvalidInput("scaled: factor must be positive");
    std::vector<JumpMode> modes = modes_;
    for (auto& m : modes) m.c *= factor;
    return DetailedBalanceGenerator(sigma_, std::move(modes));
}

} // namespace qmt
