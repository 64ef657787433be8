// acceptance.cpp — End-to-end acceptance battery. One line per criterion;
// exit code 0 only if every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qmt/batch.hpp"
#include "qmt/builtins.hpp"
#include "qmt/curvature.hpp"
#include "qmt/entropic.hpp"
#include "qmt/inequalities.hpp"
#include "qmt/json_io.hpp"
#include "qmt/transport.hpp"
#include "support/oracles.hpp"

using namespace qmt;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_structure_roundtrip() {
    auto t0 = Clock::now();
    double worst = 0;
    int built = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const int d = 2 + rep % 3;
        Rng rng(5000 + rep);
        DensityMatrix sigma = random_density(d, rng, 3e-2);
        std::vector<Matrix> raws;
        std::vector<double> weights;
        const int n_raw = 1 + rep % 3;
        std::normal_distribution<double> gauss;
        for (int i = 0; i < n_raw; ++i) {
            Matrix g(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
            raws.push_back(g);
            weights.push_back(0.3 + (rep + i) % 4 * 0.4);
        }
        auto gen = DetailedBalanceGenerator::from_raw(sigma, raws, weights);
        GeneratorValidation v = gen.validate();
        worst = std::max({worst, v.normalization, v.traceless, v.adjoint_closure,
                          v.modular_eigenvector, v.unital, v.invariance, v.detailed_balance});
        ++built;
    }
    double elapsed = seconds_since(t0);
    bool pass = built == 20 && worst <= 1e-8 && elapsed < 5.0;
    report(1, pass,
           "structure-theorem round trip: 20 generators dims 2-4, worst residual " + fmt(worst) +
               ", " + fmt(elapsed) + " s");
}

// ---------------------------------------------------------------- criterion 2
void criterion_kernel_quadrature() {
    Rng rng(6000);
    std::uniform_real_distribution<double> uom(-2.0, 2.0);
    double worst = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int d = 2 + rep % 3;
        DensityMatrix rho = random_density(d, rng, 1e-2);
        Matrix A = random_hermitian(d, rng);
        double omega = uom(rng);
        Matrix lib = apply_rho_omega(rho, omega, A);
        Matrix itg = oracle::rho_omega_integral(rho.matrix(), omega, A, 64);
        worst = std::max(worst, (lib - itg).norm() / std::max(1.0, itg.norm()));
    }
    report(2, worst <= 1e-9,
           "twisted multiplication: spectral kernel vs integral quadrature on 100 triples, "
           "worst residual " + fmt(worst));
}

// ---------------------------------------------------------------- criterion 3
void criterion_gradient_flow() {
    struct Family {
        const char* name;
        DetailedBalanceGenerator gen;
    };
    std::vector<Family> families;
    families.push_back({"depolarizing(2)", make_depolarizing(2)});
    families.push_back({"depolarizing(3)", make_depolarizing(3)});
    families.push_back({"thermal_qubit(1.0)", make_thermal_qubit(1.0)});
    double worst = 0;
    for (const auto& fam : families) {
        std::vector<double> res = batch::map<double>(50, [&](int i) {
            DensityMatrix rho = random_density(fam.gen.dim(), 7000 + i, 1e-2);
            GradientFlowResidual r = gradient_flow_residual(fam.gen, rho);
            return std::max(r.entropy_derivative, r.metric_norm);
        });
        for (double r : res) worst = std::max(worst, r);
    }
    report(3, worst <= 1e-5,
           "gradient-flow identity on 50 states per builtin family, worst relative residual " +
               fmt(worst));
}

// ---------------------------------------------------------------- criterion 4
void criterion_metric_operator() {
    auto gen = make_thermal_qubit(1.0);
    auto gen3 = make_depolarizing(3);
    double worst_sym = 0, worst_roundtrip = 0;
    bool pd = true, bound_ok = true;
    for (int rep = 0; rep < 50; ++rep) {
        const DetailedBalanceGenerator& g = rep % 2 ? gen3 : gen;
        Rng rng(8000 + rep);
        DensityMatrix rho = random_density(g.dim(), rng, 1e-3);
        MetricOperator M(g, rho);
        worst_sym = std::max(worst_sym, M.symmetry_residual());
        pd = pd && M.min_eigenvalue() > 0;
        bound_ok = bound_ok && M.min_eigenvalue() >= 0.9 * rho.min_eigenvalue() / g.k_lindblad();

        Matrix U0 = random_traceless_hermitian(g.dim(), rng);
        TangentField tf = gradient(g, U0);
        std::vector<Matrix> tw;
        for (size_t j = 0; j < tf.components.size(); ++j)
            tw.push_back(apply_rho_omega(rho, g.modes()[j].omega, tf.components[j]));
        Matrix gdot = -divergence(g, tw);
        TangentField rec = solve_continuity(g, rho, gdot);
        worst_roundtrip = std::max(worst_roundtrip, (rec.potential - U0).norm() / U0.norm());
    }
    bool pass = worst_sym <= 1e-10 && pd && bound_ok && worst_roundtrip <= 1e-9;
    report(4, pass,
           "metric operator: symmetry " + fmt(worst_sym) + ", PD " + (pd ? "yes" : "NO") +
               ", inverse bound " + (bound_ok ? "holds" : "VIOLATED") + ", continuity round trip " +
               fmt(worst_roundtrip));
}

// ---------------------------------------------------------------- criterion 5
void criterion_entropy_hessian() {
    auto gen = make_thermal_qubit(0.9);
    double worst_geo = 0, worst_fd = 0, worst_chi = 0;
    Rng rng(9000);
    for (int rep = 0; rep < 20; ++rep) {
        DensityMatrix rho = random_density(2, rng, 5e-2);
        Matrix U = random_traceless_hermitian(2, rng);
        U *= 0.25 / U.norm();
        double B = b_value(gen, rho, U);

        auto fwd = integrate_geodesic(gen, rho, U, 0.1, 200);
        auto bwd = integrate_geodesic(gen, rho, Matrix(-U), 0.1, 200);
        auto D_of = [&](const Matrix& g) {
            return relative_entropy(DensityMatrix(g, 1e-8, 1e-8), gen.sigma());
        };
        const double D0 = D_of(rho.matrix());
        double coarse = (D_of(fwd[200].gamma) - 2 * D0 + D_of(bwd[200].gamma)) / 0.01;
        double fine = (D_of(fwd[100].gamma) - 2 * D0 + D_of(bwd[100].gamma)) / 0.0025;
        double oracle_val = (4.0 * fine - coarse) / 3.0;
        worst_geo = std::max(worst_geo, std::abs(B - oracle_val) / std::max(std::abs(B), 1e-8));

        Matrix M = quad_form_gradient(gen, rho, U);
        for (int dir = 0; dir < 3; ++dir) {
            Matrix A = random_traceless_hermitian(2, rng);
            A /= A.norm();
            auto q_at = [&](double t) {
                Spectrum s = spectral_decompose(hermitian_part(rho.matrix() + t * A));
                double v = tangent_norm(gen, s, U);
                return v * v;
            };
            const double h = 1e-5;
            double fd = (q_at(h) - q_at(-h)) / (2 * h);
            double dk = (A.adjoint() * M).trace().real();
            worst_fd = std::max(worst_fd, std::abs(fd - dk) / std::max(1.0, std::abs(fd)));
            double chi = oracle::metric_form_derivative_integral(gen, rho.matrix(), U, A, 24);
            worst_chi = std::max(worst_chi, std::abs(chi - dk) / std::max(1.0, std::abs(chi)));
        }
    }
    bool pass = worst_geo <= 1e-4 && worst_fd <= 1e-6 && worst_chi <= 1e-5;
    report(5, pass,
           "entropy Hessian: geodesic oracle " + fmt(worst_geo) + ", finite differences " +
               fmt(worst_fd) + ", triple-integral quadrature " + fmt(worst_chi));
}

// ---------------------------------------------------------------- criterion 6
void criterion_w2_axioms() {
    auto gen = make_thermal_qubit(1.0);
    W2Options opts; // tol target 1e-4

    DensityMatrix rho = random_density(2, 10, 1e-2);
    bool identity_ok = w2_distance(gen, rho, rho, opts).value == 0.0;

    struct Triple {
        double sym_gap, tri_gap, stationarity;
    };
    std::vector<Triple> triples = batch::map<Triple>(20, [&](int i) {
        DensityMatrix a = random_density(2, 11000 + 3 * i, 1e-3);
        DensityMatrix b = random_density(2, 11001 + 3 * i, 1e-3);
        DensityMatrix c = random_density(2, 11002 + 3 * i, 1e-3);
        W2Result ab = w2_distance(gen, a, b, opts);
        W2Result ba = w2_distance(gen, b, a, opts);
        W2Result ac = w2_distance(gen, a, c, opts);
        W2Result cb = w2_distance(gen, c, b, opts);
        double stat = std::max({ab.stationarity, ba.stationarity, ac.stationarity,
                                cb.stationarity});
        return Triple{std::abs(ab.value - ba.value), ab.value - (ac.value + cb.value), stat};
    });
    double worst_sym = 0, worst_tri = 0, worst_stat = 0;
    for (const auto& t : triples) {
        worst_sym = std::max(worst_sym, t.sym_gap);
        worst_tri = std::max(worst_tri, t.tri_gap);
        worst_stat = std::max(worst_stat, t.stationarity);
    }

    std::vector<int> w1_oks = batch::map<int>(50, [&](int i) {
        DensityMatrix a = random_density(2, 12000 + 2 * i, 1e-3);
        DensityMatrix b = random_density(2, 12001 + 2 * i, 1e-3);
        return w1_bound_check(gen, a, b, opts).ok ? 1 : 0;
    });
    int w1_pass = 0;
    for (int ok : w1_oks) w1_pass += ok;

    std::vector<int> coup_oks = batch::map<int>(20, [&](int i) {
        DensityMatrix a = random_density(2, 13000 + 2 * i, 1e-3);
        DensityMatrix b = random_density(2, 13001 + 2 * i, 1e-3);
        double w = w2_distance(gen, a, b, opts).value;
        double wc = coupling_w2(gen, a, b, opts).value;
        return w <= wc + 3 * opts.tol ? 1 : 0;
    });
    int coup_pass = 0;
    for (int ok : coup_oks) coup_pass += ok;

    bool pass = identity_ok && worst_sym <= 2 * opts.tol && worst_tri <= 3 * opts.tol &&
                worst_stat <= 1e-4 && w1_pass == 50 && coup_pass == 20;
    report(6, pass,
           "W2 axioms: identity exact, symmetry gap " + fmt(worst_sym) + ", triangle excess " +
               fmt(worst_tri) + ", stationarity " + fmt(worst_stat) + ", trace-norm bound " +
               std::to_string(w1_pass) + "/50, coupling dominance " + std::to_string(coup_pass) +
               "/20");
}

// ---------------------------------------------------------------- criterion 7
void criterion_curvature_consequences() {
    struct Family {
        const char* name;
        DetailedBalanceGenerator gen;
    };
    std::vector<Family> families;
    families.push_back({"depolarizing(2)", make_depolarizing(2)});
    families.push_back({"thermal_qubit(1.0)", make_thermal_qubit(1.0)});

    W2Options w2opts;
    RicciOptions ro;
    bool all_ok = true;
    std::string detail;
    for (const auto& fam : families) {
        const auto& gen = fam.gen;
        double kappa = estimate_ricci_lower_bound(gen, 16, 31, ro).kappa_hat;

        // gradient estimate + reverse Poincare, 50 samples each
        std::vector<double> ge = batch::map<double>(50, [&](int i) {
            Rng rng(14000 + i);
            DensityMatrix rho = random_density(2, rng, 1e-3);
            Matrix U = random_traceless_hermitian(2, rng);
            return gradient_estimate_check(gen, kappa, rho, U, {0.1, 0.5, 1.0});
        });
        double worst_ge = *std::max_element(ge.begin(), ge.end());

        std::vector<int> rp = batch::map<int>(50, [&](int i) {
            Rng rng(15000 + i);
            DensityMatrix rho = random_density(2, rng, 1e-3);
            Matrix U = random_traceless_hermitian(2, rng);
            double t = 0.05 + 0.1 * (i % 10);
            return reverse_poincare_check(gen, kappa, rho, U, t).ok ? 1 : 0;
        });
        int rp_pass = 0;
        for (int ok : rp) rp_pass += ok;

        // EVI on 50 faithful pairs
        std::vector<int> evi = batch::map<int>(50, [&](int i) {
            DensityMatrix rho = random_density(2, 16000 + 2 * i, 1e-2);
            DensityMatrix om = random_density(2, 16001 + 2 * i, 1e-2);
            const double h = 1e-2;
            double r = evi_check(gen, kappa, rho, om, h, w2opts);
            return r <= 5 * w2opts.tol / h ? 1 : 0;
        });
        int evi_pass = 0;
        for (int ok : evi) evi_pass += ok;

        // displacement convexity along optimized paths
        std::vector<int> dc = batch::map<int>(50, [&](int i) {
            DensityMatrix a = random_density(2, 17000 + 2 * i, 1e-2);
            DensityMatrix b = random_density(2, 17001 + 2 * i, 1e-2);
            W2Result w = w2_distance(gen, a, b, w2opts);
            double tol = 20 * std::max(w2opts.tol, w.stationarity);
            return displacement_convexity_check(gen, kappa, w.path, w.value) <= tol ? 1 : 0;
        });
        int dc_pass = 0;
        for (int ok : dc) dc_pass += ok;

        // HWI at kappa_hat
        auto battery = sample_battery(2, 50, 10, 18000);
        HwiCheckResult hwi = hwi_check(gen, kappa, battery, w2opts);

        // Bakry-Emery consistency
        bool be_ok = true;
        if (kappa > 0) {
            MlsiEstimate mlsi = mlsi_constant_estimate(gen, 50, 12, 19000);
            be_ok = mlsi.alpha1_hat >= kappa - 2 * w2opts.tol;
        }

        bool ok = worst_ge <= 1e-6 && rp_pass == 50 && evi_pass == 50 && dc_pass == 50 &&
                  hwi.ok && be_ok;
        all_ok = all_ok && ok;
        detail += std::string(fam.name) + " [kappa_hat " + fmt(kappa) + ", grad-est " +
                  fmt(worst_ge) + ", rev-PI " + std::to_string(rp_pass) + "/50, EVI " +
                  std::to_string(evi_pass) + "/50, displ-conv " + std::to_string(dc_pass) +
                  "/50, HWI " + (hwi.ok ? "ok" : "VIOLATED") + ", BE " + (be_ok ? "ok" : "VIOLATED") +
                  "] ";
    }
    report(7, all_ok, "curvature consequences at kappa_hat: " + detail);
}

// ---------------------------------------------------------------- criterion 8
void criterion_figure_arithmetic() {
    bool exact = interpolation_alpha(0.0, 1.0) == 0.25 && mlsi_from_lst2(0.0, 1.0) == 0.5;
    auto gen = make_depolarizing(2);
    DiameterPoincareResult dp = diameter_poincare_check(gen, 2.0, 0.0);
    exact = exact && dp.lambda_bound == 1.0 / (8.0 * std::exp(1.0));

    W2Options w2;
    MlsiEstimate mlsi = mlsi_constant_estimate(gen, 30, 8, 21000);
    Tc2Estimate tc2 = tc2_constant_estimate(gen, 30, 21001, w2);
    bool cross = tc2.c2_hat <= (1.0 / mlsi.alpha1_hat) * (1.0 + 5 * w2.tol);
    report(8, exact && cross,
           "interpolation formulas exact; MLSI=>TC2 cross-check c2_hat " + fmt(tc2.c2_hat) +
               " <= " + fmt((1.0 / mlsi.alpha1_hat) * (1.0 + 5 * w2.tol)));
}

// ---------------------------------------------------------------- criterion 9
void criterion_depolarizing_gap() {
    auto gen = make_depolarizing(2);
    double lambda = spectral_gap(gen).lambda;
    // brute-force oracle: eigenvalues of the Schrodinger superoperator
    Eigen::ComplexEigenSolver<Matrix> es(
        gen.superoperator(DetailedBalanceGenerator::Picture::Schrodinger));
    std::vector<double> re;
    for (int i = 0; i < 4; ++i) re.push_back(es.eigenvalues()[i].real());
    std::sort(re.begin(), re.end());
    // spectrum must be {-1, -1, -1, 0}
    bool spectrum_ok = std::abs(re[3]) < 1e-10 && std::abs(re[0] + 1) < 1e-10 &&
                       std::abs(re[1] + 1) < 1e-10 && std::abs(re[2] + 1) < 1e-10;
    bool pass = std::abs(lambda - 1.0) <= 1e-9 && spectrum_ok;
    report(9, pass, "depolarizing qubit gap 1 within " + fmt(std::abs(lambda - 1.0)) +
                        ", superoperator spectrum {0,-1,-1,-1}");
}

// --------------------------------------------------------------- criterion 10
void criterion_determinism(double total_budget_s, Clock::time_point t0) {
    auto run_suite = [&](const std::string& out) {
        std::string cmd = std::string(QMT_CLI_PATH) +
                          " suite --gen 'depolarizing(2)' --seed 7 --samples 12 --json-out " +
                          out + " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    int rc1 = run_suite("/tmp/qmt_acc_rep1.json");
    int rc2 = run_suite("/tmp/qmt_acc_rep2.json");
    auto slurp = [](const char* p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string a = slurp("/tmp/qmt_acc_rep1.json");
    std::string b = slurp("/tmp/qmt_acc_rep2.json");
    double elapsed = seconds_since(t0);
    bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b && elapsed < total_budget_s;
    report(10, pass,
           "determinism: repeated cmd_suite --seed 7 byte-identical (" +
               std::to_string(a.size()) + " bytes); acceptance wall time " + fmt(elapsed) + " s");
}

} // namespace

int main() {
    auto t0 = Clock::now();
    std::printf("acceptance battery (threads: %d)\n", batch::hardware_threads());
    criterion_structure_roundtrip();
    criterion_kernel_quadrature();
    criterion_gradient_flow();
    criterion_metric_operator();
    criterion_entropy_hessian();
    criterion_w2_axioms();
    criterion_curvature_consequences();
    criterion_figure_arithmetic();
    criterion_depolarizing_gap();
    criterion_determinism(600.0, t0);
    if (g_failures) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
