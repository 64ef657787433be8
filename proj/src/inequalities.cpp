// inequalities.cpp — Estimators and the implication suite

#include "qmt/inequalities.hpp"

#include <cmath>
#include <sstream>

#include "qmt/batch.hpp"

namespace qmt {

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::PreconditionNotMet: return "precondition_not_met";
        case CheckStatus::Warning: return "warning";
    }
    return "?";
}

std::vector<DensityMatrix> sample_battery(int dim, int n, int n_boundary, std::uint64_t seed) {
    std::vector<DensityMatrix> out;
    out.reserve(n + n_boundary);
    for (int i = 0; i < n; ++i) out.push_back(random_density(dim, seed + 7919ull * i, 1e-3));
    const Matrix mix = Matrix::Identity(dim, dim) / double(dim);
    for (int i = 0; i < n_boundary; ++i) {
        Rng rng(seed + 104729ull * (i + 1));
        Matrix u = random_unitary(dim, rng);
        Matrix pure = u.col(0) * u.col(0).adjoint();
        const double eps = 1e-3;
        out.push_back(DensityMatrix(hermitian_part((1.0 - eps) * pure + eps * mix)));
    }
    return out;
}

namespace {

// Shrinking perturbations of sigma along the spectral-gap minimizer and a few
// random directions. The extremal ratios of several functionals live in the
// rho -> sigma limit, which random interior sampling approaches too slowly.
std::vector<DensityMatrix> near_sigma_probes(const DetailedBalanceGenerator& gen,
                                             std::uint64_t seed) {
    std::vector<Matrix> dirs;
    dirs.push_back(spectral_gap(gen).minimizer);
    Rng rng(seed ^ 0x5bd1e995ull);
    dirs.push_back(random_traceless_hermitian(gen.dim(), rng));
    dirs.push_back(random_traceless_hermitian(gen.dim(), rng));
    std::vector<DensityMatrix> out;
    const double floor_eig = gen.sigma().min_eigenvalue();
    for (const Matrix& dir0 : dirs) {
        Matrix dir = dir0 - (dir0.trace() / double(gen.dim())) *
                                Matrix::Identity(gen.dim(), gen.dim());
        const double scale = spectral_norm(dir);
        if (scale < 1e-14) continue;
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            const double t = eps * floor_eig / scale;
            for (double sign : {1.0, -1.0})
                out.push_back(DensityMatrix(
                    hermitian_part(gen.sigma().matrix() + sign * t * dir)));
        }
    }
    return out;
}

} // namespace

MlsiEstimate mlsi_constant_estimate(const DetailedBalanceGenerator& gen, int n_samples,
                                    int n_opt_starts, std::uint64_t seed, int threads) {
    if (!gen.is_primitive()) throw NotPrimitive("mlsi_constant_estimate: not primitive");
    if (n_samples < 1) throw InvalidInput("mlsi_constant_estimate: need at least one sample");
    std::vector<DensityMatrix> samples = sample_battery(gen.dim(), n_samples,
                                                        std::max(n_samples / 5, 2), seed);
    for (auto& probe : near_sigma_probes(gen, seed)) samples.push_back(std::move(probe));
    auto ratio_of = [&](const DensityMatrix& rho) {
        double D = relative_entropy(rho, gen.sigma());
        if (D < 1e-12) return std::numeric_limits<double>::infinity();
        double I = fisher_information(gen, rho);
        return I / (2.0 * D);
    };

    std::vector<double> ratios = batch::map<double>(
        static_cast<int>(samples.size()), [&](int i) { return ratio_of(samples[i]); }, threads);

    MlsiEstimate est;
    est.alpha1_hat = std::numeric_limits<double>::infinity();
    int best = -1;
    for (size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] < est.alpha1_hat) {
            est.alpha1_hat = ratios[i];
            best = static_cast<int>(i);
        }
    if (best < 0) throw InvalidInput("mlsi_constant_estimate: no valid sample");
    est.witness = samples[best];
    est.witness_ratio = est.alpha1_hat;

    // descent polish over the exponential chart
    const TracelessBasis& basis = gen.traceless_basis();
    const int nb = basis.size();
    auto chart_ratio = [&](const RealVector& x) {
        Matrix H = basis.from_coordinates(x);
        Matrix expH = matrix_function(H, [](double t) { return std::exp(t); });
        DensityMatrix rho(Matrix(expH / expH.trace().real()));
        return ratio_of(rho);
    };

    auto run_start = [&](int s) {
        Rng rng(seed ^ (0xabcdull + 31ull * s));
        DensityMatrix rho0 = random_density(gen.dim(), rng, 1e-3);
        Matrix H0 = matrix_function(rho0.spectrum(), [](double t) { return std::log(t); });
        H0 -= (H0.trace() / double(gen.dim())) * Matrix::Identity(gen.dim(), gen.dim());
        RealVector x = basis.coordinates(H0);
        double f = chart_ratio(x);
        double step = 0.1;
        RealVector g(nb);
        for (int it = 0; it < 120; ++it) {
            const double h = 1e-5;
            for (int i = 0; i < nb; ++i) {
                RealVector xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                g[i] = (chart_ratio(xp) - chart_ratio(xm)) / (2 * h);
            }
            double gn = g.norm();
            if (gn < 1e-9) break;
            bool ok = false;
            for (int bt = 0; bt < 30; ++bt) {
                RealVector xn = x - step * g;
                double fn = chart_ratio(xn);
                if (fn < f - 1e-4 * step * gn * gn) {
                    x = xn;
                    f = fn;
                    ok = true;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if (!ok) break;
        }
        return std::pair<double, RealVector>(f, x);
    };

    if (n_opt_starts > 0) {
        auto descents = batch::map<std::pair<double, RealVector>>(n_opt_starts, run_start, threads);
        for (const auto& [f, x] : descents) {
            if (f < est.alpha1_hat) {
                est.alpha1_hat = f;
                est.witness_ratio = f;
                Matrix H = basis.from_coordinates(x);
                Matrix expH = matrix_function(H, [](double t) { return std::exp(t); });
                est.witness = DensityMatrix(Matrix(expH / expH.trace().real()));
            }
        }
    }
    return est;
}

Tc2Estimate tc2_constant_estimate(const DetailedBalanceGenerator& gen, int n_samples,
                                  std::uint64_t seed, const W2Options& w2opts, int threads) {
    if (!gen.is_primitive()) throw NotPrimitive("tc2_constant_estimate: not primitive");
    std::vector<DensityMatrix> samples = sample_battery(gen.dim(), n_samples,
                                                        std::max(n_samples / 5, 2), seed);
    for (auto& probe : near_sigma_probes(gen, seed)) samples.push_back(std::move(probe));
    std::vector<double> ratios = batch::map<double>(
        static_cast<int>(samples.size()),
        [&](int i) {
            double D = relative_entropy(samples[i], gen.sigma());
            if (D < 1e-12) return 0.0;
            W2Result w = w2_distance(gen, samples[i], gen.sigma(), w2opts);
            return w.value * w.value / (2.0 * D);
        },
        threads);
    Tc2Estimate est;
    int best = 0;
    for (size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] > est.c2_hat) {
            est.c2_hat = ratios[i];
            best = static_cast<int>(i);
        }
    est.witness = samples[best];
    return est;
}

double mlsi_tc2_check(const DetailedBalanceGenerator& gen, double c,
                      const std::vector<DensityMatrix>& samples, const W2Options& w2opts,
                      int threads) {
    if (!(c > 0)) throw InvalidInput("mlsi_tc2_check: c must be positive");
    if (samples.empty()) return 1.0;
    std::vector<int> oks = batch::map<int>(
        static_cast<int>(samples.size()),
        [&](int i) {
            double I = fisher_information(gen, samples[i]);
            W2Result w = w2_distance(gen, samples[i], gen.sigma(), w2opts);
            return w.value <= c * std::sqrt(std::max(I, 0.0)) * (1.0 + w2opts.tol) + 1e-12 ? 1 : 0;
        },
        threads);
    double pass = 0;
    for (int ok : oks) pass += ok;
    return pass / samples.size();
}

HwiCheckResult hwi_check(const DetailedBalanceGenerator& gen, double kappa,
                         const std::vector<DensityMatrix>& samples, const W2Options& w2opts,
                         int threads) {
    HwiCheckResult res;
    if (samples.empty()) {
        res.ok = true;
        return res;
    }
    struct Row {
        double violation, sqrt_I;
    };
    std::vector<Row> rows = batch::map<Row>(
        static_cast<int>(samples.size()),
        [&](int i) {
            if (!samples[i].faithful()) throw NotFaithful("hwi_check: sample not faithful");
            double D = relative_entropy(samples[i], gen.sigma());
            double I = fisher_information(gen, samples[i]);
            W2Result w = w2_distance(gen, samples[i], gen.sigma(), w2opts);
            double rhs = w.value * std::sqrt(std::max(I, 0.0)) - 0.5 * kappa * w.value * w.value;
            return Row{D - rhs, std::sqrt(std::max(I, 0.0))};
        },
        threads);
    double max_sqrt_I = 0;
    res.worst_violation = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        res.worst_violation = std::max(res.worst_violation, r.violation);
        max_sqrt_I = std::max(max_sqrt_I, r.sqrt_I);
    }
    res.threshold = 5.0 * w2opts.tol * max_sqrt_I;
    res.ok = res.worst_violation <= res.threshold;
    return res;
}

double interpolation_alpha(double kappa, double c2) {
    if (!(c2 > 0)) throw DomainError("interpolation_alpha: c2 must be positive");
    if (1.0 / c2 < std::max(0.0, -kappa))
        throw DomainError("interpolation_alpha: precondition c2^{-1} >= max(0,-kappa) violated");
    double t = 1.0 + c2 * kappa;
    return std::max(t * t / (4.0 * c2), kappa);
}

double mlsi_from_lst2(double kappa, double c) {
    if (!(c > 0)) throw DomainError("mlsi_from_lst2: c must be positive");
    if (1.0 / c < std::max(kappa, 0.0))
        throw DomainError("mlsi_from_lst2: precondition c^{-1} >= max(kappa,0) violated");
    return 1.0 / (c * (2.0 - kappa * c));
}

DiameterPoincareResult diameter_poincare_check(const DetailedBalanceGenerator& gen,
                                               double diam_hat, double kappa_hat, double tol) {
    DiameterPoincareResult res;
    if (!gen.is_primitive()) throw NotPrimitive("diameter_poincare_check: not primitive");
    if (!(diam_hat > 0)) throw InvalidInput("diameter_poincare_check: diameter must be positive");
    res.lambda_bound = 1.0 / (2.0 * std::exp(1.0) * diam_hat * diam_hat);
    res.lambda_hat = spectral_gap(gen).lambda;
    if (kappa_hat < -tol) {
        res.status = CheckStatus::PreconditionNotMet;
        return res;
    }
    res.status = res.lambda_hat >= res.lambda_bound * (1.0 - 1e-6) ? CheckStatus::Pass
                                                                   : CheckStatus::Fail;
    return res;
}

DiameterMlsiResult diameter_mlsi_check(const DetailedBalanceGenerator& gen, double diam_hat,
                                       double alpha1_hat, double kappa_hat, double threshold,
                                       double tol) {
    DiameterMlsiResult res;
    const int d = gen.dim();
    Matrix mix = Matrix::Identity(d, d) / double(d);
    const bool unital = (gen.sigma().matrix() - mix).norm() < 1e-10;
    res.product = alpha1_hat * diam_hat * diam_hat;
    if (!unital || kappa_hat < -tol) {
        res.status = CheckStatus::PreconditionNotMet;
        return res;
    }
    res.status = res.product >= threshold ? CheckStatus::Pass : CheckStatus::Fail;
    return res;
}

bool FunctionalReport::all_applicable_pass() const {
    for (const auto& row : checks)
        if (row.status == CheckStatus::Fail) return false;
    return true;
}

nlohmann::json FunctionalReport::to_json() const {
    nlohmann::json j;
    j["generator"] = generator_id;
    j["constants"] = {
        {"lambda_hat", {{"value", lambda_hat}, {"direction", "exact (spectral)"}}},
        {"alpha1_hat", {{"value", alpha1_hat}, {"direction", "upper bound (min over samples)"}}},
        {"c2_hat", {{"value", c2_hat}, {"direction", "upper estimate (from W2 upper bounds)"}}},
        {"c_hat", {{"value", c_hat}, {"direction", "derived (1/alpha1_hat)"}}},
        {"kappa_hat", {{"value", kappa_hat}, {"direction", "upper bound from nonconvex search"}}},
        {"diam_hat", {{"value", diam_hat}, {"direction", "lower bound (max over sampled pairs)"}}},
    };
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : checks)
        rows.push_back({{"name", row.name},
                        {"pass", row.status == CheckStatus::Pass},
                        {"status", to_string(row.status)},
                        {"residual", row.residual},
                        {"direction", row.direction},
                        {"witness", row.witness}});
    j["checks"] = rows;
    j["seeds"] = {{"master", seed}};
    j["tolerances"] = {{"w2_stationarity", opts.w2.tol},
                       {"w2_eps_floor", opts.w2.eps_floor},
                       {"ricci_stationarity", opts.ricci.tol}};
    j["warnings"] = warnings;
    return j;
}

std::string FunctionalReport::to_csv() const {
    std::ostringstream out;
    out << "name,status,residual,direction,witness\n";
    for (const auto& row : checks) {
        std::string w = row.witness;
        for (auto& ch : w)
            if (ch == ',') ch = ';';
        out << row.name << "," << to_string(row.status) << "," << row.residual << ","
            << row.direction << "," << w << "\n";
    }
    return out.str();
}

FunctionalReport implication_suite(const DetailedBalanceGenerator& gen,
                                   const SuiteOptions& opts) {
    if (!gen.is_primitive()) throw NotPrimitive("implication_suite: generator is not primitive");
    FunctionalReport rep;
    rep.seed = opts.seed;
    rep.opts = opts;
    if (opts.samples < 5) rep.warnings.push_back("low-sample run: estimators are unreliable");
    const double tol = opts.w2.tol;

    rep.lambda_hat = spectral_gap(gen).lambda;

    RicciOptions ricci = opts.ricci;
    ricci.threads = opts.threads;
    RicciEstimate kest;
    if (opts.kappa_override) {
        rep.kappa_hat = *opts.kappa_override;
        rep.warnings.push_back("kappa_hat supplied externally; curvature search skipped");
    } else {
        kest = estimate_ricci_lower_bound(gen, opts.opt_starts, opts.seed + 11, ricci);
        rep.kappa_hat = kest.kappa_hat;
        if (!kest.converged)
            rep.warnings.push_back("curvature search did not reach stationarity target");
    }

    MlsiEstimate mlsi =
        mlsi_constant_estimate(gen, opts.samples, opts.opt_starts, opts.seed + 23, opts.threads);
    rep.alpha1_hat = mlsi.alpha1_hat;
    rep.c_hat = 1.0 / mlsi.alpha1_hat;

    Tc2Estimate tc2 =
        tc2_constant_estimate(gen, opts.samples, opts.seed + 37, opts.w2, opts.threads);
    rep.c2_hat = tc2.c2_hat;

    DiameterEstimate diam =
        diameter_estimate(gen, opts.diameter_pairs, opts.seed + 41, opts.w2, opts.threads);
    rep.diam_hat = diam.value;

    std::vector<DensityMatrix> battery =
        sample_battery(gen.dim(), opts.samples, opts.boundary_samples, opts.seed + 53);

    // MLSI => TC2 with c2 = 1/alpha1
    {
        CheckRow row;
        row.name = "MLSI=>TC2";
        row.residual = rep.c2_hat - (1.0 / rep.alpha1_hat) * (1.0 + 5 * tol);
        row.status = row.residual <= 0 ? CheckStatus::Pass : CheckStatus::Fail;
        row.direction = "c2_hat over-estimates; bound checked in the safe direction";
        row.witness = "c2_hat=" + std::to_string(rep.c2_hat);
        rep.checks.push_back(row);
    }

    // TC2 + HWI => MLSI via the interpolation formula. kappa_hat and c2_hat
    // carry opposite bound directions, so this is a trend check with a 1%
    // band (c2_hat's sampling maximum under-covers the true supremum).
    {
        CheckRow row;
        row.name = "TC2+HWI=>MLSI";
        row.direction = "trend (mixed bound directions, 1% band)";
        if (1.0 / rep.c2_hat >= std::max(0.0, -rep.kappa_hat)) {
            double alpha_interp = interpolation_alpha(rep.kappa_hat, rep.c2_hat);
            const double band = std::max(5 * tol, 0.01);
            row.residual = (alpha_interp - rep.alpha1_hat) / std::max(alpha_interp, 1e-300);
            row.status = row.residual <= band ? CheckStatus::Pass : CheckStatus::Fail;
            row.witness = "alpha_interp=" + std::to_string(alpha_interp);
        } else {
            row.status = CheckStatus::PreconditionNotMet;
            row.witness = "c2_hat^{-1} < max(0, -kappa_hat)";
        }
        rep.checks.push_back(row);
    }

    // Ric => HWI at kappa_hat
    {
        HwiCheckResult hwi = hwi_check(gen, rep.kappa_hat, battery, opts.w2, opts.threads);
        CheckRow row;
        row.name = "Ric=>HWI";
        row.residual = hwi.worst_violation - hwi.threshold;
        row.status = hwi.ok ? CheckStatus::Pass : CheckStatus::Fail;
        row.direction = "W2 upper bounds enter both sides; both directions recorded";
        row.witness = "worst=" + std::to_string(hwi.worst_violation);
        rep.checks.push_back(row);
    }

    // Ric > 0 => MLSI (Bakry-Emery)
    {
        CheckRow row;
        row.name = "Ric>0=>MLSI";
        if (rep.kappa_hat > 0) {
            row.residual = (rep.kappa_hat - 2 * tol) - rep.alpha1_hat;
            row.status = row.residual <= 0 ? CheckStatus::Pass : CheckStatus::Fail;
            row.direction = "alpha1_hat and kappa_hat are both upper estimates";
            row.witness = "alpha1_hat=" + std::to_string(rep.alpha1_hat);
        } else {
            row.status = CheckStatus::PreconditionNotMet;
            row.witness = "kappa_hat <= 0";
        }
        rep.checks.push_back(row);
    }

    // Ric >= 0 + diameter => PI
    {
        DiameterPoincareResult dp = diameter_poincare_check(gen, rep.diam_hat, rep.kappa_hat, tol);
        CheckRow row;
        row.name = "Ric>=0+diam=>PI";
        row.status = dp.status;
        row.residual = dp.lambda_bound * (1 - 1e-6) - dp.lambda_hat;
        row.direction = "diam_hat under-estimates, so the PI bound is over-stated";
        row.witness = "bound=" + std::to_string(dp.lambda_bound);
        rep.checks.push_back(row);
    }

    // unital + diameter => MLSI (trend check; the universal constant is unspecified)
    {
        DiameterMlsiResult dm =
            diameter_mlsi_check(gen, rep.diam_hat, rep.alpha1_hat, rep.kappa_hat, 0.01, tol);
        CheckRow row;
        row.name = "unital+diam=>MLSI";
        row.status = dm.status;
        row.residual = 0.01 - dm.product;
        row.direction = "trend check; universal constant unspecified";
        row.witness = "alpha1*D^2=" + std::to_string(dm.product);
        rep.checks.push_back(row);
    }

    // Bonnet-Myers companion for kappa_hat > 0
    {
        CheckRow row;
        row.name = "Bonnet-Myers";
        if (rep.kappa_hat > 0) {
            const int n_pairs = std::min(opts.samples, 20);
            std::vector<double> viol = batch::map<double>(
                n_pairs,
                [&](int i) {
                    DensityMatrix a = random_density(gen.dim(), opts.seed + 61 + 2ull * i, 1e-3);
                    DensityMatrix b = random_density(gen.dim(), opts.seed + 62 + 2ull * i, 1e-3);
                    W2Result w = w2_distance(gen, a, b, opts.w2);
                    double bound = (4.0 / rep.kappa_hat) * (relative_entropy(a, gen.sigma()) +
                                                            relative_entropy(b, gen.sigma()));
                    return w.value * w.value - bound;
                },
                opts.threads);
            row.residual = *std::max_element(viol.begin(), viol.end());
            row.status = row.residual <= 5 * tol ? CheckStatus::Pass : CheckStatus::Fail;
            row.direction = "W2 upper bound makes the check conservative";
        } else {
            row.status = CheckStatus::PreconditionNotMet;
            row.witness = "kappa_hat <= 0";
        }
        rep.checks.push_back(row);
    }

    // MLSI => PI, directionally correct reading lambda >= alpha1
    {
        CheckRow row;
        row.name = "MLSI=>PI";
        row.residual = rep.alpha1_hat * (1.0 - 5 * tol) - rep.lambda_hat;
        row.status = row.residual <= 0 ? CheckStatus::Pass : CheckStatus::Fail;
        row.direction = "proportionality constant taken as 1 (recorded assumption)";
        row.witness = "lambda_hat=" + std::to_string(rep.lambda_hat);
        rep.checks.push_back(row);
    }

    // MLSI+TC2 with c = 1/alpha1
    {
        double rate = mlsi_tc2_check(gen, rep.c_hat, battery, opts.w2, opts.threads);
        CheckRow row;
        row.name = "MLSI+TC2";
        row.residual = 1.0 - rate;
        row.status = rate >= 1.0 ? CheckStatus::Pass : CheckStatus::Fail;
        row.direction = "pass rate over the battery";
        row.witness = "rate=" + std::to_string(rate);
        rep.checks.push_back(row);
    }

    return rep;
}

} // namespace qmt
