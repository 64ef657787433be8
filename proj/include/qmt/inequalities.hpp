// inequalities.hpp — Constant estimators (PI, MLSI, TC2, curvature, diameter)
// and the implication/consistency matrix relating them.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmt/curvature.hpp"
#include "qmt/entropic.hpp"
#include "qmt/transport.hpp"

namespace qmt {

enum class CheckStatus { Pass, Fail, PreconditionNotMet, Warning };

const char* to_string(CheckStatus s);

struct CheckRow {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    double residual = 0.0;      // positive means violation
    std::string direction;      // bound-direction bookkeeping
    std::string witness;        // short description of the extremal sample
};

struct MlsiEstimate {
    double alpha1_hat = 0.0;    // upper bound on the true MLSI constant
    DensityMatrix witness;
    double witness_ratio = 0.0;
};

// min over samples and descent runs of I_sigma(rho) / (2 D(rho||sigma)).
MlsiEstimate mlsi_constant_estimate(const DetailedBalanceGenerator& gen, int n_samples,
                                    int n_opt_starts, std::uint64_t seed, int threads = 0);

struct Tc2Estimate {
    double c2_hat = 0.0;        // conservative upper estimate
    DensityMatrix witness;
};

// max over samples of W2(rho, sigma)^2 / (2 D(rho||sigma)).
Tc2Estimate tc2_constant_estimate(const DetailedBalanceGenerator& gen, int n_samples,
                                  std::uint64_t seed, const W2Options& w2opts = {},
                                  int threads = 0);

// Fraction of samples with W2(rho, sigma) <= c sqrt(I_sigma(rho)) (1 + tol).
double mlsi_tc2_check(const DetailedBalanceGenerator& gen, double c,
                      const std::vector<DensityMatrix>& samples, const W2Options& w2opts = {},
                      int threads = 0);

struct HwiCheckResult {
    double worst_violation = 0.0; // max of D - (W sqrt(I) - kappa/2 W^2)
    double threshold = 0.0;       // 5 * w2_tol * max sqrt(I)
    bool ok = false;
};

HwiCheckResult hwi_check(const DetailedBalanceGenerator& gen, double kappa,
                         const std::vector<DensityMatrix>& samples, const W2Options& w2opts = {},
                         int threads = 0);

// alpha_1 = max[(1/(4 c2))(1 + c2 kappa)^2, kappa]; requires
// c2^{-1} >= max(0, -kappa).
double interpolation_alpha(double kappa, double c2);

// alpha_1 = 1/(c (2 - kappa c)); requires c^{-1} >= max(kappa, 0).
double mlsi_from_lst2(double kappa, double c);

struct DiameterPoincareResult {
    double lambda_bound = 0.0; // 1 / (2 e D^2)
    double lambda_hat = 0.0;
    CheckStatus status = CheckStatus::Pass;
};

DiameterPoincareResult diameter_poincare_check(const DetailedBalanceGenerator& gen,
                                               double diam_hat, double kappa_hat,
                                               double tol = 1e-6);

struct DiameterMlsiResult {
    double product = 0.0; // alpha1_hat * diam_hat^2
    CheckStatus status = CheckStatus::Pass;
};

DiameterMlsiResult diameter_mlsi_check(const DetailedBalanceGenerator& gen, double diam_hat,
                                       double alpha1_hat, double kappa_hat,
                                       double threshold = 0.01, double tol = 1e-6);

// Standard battery: n random faithful states (min eig 1e-3) plus
// n_boundary regularized pure states.
std::vector<DensityMatrix> sample_battery(int dim, int n, int n_boundary, std::uint64_t seed);

struct SuiteOptions {
    std::uint64_t seed = 0;
    int samples = 50;
    int boundary_samples = 10;
    int opt_starts = 12;        // descent starts for MLSI / curvature search
    int diameter_pairs = 30;
    W2Options w2;
    RicciOptions ricci;
    std::optional<double> kappa_override;
    int threads = 0;
};

struct FunctionalReport {
    std::string generator_id;  // filled by callers that know the source
    double lambda_hat = 0, alpha1_hat = 0, c2_hat = 0, c_hat = 0, kappa_hat = 0, diam_hat = 0;
    std::vector<CheckRow> checks;
    std::vector<std::string> warnings;
    std::uint64_t seed = 0;
    SuiteOptions opts;

    bool all_applicable_pass() const;
    nlohmann::json to_json() const;
    std::string to_csv() const;
};

// Runs every estimator and the Figure-2 style implication rows.
// Throws NotPrimitive for non-primitive generators.
FunctionalReport implication_suite(const DetailedBalanceGenerator& gen,
                                   const SuiteOptions& opts = {});

} // namespace qmt
