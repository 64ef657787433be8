// unit_inequalities.cpp — Constant estimators, closed-form corollaries, and
// the implication suite

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qmt/builtins.hpp"
#include "qmt/inequalities.hpp"
#include "support/oracles.hpp"

using namespace qmt;

TEST_CASE("interpolation_alpha closed forms") {
    CHECK(interpolation_alpha(0.0, 1.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(interpolation_alpha(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(interpolation_alpha(-0.5, 1.0) == doctest::Approx(0.0625).epsilon(1e-15));
    // alpha(0, c2) * 4 c2 = 1 (exact up to one rounding)
    CHECK(interpolation_alpha(0.0, 1.0) * 4.0 == 1.0);
    for (double c2 : {0.1, 3.7})
        CHECK(interpolation_alpha(0.0, c2) * 4.0 * c2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(interpolation_alpha(-2.0, 1.0), DomainError);
    CHECK_THROWS_AS(interpolation_alpha(0.0, -1.0), DomainError);
}

TEST_CASE("mlsi_from_lst2 closed forms") {
    CHECK(mlsi_from_lst2(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mlsi_from_lst2(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mlsi_from_lst2(-1.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(mlsi_from_lst2(2.0, 1.0), DomainError);
}

TEST_CASE("sample battery is deterministic and faithful") {
    auto a = sample_battery(2, 10, 3, 42);
    auto b = sample_battery(2, 10, 3, 42);
    REQUIRE(a.size() == 13);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK((a[i].matrix() - b[i].matrix()).norm() == 0.0);
        CHECK(a[i].faithful());
    }
}

TEST_CASE("mlsi estimate: per-sample bound and ratio limit near sigma") {
    auto gen = make_depolarizing(2);
    MlsiEstimate est = mlsi_constant_estimate(gen, 30, 6, 7);
    CHECK(est.alpha1_hat > 0);
    // alpha1_hat is a min: every sampled ratio dominates it
    for (int rep = 0; rep < 20; ++rep) {
        DensityMatrix rho = random_density(2, 5000 + rep, 1e-3);
        double D = relative_entropy(rho, gen.sigma());
        double I = fisher_information(gen, rho);
        CHECK(est.alpha1_hat <= I / (2 * D) + 1e-9);
    }
    // shrinking perturbations keep the ratio finite (local limit)
    Rng rng(3);
    Matrix dir = random_traceless_hermitian(2, rng);
    dir /= dir.norm();
    double prev = 0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        DensityMatrix rho(Matrix(gen.sigma().matrix() + eps * dir));
        double ratio = fisher_information(gen, rho) / (2 * relative_entropy(rho, gen.sigma()));
        CHECK(std::isfinite(ratio));
        if (prev != 0) CHECK(std::abs(ratio - prev) < 0.5 * prev);
        prev = ratio;
    }
    CHECK_THROWS_AS(mlsi_constant_estimate(make_dephasing(2), 10, 2, 1), NotPrimitive);
}

TEST_CASE("tc2 estimate and the MLSI => TC2 cross-check") {
    auto gen = make_depolarizing(2);
    W2Options w2;
    Tc2Estimate tc2 = tc2_constant_estimate(gen, 20, 11, w2);
    CHECK(tc2.c2_hat > 0);
    MlsiEstimate mlsi = mlsi_constant_estimate(gen, 20, 6, 11);
    CHECK(tc2.c2_hat <= (1.0 / mlsi.alpha1_hat) * (1.0 + 5 * w2.tol));

    // single-sample run equals that sample's ratio
    Tc2Estimate single = tc2_constant_estimate(gen, 1, 3, w2);
    double D = relative_entropy(single.witness, gen.sigma());
    double w = w2_distance(gen, single.witness, gen.sigma(), w2).value;
    CHECK(single.c2_hat == doctest::Approx(w * w / (2 * D)).epsilon(1e-9));
}

TEST_CASE("mlsi_tc2_check: pass at c = 1/alpha1, degrade as c -> 0") {
    auto gen = make_depolarizing(2);
    W2Options w2;
    MlsiEstimate mlsi = mlsi_constant_estimate(gen, 20, 6, 13);
    auto battery = sample_battery(2, 20, 4, 17);
    double rate = mlsi_tc2_check(gen, 1.0 / mlsi.alpha1_hat, battery, w2);
    CHECK(rate == doctest::Approx(1.0));
    double tiny = mlsi_tc2_check(gen, 1e-3, battery, w2);
    CHECK(tiny < 1.0);
    CHECK_THROWS_AS(mlsi_tc2_check(gen, 0.0, battery, w2), InvalidInput);
}

TEST_CASE("hwi check at the estimated curvature and at zero") {
    auto gen = make_depolarizing(2);
    W2Options w2;
    RicciOptions ro;
    double kappa = estimate_ricci_lower_bound(gen, 8, 5, ro).kappa_hat;
    auto battery = sample_battery(2, 20, 4, 19);
    HwiCheckResult at_kappa = hwi_check(gen, kappa, battery, w2);
    CHECK(at_kappa.ok);
    // HWI(0) is weaker for kappa >= 0 generators
    HwiCheckResult at_zero = hwi_check(gen, 0.0, battery, w2);
    CHECK(at_zero.ok);
}

TEST_CASE("diameter-based Poincare bound") {
    auto gen = make_depolarizing(2);
    // formula value at D = 2: 1/(8e)
    DiameterPoincareResult r = diameter_poincare_check(gen, 2.0, 0.5);
    CHECK(r.lambda_bound == doctest::Approx(1.0 / (8.0 * std::exp(1.0))).epsilon(1e-15));
    CHECK(r.lambda_hat == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.status == CheckStatus::Pass);
    // bound decreasing in the diameter
    CHECK(diameter_poincare_check(gen, 3.0, 0.5).lambda_bound < r.lambda_bound);
    // depolarizing has gap 1: holds whenever D >= 1/sqrt(2e)
    double dcrit = 1.0 / std::sqrt(2.0 * std::exp(1.0));
    CHECK(diameter_poincare_check(gen, dcrit * 1.01, 0.0).status == CheckStatus::Pass);
    // negative curvature: precondition not met
    CHECK(diameter_poincare_check(gen, 2.0, -1.0).status == CheckStatus::PreconditionNotMet);
}

TEST_CASE("diameter-based MLSI trend check") {
    auto dep = make_depolarizing(2);
    DiameterMlsiResult r = diameter_mlsi_check(dep, 1.2, 0.8, 0.5);
    CHECK(r.product == doctest::Approx(0.8 * 1.44));
    CHECK(r.status == CheckStatus::Pass);
    // non-unital generator: precondition not met
    auto th = make_thermal_qubit(1.0);
    CHECK(diameter_mlsi_check(th, 1.2, 0.8, 0.5).status == CheckStatus::PreconditionNotMet);
}

TEST_CASE("diameter-MLSI product is stable under generator rescaling") {
    auto gen = make_depolarizing(2);
    SuiteOptions opts;
    opts.samples = 12;
    opts.boundary_samples = 3;
    opts.opt_starts = 6;
    opts.diameter_pairs = 8;
    opts.seed = 3;
    FunctionalReport rep1 = implication_suite(gen, opts);
    FunctionalReport rep2 = implication_suite(gen.scaled(2.0), opts);
    // alpha1 scales by 2, D^2 by 1/2: the product is invariant
    double p1 = rep1.alpha1_hat * rep1.diam_hat * rep1.diam_hat;
    double p2 = rep2.alpha1_hat * rep2.diam_hat * rep2.diam_hat;
    CHECK(p2 == doctest::Approx(p1).epsilon(0.02));
    // lambda and alpha scale linearly
    CHECK(rep2.lambda_hat == doctest::Approx(2.0 * rep1.lambda_hat).epsilon(1e-9));
    CHECK(rep2.alpha1_hat == doctest::Approx(2.0 * rep1.alpha1_hat).epsilon(1e-6));
}

TEST_CASE("implication suite on the depolarizing qubit passes all applicable rows") {
    auto gen = make_depolarizing(2);
    SuiteOptions opts;
    opts.samples = 15;
    opts.boundary_samples = 4;
    opts.opt_starts = 8;
    opts.diameter_pairs = 10;
    opts.seed = 7;
    FunctionalReport rep = implication_suite(gen, opts);
    CHECK(rep.lambda_hat == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.all_applicable_pass());
    // every row carries a direction label
    for (const auto& row : rep.checks) CHECK_FALSE(row.direction.empty());
    // unital rows are applicable here
    bool saw_unital = false;
    for (const auto& row : rep.checks)
        if (row.name == "unital+diam=>MLSI") saw_unital = row.status == CheckStatus::Pass;
    CHECK(saw_unital);
}

TEST_CASE("implication suite on the thermal qubit skips unital rows") {
    auto gen = make_thermal_qubit(1.0);
    SuiteOptions opts;
    opts.samples = 12;
    opts.boundary_samples = 3;
    opts.opt_starts = 8;
    opts.diameter_pairs = 8;
    opts.seed = 5;
    FunctionalReport rep = implication_suite(gen, opts);
    CHECK(rep.all_applicable_pass());
    for (const auto& row : rep.checks)
        if (row.name == "unital+diam=>MLSI")
            CHECK(row.status == CheckStatus::PreconditionNotMet);
}

TEST_CASE("implication suite refuses non-primitive generators") {
    CHECK_THROWS_AS(implication_suite(make_dephasing(2)), NotPrimitive);
}

TEST_CASE("suite determinism: identical seeds give byte-identical reports") {
    auto gen = make_depolarizing(2);
    SuiteOptions opts;
    opts.samples = 8;
    opts.boundary_samples = 2;
    opts.opt_starts = 4;
    opts.diameter_pairs = 5;
    opts.seed = 7;
    FunctionalReport a = implication_suite(gen, opts);
    FunctionalReport b = implication_suite(gen, opts);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_csv() == b.to_csv());

    // low-sample warning
    SuiteOptions low = opts;
    low.samples = 1;
    FunctionalReport c = implication_suite(gen, low);
    bool warned = false;
    for (const auto& w : c.warnings) warned = warned || w.find("low-sample") != std::string::npos;
    CHECK(warned);
}

TEST_CASE("report JSON schema carries directions and seeds") {
    auto gen = make_depolarizing(2);
    SuiteOptions opts;
    opts.samples = 6;
    opts.boundary_samples = 2;
    opts.opt_starts = 3;
    opts.diameter_pairs = 4;
    opts.seed = 9;
    FunctionalReport rep = implication_suite(gen, opts);
    rep.generator_id = "test";
    nlohmann::json j = rep.to_json();
    CHECK(j["generator"] == "test");
    for (const auto& key : {"lambda_hat", "alpha1_hat", "c2_hat", "c_hat", "kappa_hat", "diam_hat"})
        CHECK_FALSE(j["constants"][key]["direction"].get<std::string>().empty());
    CHECK(j["seeds"]["master"] == 9);
    CHECK(j.contains("tolerances"));
    for (const auto& row : j["checks"]) {
        CHECK(row.contains("name"));
        CHECK(row.contains("pass"));
        CHECK(row.contains("residual"));
        CHECK(row.contains("direction"));
        CHECK(row.contains("witness"));
    }
    // CSV header
    CHECK(rep.to_csv().rfind("name,status,residual,direction,witness\n", 0) == 0);
}
