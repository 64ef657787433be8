// qmt_cli.cpp — Command-line front end: validate generators, estimate
// constants, compute transport distances, run the implication suite.
//
// Exit codes: 0 success, 1 check failure, 2 usage or I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qmt/batch.hpp"
#include "qmt/builtins.hpp"
#include "qmt/entropic.hpp"
#include "qmt/inequalities.hpp"
#include "qmt/json_io.hpp"

namespace {

int log_level() {
    const char* env = std::getenv("QMS_LOG");
    return env ? std::atoi(env) : 0;
}

void logv(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[qmt] " << msg << "\n";
}

qmt::DetailedBalanceGenerator resolve_generator(const std::string& spec) {
    if (qmt::is_builtin_name(spec)) return qmt::make_builtin(spec);
    return qmt::load_generator(spec);
}

// "pure:k", "maxmix", or a JSON file holding a matrix
qmt::DensityMatrix resolve_state(const std::string& spec, int dim) {
    if (spec == "maxmix")
        return qmt::DensityMatrix(qmt::Matrix::Identity(dim, dim) / double(dim));
    if (spec.rfind("pure:", 0) == 0) {
        int k = std::stoi(spec.substr(5));
        return qmt::DensityMatrix(qmt::basis_pure_state(dim, k));
    }
    std::ifstream in(spec);
    if (!in) throw qmt::InvalidInput("cannot open state file " + spec);
    nlohmann::json j;
    in >> j;
    return qmt::DensityMatrix(qmt::matrix_from_json(j));
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw qmt::InvalidInput("cannot open output file " + path);
    out << content;
}

struct CommonArgs {
    std::string gen_spec;
    std::uint64_t seed = 0;
    int samples = 50;
    double tol = 1e-4;
    int path_points = 16;
    int threads = 0;
    std::string json_out, csv_out;
    double kappa_override = std::numeric_limits<double>::quiet_NaN();
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--gen", args.gen_spec, "generator JSON path or builtin name")->required();
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--samples", args.samples, "sample count per estimator")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", args.tol, "solver stationarity tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--path-points", args.path_points, "path discretization segments")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", args.threads, "max concurrent samples (0 = hardware)");
    cmd->add_option("--json-out", args.json_out, "report JSON path");
    cmd->add_option("--csv-out", args.csv_out, "report CSV path");
    cmd->add_option("--kappa", args.kappa_override, "curvature override (skips the search)");
}

qmt::SuiteOptions suite_options(const CommonArgs& args) {
    qmt::SuiteOptions opts;
    opts.seed = args.seed;
    opts.samples = args.samples;
    opts.w2.tol = args.tol;
    opts.w2.grid_points = args.path_points;
    opts.threads = args.threads;
    if (!std::isnan(args.kappa_override)) opts.kappa_override = args.kappa_override;
    return opts;
}

int cmd_validate(const CommonArgs& args) {
    // parse without rejecting so the residual table can name the defect
    auto gen = qmt::is_builtin_name(args.gen_spec)
                   ? qmt::make_builtin(args.gen_spec)
                   : qmt::load_generator_unchecked(args.gen_spec);
    qmt::GeneratorValidation v = gen.validate();
    std::printf("condition 1 (normalization)        residual %.3e\n", v.normalization);
    std::printf("condition 2 (traceless)            residual %.3e\n", v.traceless);
    std::printf("condition 3 (adjoint closure)      residual %.3e\n", v.adjoint_closure);
    std::printf("condition 4 (modular eigenvector)  residual %.3e\n", v.modular_eigenvector);
    std::printf("unitality L(I)=0                   residual %.3e\n", v.unital);
    std::printf("invariance L_*(sigma)=0            residual %.3e\n", v.invariance);
    std::printf("detailed balance                   residual %.3e\n", v.detailed_balance);
    std::printf("primitive: %s\n", gen.is_primitive() ? "yes" : "no");
    std::string bad = v.failing();
    if (!bad.empty()) {
        std::printf("FAIL: %s\n", bad.c_str());
        return 1;
    }
    std::printf("OK\n");
    return 0;
}

int cmd_constants(const CommonArgs& args) {
    auto gen = resolve_generator(args.gen_spec);
    qmt::SuiteOptions opts = suite_options(args);
    qmt::FunctionalReport rep = qmt::implication_suite(gen, opts);
    rep.generator_id = qmt::generator_hash(gen);
    std::printf("lambda_hat  %.9f   (exact, spectral)\n", rep.lambda_hat);
    std::printf("alpha1_hat  %.9f   (upper bound)\n", rep.alpha1_hat);
    std::printf("c2_hat      %.9f   (upper estimate)\n", rep.c2_hat);
    std::printf("kappa_hat   %.9f   (upper bound, nonconvex search)\n", rep.kappa_hat);
    std::printf("diam_hat    %.9f   (lower bound)\n", rep.diam_hat);
    for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
    if (!args.json_out.empty()) write_file(args.json_out, rep.to_json().dump(2) + "\n");
    if (!args.csv_out.empty()) write_file(args.csv_out, rep.to_csv());
    return 0;
}

int cmd_w2(const CommonArgs& args, const std::string& rho_spec, const std::string& omega_spec,
           const std::string& path_out, const std::string& energy_csv) {
    auto gen = resolve_generator(args.gen_spec);
    qmt::DensityMatrix rho = resolve_state(rho_spec, gen.dim());
    qmt::DensityMatrix omega = resolve_state(omega_spec, gen.dim());
    qmt::W2Options opts;
    opts.tol = args.tol;
    opts.grid_points = args.path_points;
    qmt::W2Result res = qmt::w2_distance(gen, rho, omega, opts);
    std::printf("W2 = %.9f  (stationarity %.3e, %d iterations%s)\n", res.value, res.stationarity,
                res.iterations, res.converged ? "" : ", warning: not converged");
    if (!path_out.empty()) write_file(path_out, qmt::path_to_json(res.path).dump(2) + "\n");
    if (!energy_csv.empty()) {
        std::string csv = "iteration,energy\n";
        for (size_t i = 0; i < res.energy_trace.size(); ++i)
            csv += std::to_string(i) + "," + std::to_string(res.energy_trace[i]) + "\n";
        write_file(energy_csv, csv);
    }
    return 0;
}

int cmd_suite(const CommonArgs& args) {
    auto gen = resolve_generator(args.gen_spec);
    qmt::SuiteOptions opts = suite_options(args);
    logv("running implication suite");
    qmt::FunctionalReport rep = qmt::implication_suite(gen, opts);
    rep.generator_id = qmt::generator_hash(gen);
    for (const auto& row : rep.checks)
        std::printf("%-20s %-22s residual % .3e  %s\n", row.name.c_str(),
                    qmt::to_string(row.status), row.residual, row.witness.c_str());
    for (const auto& w : rep.warnings) std::printf("warning: %s\n", w.c_str());
    if (!args.json_out.empty()) write_file(args.json_out, rep.to_json().dump(2) + "\n");
    if (!args.csv_out.empty()) write_file(args.csv_out, rep.to_csv());
    return rep.all_applicable_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"detailed-balance quantum Markov semigroup transport toolbox"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string rho_spec = "maxmix", omega_spec = "maxmix";
    std::string path_out, energy_csv;

    CLI::App* validate = app.add_subcommand("validate", "check structure-theorem invariants");
    add_common(validate, args);
    CLI::App* constants = app.add_subcommand("constants", "estimate functional constants");
    add_common(constants, args);
    CLI::App* w2 = app.add_subcommand("w2", "transport distance between two states");
    add_common(w2, args);
    w2->add_option("--rho", rho_spec, "state: pure:k, maxmix, or JSON file");
    w2->add_option("--omega", omega_spec, "state: pure:k, maxmix, or JSON file");
    w2->add_option("--path-out", path_out, "write the optimized path JSON here");
    w2->add_option("--energy-csv", energy_csv, "write per-iteration energies here");
    CLI::App* suite = app.add_subcommand("suite", "full implication suite");
    add_common(suite, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (args.threads > 0) omp_set_num_threads(args.threads);
        if (validate->parsed()) return cmd_validate(args);
        if (constants->parsed()) return cmd_constants(args);
        if (w2->parsed()) return cmd_w2(args, rho_spec, omega_spec, path_out, energy_csv);
        if (suite->parsed()) return cmd_suite(args);
    } catch (const qmt::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qmt::NotPrimitive& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
