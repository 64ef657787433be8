// builtins.cpp — Named generator families

#include "qmt/builtins.hpp"

#include <cmath>

namespace qmt {

DetailedBalanceGenerator make_depolarizing(int dim) {
    if (dim < 2) throw InvalidInput("depolarizing: dim must be >= 2");
    const double d = dim;
    DensityMatrix sigma(Matrix::Identity(dim, dim) / d);
    TracelessBasis basis(dim);
    std::vector<JumpMode> modes;
    for (int i = 0; i < basis.size(); ++i)
        modes.push_back({std::sqrt(d) * basis[i], 1.0 / (2.0 * d * d), 0.0});
    return DetailedBalanceGenerator::from_modes(sigma, std::move(modes));
}

DetailedBalanceGenerator make_dephasing(int dim) {
    if (dim < 2) throw InvalidInput("dephasing: dim must be >= 2");
    const double d = dim;
    DensityMatrix sigma(Matrix::Identity(dim, dim) / d);
    TracelessBasis basis(dim);
    std::vector<JumpMode> modes;
    // diagonal family sits at the tail of the Gell-Mann ordering
    for (int i = basis.size() - (dim - 1); i < basis.size(); ++i)
        modes.push_back({std::sqrt(d) * basis[i], 0.5, 0.0});
    return DetailedBalanceGenerator::from_modes(sigma, std::move(modes));
}

DetailedBalanceGenerator make_thermal_qubit(double beta) {
    const double z = 1.0 + std::exp(-beta);
    Matrix sig = Matrix::Zero(2, 2);
    sig(0, 0) = 1.0 / z;
    sig(1, 1) = std::exp(-beta) / z;
    DensityMatrix sigma(sig);
    Matrix lower = Matrix::Zero(2, 2);
    lower(0, 1) = std::sqrt(2.0); // sqrt(2) |0><1|, Tr(L^dag L) = 2
    std::vector<JumpMode> modes;
    modes.push_back({lower, 0.5, -beta});
    modes.push_back({Matrix(lower.adjoint()), 0.5, beta});
    return DetailedBalanceGenerator::from_modes(sigma, std::move(modes));
}

namespace {

bool parse_call(const std::string& name, const std::string& head, std::string& arg) {
    if (name.size() < head.size() + 2) return false;
    if (name.compare(0, head.size(), head) != 0) return false;
    if (name[head.size()] != '(' || name.back() != ')') return false;
    arg = name.substr(head.size() + 1, name.size() - head.size() - 2);
    return true;
}

} // namespace

bool is_builtin_name(const std::string& name) {
    std::string arg;
    return parse_call(name, "depolarizing", arg) || parse_call(name, "dephasing", arg) ||
           parse_call(name, "thermal_qubit", arg);
}

DetailedBalanceGenerator make_builtin(const std::string& name) {
    std::string arg;
    try {
        if (parse_call(name, "depolarizing", arg)) return make_depolarizing(std::stoi(arg));
        if (parse_call(name, "dephasing", arg)) return make_dephasing(std::stoi(arg));
        if (parse_call(name, "thermal_qubit", arg)) return make_thermal_qubit(std::stod(arg));
    } catch (const std::invalid_argument&) {
        throw InvalidInput("make_builtin: malformed argument in '" + name + "'");
    } catch (const std::out_of_range&) {
        throw InvalidInput("make_builtin: argument out of range in '" + name + "'");
    }
    throw InvalidInput("make_builtin: unknown builtin '" + name + "'");
}

} // namespace qmt
