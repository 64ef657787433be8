// builtins.hpp — Canonical generator families available by name

#pragma once

#include <string>

#include "qmt/generator.hpp"

namespace qmt {

// L(X) = Tr(X) I/d - X: sigma = I/d, one zero-frequency mode per traceless
// basis element, each with weight 1/(2 d^2). Spectral gap exactly 1.
DetailedBalanceGenerator make_depolarizing(int dim);

// Diagonal (commuting) modes on sigma = I/d; not primitive for d >= 2.
DetailedBalanceGenerator make_dephasing(int dim);

// Amplitude damping toward the Gibbs qubit state at inverse temperature beta,
// modes sqrt(2) sigma_minus / sqrt(2) sigma_plus with omega = -/+ beta.
DetailedBalanceGenerator make_thermal_qubit(double beta);

// Parses "depolarizing(2)", "dephasing(3)", "thermal_qubit(1.0)".
// Throws InvalidInput for unknown names or malformed arguments.
DetailedBalanceGenerator make_builtin(const std::string& name);
bool is_builtin_name(const std::string& name);

} // namespace qmt
