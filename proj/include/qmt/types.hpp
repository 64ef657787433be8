// types.hpp — Common matrix/scalar aliases for the library

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qmt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

} // namespace qmt
