#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace modcat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Numerical thresholds shared by every check in the library.
struct Tolerances {
    double relation = 1e-9;     // matrix identities, unitarity, modular relations
    double integrality = 1e-6;  // distance of Verlinde coefficients from integers
    long long max_denominator = 48;
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Sizes of matrices, vectors or label lists disagree.
class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

/// Data that cannot define a modular category (zero Gauss sum, zero S-row, ...).
class DegenerateData : public Error {
  public:
    using Error::Error;
};

/// Malformed input document or invalid parameter.
class InputError : public Error {
  public:
    using Error::Error;
};

inline Complex unit_phase(double turns) {
    return std::polar(1.0, 2.0 * kPi * turns);
}

}  // namespace modcat
