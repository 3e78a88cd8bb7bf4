#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace hcip {

using cplx = std::complex<double>;

/// Invalid problem or configuration parameters.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested parameters are outside the supported regime of an analysis.
class Unsupported : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numerical failure: singular systems, non-convergent quadrature, overflow.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrix : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace hcip
