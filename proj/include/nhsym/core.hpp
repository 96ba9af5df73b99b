#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nhsym {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr cplx I_UNIT{0.0, 1.0};

// Error taxonomy. The CLI maps each family onto an exit code:
// InputError -> 2, InvalidArgument/DomainError/PreconditionError -> 3,
// NumericalRefusal -> 4.

/// Malformed external input (files, configuration documents).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The request is mathematically undefined for the given object
/// (parity on an asymmetric grid, expectation in the zero vector, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Momentum-basis reversal on even grids: the Nyquist slot has no -p partner.
class UnsupportedError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A relation the caller promised does not hold.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// The library declines to produce a number it cannot stand behind.
class NumericalRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NearExceptionalPointError : public NumericalRefusal {
public:
    NearExceptionalPointError(const std::string& what, double condition)
        : NumericalRefusal(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

class DegeneracyError : public NumericalRefusal {
public:
    using NumericalRefusal::NumericalRefusal;
};

/// Matrix exponential overflow; carries a suggested number of time slices.
class RangeError : public NumericalRefusal {
public:
    RangeError(const std::string& what, long suggested_pieces)
        : NumericalRefusal(what), suggested_pieces_(suggested_pieces) {}
    long suggested_pieces() const noexcept { return suggested_pieces_; }

private:
    long suggested_pieces_;
};

/// ||a - b||_F / ||b||_F, falling back to the absolute norm when b vanishes.
inline double relative_frobenius(const Matrix& a, const Matrix& b) {
    const double diff = (a - b).norm();
    const double scale = b.norm();
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace nhsym
