#ifndef BELLFORGE_TYPES_HPP
#define BELLFORGE_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bellforge {

/** Complex dense matrix over a real scalar type. */
template <class Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/** Complex dense column vector over a real scalar type. */
template <class Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/** Real dense vector. */
template <class Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/** Raised when an argument lies outside an operation's domain. */
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/** Raised on incompatible tensor-factor or matrix dimensions. */
class DimensionError : public DomainError {
public:
    using DomainError::DomainError;
};

/** Raised when an iterative or truncated computation fails to converge. */
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bellforge

#endif // BELLFORGE_TYPES_HPP
