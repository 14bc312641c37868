#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace warpfock {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error { using Error::Error; };
class AdmissibilityError : public Error { using Error::Error; };
class NumericalError : public Error { using Error::Error; };
class RangeError : public Error { using Error::Error; };
class RealizabilityError : public Error { using Error::Error; };
class PreconditionError : public Error { using Error::Error; };
class OrderingError : public Error { using Error::Error; };
class ConsistencyError : public Error { using Error::Error; };
class EmptySupportError : public Error { using Error::Error; };
class GrammarError : public Error { using Error::Error; };

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace warpfock
