#ifndef NNLSG_TYPES_HPP
#define NNLSG_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace nnlsg {

using Real = double;
using Complex = std::complex<double>;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

/// Thrown when a time step produces non-finite values.
class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace nnlsg

#endif
