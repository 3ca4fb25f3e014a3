#ifndef NNLSG_FRACOPS_HPP
#define NNLSG_FRACOPS_HPP

#include "nnlsg/types.hpp"

#include <vector>

namespace nnlsg {

// Fractional-in-time machinery behind the transparent boundary operators:
// the half-order time derivative as a convolution quadrature, a running
// time integral, and the accumulated gauge phase nu = int_0^t V.

/// First n coefficients of the series (1-z)^{1/2} = sum_k w_k z^k.
/// w_0 = 1 and w_k = w_{k-1} (k - 3/2)/k.
std::vector<double> cq_weights(std::size_t n);

/// Append-only boundary-trace history with the quadrature weights needed to
/// evaluate the half-derivative and the running integral of the trace. One
/// instance per boundary point per operator; histories are kept in full.
class ConvolutionState {
public:
  explicit ConvolutionState(double dt);

  double dt() const { return dt_; }
  std::size_t size() const { return samples_.size(); }
  Complex last() const { return samples_.empty() ? Complex(0.0) : samples_.back(); }
  const std::vector<double> &weights() const { return weights_; }

  void append(Complex f) { samples_.push_back(f); }

  /// Convolution sum over the stored history against weights 1..n+1, i.e.
  /// the half-derivative contribution of everything but a yet-unknown next
  /// sample. Used to close the boundary update implicitly.
  Complex pending_half_tail();

  /// (1/sqrt(dt)) sum_{k=0}^{n} w_k f_{n-k} over the stored samples.
  Complex half_derivative_value();

  /// Running trapezoidal integral over the stored samples.
  Complex integral_value() const { return integral_; }

  /// Recompute the cached trapezoid (called by append via helpers below).
  void accumulate_integral();

private:
  void ensure_weights(std::size_t n);

  double dt_;
  std::vector<double> weights_;
  std::vector<Complex> samples_;
  Complex integral_{0.0};
  std::size_t integrated_ = 0;
};

/// Appends f_n and returns the convolution-quadrature half-derivative
/// (1/sqrt(dt)) sum_k w_k f_{n-k} at the new time level.
Complex half_derivative(ConvolutionState &state, Complex f_n);

/// Appends f_n and returns the running trapezoidal approximation of
/// int_0^{t_n} f ds.
Complex time_integral(ConvolutionState &state, Complex f_n);

/// Accumulated gauge phase nu(t) = int_0^t V(s) ds at one boundary point,
/// advanced by the trapezoid rule. last_V must hold V(0) before stepping.
struct GaugeState {
  Complex nu{0.0};
  Complex last_V{0.0};

  explicit GaugeState(Complex v0 = Complex(0.0)) : last_V(v0) {}
};

/// nu <- nu + dt (V_{n-1} + V_n)/2. Call once per accepted time step.
GaugeState &gauge_update(GaugeState &g, Complex V_n, double dt);

/// Boundary operator value
///   T0(q)|_b = -e^{-i pi/4} e^{i nu} D^{1/2}(e^{-i nu} q)|_b
///              - (i/4) dVdx e^{i nu} I_t(e^{-i nu} q)|_b,
/// where D^{1/2} and I_t act on the gauged trace. Appends the gauged sample
/// to both histories; nu must already be advanced through t_n.
Complex t0_apply(ConvolutionState &q_trace, const GaugeState &g, Complex dVdx,
                 ConvolutionState &i_state, Complex q_n);

enum class BoundarySide { Left, Right };

/// Outgoing-flux closure dq/dx at a domain end: the left end uses -T0, the
/// right end +T0, so a wave leaving through either end satisfies the
/// half-derivative impedance relation with no reflection.
Complex line_tbc_flux(BoundarySide side, ConvolutionState &q_trace, const GaugeState &g,
                      Complex dVdx, ConvolutionState &i_state, Complex q_n);

} // namespace nnlsg

#endif
