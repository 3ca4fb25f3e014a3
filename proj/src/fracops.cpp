#include "nnlsg/fracops.hpp"

#include <cmath>

namespace nnlsg {

std::vector<double> cq_weights(std::size_t n) {
  std::vector<double> w;
  w.reserve(n);
  if (n == 0) return w;
  w.push_back(1.0);
  for (std::size_t k = 1; k < n; ++k) w.push_back(w[k - 1] * (double(k) - 1.5) / double(k));
  return w;
}

ConvolutionState::ConvolutionState(double dt) : dt_(dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("ConvolutionState: dt must be positive");
  weights_.push_back(1.0);
}

void ConvolutionState::ensure_weights(std::size_t n) {
  while (weights_.size() < n) {
    const std::size_t k = weights_.size();
    weights_.push_back(weights_[k - 1] * (double(k) - 1.5) / double(k));
  }
}

Complex ConvolutionState::pending_half_tail() {
  const std::size_t n = samples_.size();
  ensure_weights(n + 1);
  Complex acc{0.0};
  for (std::size_t k = 1; k <= n; ++k) acc += weights_[k] * samples_[n - k];
  return acc;
}

Complex ConvolutionState::half_derivative_value() {
  const std::size_t n = samples_.size();
  if (n == 0) return Complex(0.0);
  ensure_weights(n);
  Complex acc{0.0};
  for (std::size_t k = 0; k < n; ++k) acc += weights_[k] * samples_[n - 1 - k];
  return acc / std::sqrt(dt_);
}

void ConvolutionState::accumulate_integral() {
  while (integrated_ + 1 < samples_.size()) {
    integral_ += 0.5 * dt_ * (samples_[integrated_] + samples_[integrated_ + 1]);
    ++integrated_;
  }
}

Complex half_derivative(ConvolutionState &state, Complex f_n) {
  state.append(f_n);
  return state.half_derivative_value();
}

Complex time_integral(ConvolutionState &state, Complex f_n) {
  state.append(f_n);
  state.accumulate_integral();
  return state.integral_value();
}

GaugeState &gauge_update(GaugeState &g, Complex V_n, double dt) {
  g.nu += 0.5 * dt * (g.last_V + V_n);
  g.last_V = V_n;
  return g;
}

Complex t0_apply(ConvolutionState &q_trace, const GaugeState &g, Complex dVdx,
                 ConvolutionState &i_state, Complex q_n) {
  const Complex phase = std::exp(kImag * g.nu);
  const Complex gauged = q_n / phase;
  const Complex d_half = half_derivative(q_trace, gauged);
  const Complex integ = time_integral(i_state, gauged);
  const Complex root = std::exp(Complex(0.0, -M_PI / 4.0));
  return -root * phase * d_half - 0.25 * kImag * dVdx * phase * integ;
}

Complex line_tbc_flux(BoundarySide side, ConvolutionState &q_trace, const GaugeState &g,
                      Complex dVdx, ConvolutionState &i_state, Complex q_n) {
  const Complex t0 = t0_apply(q_trace, g, dVdx, i_state, q_n);
  return side == BoundarySide::Left ? -t0 : t0;
}

} // namespace nnlsg
