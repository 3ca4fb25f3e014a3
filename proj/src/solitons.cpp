#include "nnlsg/solitons.hpp"

#include <cmath>
#include <sstream>

namespace nnlsg {

namespace {

[[noreturn]] void throw_singular(const char *which, double x, double t) {
  std::ostringstream os;
  os << which << ": singular denominator at x = " << x << ", t = " << t;
  throw std::domain_error(os.str());
}

Complex log_delta(const TravelingSolitonParams &p) {
  const Complex s = p.k1 + p.kbar1;
  return std::log(-p.alpha1 * p.beta1_sol / (s * s));
}

} // namespace

Complex standing_soliton(const StandingSolitonParams &p, double x, double t) {
  const double esum = p.eta1 + p.etabar1;
  // Exponents assembled first so either branch stays in range when one of
  // the raw exponentials would overflow.
  const Complex num_exp = kImag * p.thetabar1 + 4.0 * kImag * p.etabar1 * p.etabar1 * t -
                          2.0 * p.etabar1 * x;
  const Complex a = kImag * (p.theta1 + p.thetabar1) -
                    4.0 * kImag * (p.eta1 * p.eta1 - p.etabar1 * p.etabar1) * t - 2.0 * esum * x;
  Complex den, num;
  if (a.real() <= 0.0) {
    den = 1.0 + std::exp(a);
    num = std::exp(num_exp);
  } else {
    den = std::exp(-a) + 1.0;
    num = std::exp(num_exp - a);
  }
  if (std::abs(den) < 1e-12) throw_singular("standing_soliton", x, t);
  return -2.0 * esum * num / den;
}

Complex traveling_soliton(const TravelingSolitonParams &p, double x, double t) {
  const Complex xi1 = kImag * p.k1 * x + kImag * p.k1 * p.k1 * t;
  const Complex xibar1 = kImag * p.kbar1 * x - kImag * p.kbar1 * p.kbar1 * t;
  const Complex delta = log_delta(p);
  const Complex chi = 0.5 * (xi1 + xibar1 + delta);
  const Complex w = 0.5 * (xibar1 - xi1);
  // 2 cosh(chi) = e^{s chi}(1 + e^{-2 s chi}) with s = sign(Re chi); folding
  // e^{-s chi} into the numerator keeps both factors bounded on the tails.
  const double s = chi.real() >= 0.0 ? 1.0 : -1.0;
  const Complex den = 1.0 + std::exp(-2.0 * s * chi);
  if (std::abs(den) < 1e-12) throw_singular("traveling_soliton", x, t);
  return p.alpha1 * std::exp(-0.5 * delta) * std::exp(w - s * chi) / den;
}

Complex traveling_soliton_dx(const TravelingSolitonParams &p, double x, double t) {
  const Complex xi1 = kImag * p.k1 * x + kImag * p.k1 * p.k1 * t;
  const Complex xibar1 = kImag * p.kbar1 * x - kImag * p.kbar1 * p.kbar1 * t;
  const Complex chi = 0.5 * (xi1 + xibar1 + log_delta(p));
  const double s = chi.real() >= 0.0 ? 1.0 : -1.0;
  const Complex em = std::exp(-2.0 * s * chi);
  const Complex tanh_chi = s * (1.0 - em) / (1.0 + em);
  const Complex w_x = 0.5 * kImag * (p.kbar1 - p.k1);
  const Complex chi_x = 0.5 * kImag * (p.k1 + p.kbar1);
  return traveling_soliton(p, x, t) * (w_x - chi_x * tanh_chi);
}

TravelingSolitonParams mirror_partner_params(const TravelingSolitonParams &p) {
  return TravelingSolitonParams(std::conj(p.beta1_sol), std::conj(p.alpha1), std::conj(p.kbar1),
                                std::conj(p.k1));
}

TravelingSolitonParams place_envelope(const TravelingSolitonParams &p, double center) {
  const double decay = (p.k1 + p.kbar1).imag();
  if (!(decay > 0.0))
    throw std::invalid_argument("place_envelope: Im(k1 + kbar1) must be positive");
  // The envelope peak at t = 0 sits where Re(xi1 + xibar1 + Delta) = 0,
  // i.e. at x = Re(Delta)/decay; rescaling both amplitudes by e^{d} shifts
  // Delta by 2d and nothing else.
  const double d = 0.5 * (center * decay - log_delta(p).real());
  const double c = std::exp(d);
  return TravelingSolitonParams(c * p.alpha1, c * p.beta1_sol, p.k1, p.kbar1);
}

Complex graph_soliton(const TravelingSolitonParams &p, double beta_bond, double x, double t) {
  if (!(beta_bond > 0.0)) throw std::invalid_argument("graph_soliton: beta must be positive");
  return std::sqrt(2.0 / beta_bond) * traveling_soliton(p, x, t);
}

Complex nnls_residual(const FieldSampler &q, const FieldSampler &qm, double coeff, double x,
                      double t, double h, double dt) {
  const Complex qt = (q(x, t + dt) - q(x, t - dt)) / (2.0 * dt);
  const Complex qxx = (q(x + h, t) - 2.0 * q(x, t) + q(x - h, t)) / (h * h);
  const Complex q0 = q(x, t);
  return kImag * qt + qxx + coeff * q0 * q0 * std::conj(qm(-x, t));
}

Field initial_condition(const StarGraph &graph, const TravelingSolitonParams &p, double offset,
                        double tail_tol) {
  const TravelingSolitonParams launch = place_envelope(p, std::abs(offset));
  const TravelingSolitonParams partner = mirror_partner_params(launch);

  const double tail = std::abs(traveling_soliton(launch, 0.0, 0.0));
  if (!(tail < tail_tol)) {
    std::ostringstream os;
    os << "initial_condition: envelope tail at the vertex is " << tail << " (tolerance "
       << tail_tol << "); offset too small for these soliton parameters";
    throw std::invalid_argument(os.str());
  }

  const int m = graph.points_per_bond();
  Field f(m, 0.0);
  const BondId p1(1), m1(-1);
  for (int i = 0; i < m; ++i) {
    f[p1][i] = graph_soliton(launch, graph.beta(p1), graph.coord(p1, i), 0.0);
    f[m1][i] = graph_soliton(partner, graph.beta(m1), graph.coord(m1, i), 0.0);
  }
  // b_{±2} stay identically zero.
  return f;
}

} // namespace nnlsg
