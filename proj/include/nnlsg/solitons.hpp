#ifndef NNLSG_SOLITONS_HPP
#define NNLSG_SOLITONS_HPP

#include "nnlsg/graph.hpp"
#include "nnlsg/types.hpp"

#include <functional>

namespace nnlsg {

// Closed-form solutions of the nonlocal Schroedinger equation
//
//   i q_t(x,t) + q_xx(x,t) + 2 q(x,t)^2 conj(q(-x,t)) = 0
//
// used as initial conditions and as correctness oracles. The nonlocal
// coupling ties x to -x, so the equation is not translation invariant;
// solitons are placed by scaling the amplitude constants, not by shifting x.

/// Constants of the standing ("flapping") one-soliton solution.
struct StandingSolitonParams {
  double eta1, etabar1, theta1, thetabar1;

  StandingSolitonParams(double e1, double eb1, double th1, double thb1)
      : eta1(e1), etabar1(eb1), theta1(th1), thetabar1(thb1) {
    if (eta1 + etabar1 == 0.0)
      throw std::invalid_argument("StandingSolitonParams: eta1 + etabar1 must be nonzero");
  }
};

/// q(x,t) = -2(eta1+etabar1) e^{i thetabar1} e^{4 i etabar1^2 t} e^{-2 etabar1 x}
///          / (1 + e^{i(theta1+thetabar1)} e^{-4 i(eta1^2-etabar1^2) t} e^{-2(eta1+etabar1) x}).
/// Throws on a (near-)singular denominator, reporting the location.
Complex standing_soliton(const StandingSolitonParams &p, double x, double t);

/// Constants of the traveling one-soliton solution. beta1_sol is the second
/// amplitude constant of the solution and is unrelated to the bond weights.
struct TravelingSolitonParams {
  Complex alpha1, beta1_sol, k1, kbar1;

  TravelingSolitonParams(Complex a1, Complex b1, Complex k1_, Complex kb1)
      : alpha1(a1), beta1_sol(b1), k1(k1_), kbar1(kb1) {
    if (k1 + kbar1 == Complex(0.0))
      throw std::invalid_argument("TravelingSolitonParams: k1 + kbar1 must be nonzero");
    if (alpha1 * beta1_sol == Complex(0.0))
      throw std::invalid_argument("TravelingSolitonParams: alpha1 * beta1_sol must be nonzero");
  }
};

/// Traveling soliton in sech form. With
///   xi1  = i k1 x + i k1^2 t,   xibar1 = i kbar1 x - i kbar1^2 t,
///   Delta = Log(-alpha1 beta1_sol / (k1+kbar1)^2)   (principal branch),
///   chi  = (xi1 + xibar1 + Delta)/2,
/// the value is
///   q = alpha1 e^{-Delta/2} e^{(xibar1-xi1)/2} / (2 cosh chi)
///     = alpha1 e^{-Delta/2} e^{(xibar1-xi1)/2}
///       * [cosh(Re chi) cos(Im chi) + i sinh(Re chi) sin(Im chi)]^{-1} / 2,
/// evaluated in an overflow-safe exponential form. Throws where 2 cosh chi
/// vanishes.
Complex traveling_soliton(const TravelingSolitonParams &p, double x, double t);

/// Parameters of the mirror companion field. q(x,t) with params p and
/// q(x,t) with params mirror_partner_params(p) solve the coupled pair
///   i dq_a/dt + q_a'' + 2 q_a^2 conj(q_b(-x)) = 0   (and a<->b),
/// and the two traces agree at x = 0 for all t. The companion is
/// conj-reflected data: (alpha,beta,k,kbar) -> (beta*, alpha*, kbar*, k1*).
TravelingSolitonParams mirror_partner_params(const TravelingSolitonParams &p);

/// Amplitude rescaling that puts the envelope maximum of q at x = center
/// at t = 0; returns the scaled parameter set. Requires Im(k1+kbar1) > 0.
TravelingSolitonParams place_envelope(const TravelingSolitonParams &p, double center);

/// Spatial derivative dq/dx of the traveling soliton,
///   q' = q (w' - chi' tanh chi),  w' = i(kbar1-k1)/2, chi' = i(k1+kbar1)/2.
Complex traveling_soliton_dx(const TravelingSolitonParams &p, double x, double t);

/// Bond-weight scaling of the line soliton: sqrt(2/beta_bond) * q(x,t).
Complex graph_soliton(const TravelingSolitonParams &p, double beta_bond, double x, double t);

using FieldSampler = std::function<Complex(double, double)>;

/// Centered second-order finite-difference residual of
///   i q_t + q_xx + coeff * q(x)^2 conj(qm(-x))
/// at (x,t). For exact solutions this is O(h^2) + O(dt^2). qm is the field
/// whose conjugate mirror enters the nonlinearity (qm = q on a line).
Complex nnls_residual(const FieldSampler &q, const FieldSampler &qm, double coeff, double x,
                      double t, double h, double dt);

inline constexpr double kDefaultTailTol = 5e-3;

/// Initial state for the transmission experiments: bond b_{+1} carries the
/// traveling soliton with envelope at +offset moving toward the vertex,
/// b_{-1} carries its mirror companion at -offset, bonds b_{±2} start empty
/// (the receiving side of the split). Throws if the envelope tail at the
/// vertex exceeds tail_tol (offset too small for the given parameters).
Field initial_condition(const StarGraph &graph, const TravelingSolitonParams &p, double offset,
                        double tail_tol = kDefaultTailTol);

} // namespace nnlsg

#endif
