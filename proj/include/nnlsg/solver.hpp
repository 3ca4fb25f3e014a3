#ifndef NNLSG_SOLVER_HPP
#define NNLSG_SOLVER_HPP

#include "nnlsg/fracops.hpp"
#include "nnlsg/graph.hpp"
#include "nnlsg/types.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace nnlsg {

// Explicit time integration of the coupled bond system
//   i dq_b/dt + d^2 q_b/dx^2 + sqrt(beta_j beta_{-j}) q_b^2 conj(q_{-b}(-x)) = 0
// with gamma-weighted continuity and generalized Kirchhoff flux balance at
// the vertex, and a selectable closure (hard zero or half-derivative
// transparency) at the outer bond ends.

enum class OuterBc { Dirichlet0, Tbc };
enum class VertexMode { WeightedKirchhoff };

struct SolverConfig {
  double T = 2.0;
  double c_dt = 0.5;   // dt = c_dt h^2 unless dt is set explicitly
  double dt = 0.0;
  OuterBc outer_bc = OuterBc::Dirichlet0;
  VertexMode vertex_mode = VertexMode::WeightedKirchhoff;
  double nonlinear_scale = 1.0;  // 0 switches off the coupling (linear mode)
};

/// Largest stable c_dt for four-stage explicit stepping of i d^2/dx^2
/// (imaginary-axis stability bound 2*sqrt(2) against spectral radius 4/h^2).
inline constexpr double kMaxCdt = 0.7;

/// Effective time step: explicit dt if set, else c_dt h^2, then rounded so
/// that an integer number of steps lands exactly on T.
double resolve_dt(const StarGraph &graph, const SolverConfig &config);

/// Convolution histories and gauge phase owned by one outer bond end.
struct OuterBoundaryState {
  ConvolutionState half;
  ConvolutionState integ;
  GaugeState gauge;

  explicit OuterBoundaryState(double dt) : half(dt), integ(dt) {}
};

struct SimState {
  Field field;
  double dt = 0.0;
  long step = 0;
  OuterBc outer_bc = OuterBc::Dirichlet0;
  double nonlinear_scale = 1.0;
  std::vector<OuterBoundaryState> outer;  // slot-ordered, present in Tbc mode

  double t() const { return field.t; }
};

SimState make_sim_state(const StarGraph &graph, const SolverConfig &config, const Field &ic);

/// dq/dt = i (q_xx + scale * coeff_b q_b^2 conj(q_{-b} at the mirror index))
/// on interior points; boundary rows are left at zero (they are constrained,
/// not evolved).
Field rhs(const StarGraph &graph, const Field &field, double nonlinear_scale = 1.0);

/// Overwrites the four vertex values so that gamma_b q_b(0) share one value
/// u and the (1/gamma)-weighted one-sided fluxes balance. u solves the
/// linear system of the five vertex unknowns (shared amplitude plus the four
/// bond traces) in closed form; positive gammas keep it nonsingular.
void apply_vertex_bc(const StarGraph &graph, Field &field);

/// Applies the configured outer closure to the outermost point of every
/// bond. In Tbc mode the end value is solved from the implicit relation
/// "one-sided dq/dx equals the transparent flux", with histories untouched.
void apply_outer_bc(const StarGraph &graph, SimState &state);

/// One classical four-stage step. The vertex condition (and, in Tbc mode,
/// the boundary flux relation with histories frozen at the current level) is
/// enforced on every stage input; boundary histories advance once per step.
/// Throws SolverError with the offending bond/index on non-finite values.
void rk4_step(const StarGraph &graph, const SolverConfig &config, SimState &state);

using RecordHook = std::function<void(const SimState &)>;

/// Steps from t = 0 to T. on_record fires on the initial state, every
/// record_every-th step and the final step; on_step (optional) fires after
/// every step. T = 0 yields only the initial record.
void run(const StarGraph &graph, const SolverConfig &config, const Field &ic, int record_every,
         const RecordHook &on_record, const RecordHook &on_step = nullptr);

/// Residuals of the relations that hold at a transparent vertex: equality of
/// the gauge phases and potentials across bonds at x = 0, equality of the
/// sqrt(beta)-weighted boundary-operator values, and the (1/sqrt(beta))-
/// weighted operator flux balance.
struct VertexResiduals {
  double nu_spread = 0.0;
  double potential_spread = 0.0;
  double t0_continuity = 0.0;
  double t0_flux_balance = 0.0;
};

/// Stateful vertex observer: feed every accepted step (starting with the
/// initial state) and read off the residuals; maxima are tracked over time.
class VertexTransparencyDiagnostic {
public:
  VertexTransparencyDiagnostic(const StarGraph &graph, double dt);

  VertexResiduals observe(const StarGraph &graph, const Field &field);
  const VertexResiduals &maxima() const { return max_; }

private:
  double dt_;
  bool seeded_ = false;
  std::vector<OuterBoundaryState> states_;
  VertexResiduals max_;
};

// ---------------------------------------------------------------------------
// Single-line test mode: the same equation on [-L, L] with the mirror taken
// on the one line (index i <-> M-1-i). Used for free-packet boundary tests
// and time-integrator convergence studies.

struct LineConfig {
  double length = 10.0;  // half-width; domain is [-length, length]
  int points = 401;
  double coupling = 2.0;
  double c_dt = 0.5;
  double dt = 0.0;
  OuterBc outer_bc = OuterBc::Dirichlet0;
  double nonlinear_scale = 1.0;
};

class LineSim {
public:
  LineSim(const LineConfig &config, const VecC &ic);

  void step_once();
  void advance(double T);  // integer number of steps from the current time

  const VecC &values() const { return q_; }
  double t() const { return t_; }
  double dt() const { return dt_; }
  double spacing() const { return h_; }
  VecR grid() const;

  /// dq/dt of the current state on interior points (test access).
  VecC rhs_interior() const;

private:
  struct EndCoeffs {
    Complex c0, d0;
  };
  void enforce_bc(VecC &q, const std::optional<std::array<EndCoeffs, 2>> &tbc) const;

  LineConfig cfg_;
  double h_, dt_;
  double t_ = 0.0;
  VecC q_;
  std::vector<OuterBoundaryState> ends_;  // [left, right] in Tbc mode
};

} // namespace nnlsg

#endif
