#ifndef NNLSG_OBSERVABLES_HPP
#define NNLSG_OBSERVABLES_HPP

#include "nnlsg/graph.hpp"
#include "nnlsg/types.hpp"

#include <optional>
#include <vector>

namespace nnlsg {

// Conserved-quantity and scattering diagnostics. The bond quasi-norms
//   N_b = int_{bond} q_b(x) conj(q_{-b}(-x)) dx
// are complex in general; mirror pairs are conjugates of each other, so the
// total is real up to rounding. All quadrature is trapezoidal on the grid.

struct ObservableRecord {
  double t = 0.0;
  std::array<Complex, 4> bond_norms{};  // slot order m1, p1, m2, p2
  Complex total_norm{0.0};
  Complex total_energy{0.0};
  std::optional<double> reflection;  // missing when the norm sum vanishes

  Complex norm(BondId b) const { return bond_norms[b.slot()]; }
};

/// Quasi-norm of one bond.
Complex bond_norm(const StarGraph &graph, const Field &field, BondId b);

/// Quasi-energy of one bond:
///   int ( dq_b/dx (x) * conj(dq_{-b}/dx)(-x)
///         + (coeff_b/2) q_b^2(x) conj(q_{-b})^2(-x) ) dx,
/// with the mirrored factor differentiated first and then evaluated at -x.
Complex bond_energy(const StarGraph &graph, const Field &field, BondId b);

inline constexpr double kReflectionEps = 1e-14;

/// Fraction of the quasi-norm (by modulus) remaining on the launch pair:
///   R = (|N_{-1}| + |N_{+1}|) / sum_b |N_b|,  in [0, 1].
/// Empty when the denominator is below kReflectionEps.
std::optional<double> reflection_coefficient(const ObservableRecord &record);

/// Record with all observables of the current state.
ObservableRecord make_record(const StarGraph &graph, const Field &field);

/// Time-integrated deviation of the total norm from its mean:
///   N_err = int_0^T |Nbar - N(t)| dt,  Nbar = (1/T) int_0^T N dt,
/// both by trapezoid over the records. T defaults to the records' time span
/// when not positive. Throws on fewer than 2 records.
double norm_error(const std::vector<ObservableRecord> &records, double T = 0.0);

/// Mean total norm over the records (trapezoid / elapsed time).
Complex mean_norm(const std::vector<ObservableRecord> &records, double T = 0.0);

} // namespace nnlsg

#endif
