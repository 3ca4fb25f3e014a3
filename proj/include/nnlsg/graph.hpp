#ifndef NNLSG_GRAPH_HPP
#define NNLSG_GRAPH_HPP

#include "nnlsg/types.hpp"

#include <array>
#include <string>

namespace nnlsg {

// Four-bond star graph. Bonds b_{-1}, b_{-2} carry x in [-L, 0], bonds
// b_{+1}, b_{+2} carry x in [0, L]. Grid index 0 of every bond is the
// vertex point x = 0 and indices grow away from the vertex, so the point
// -x_i on the mirror bond has the same local index i.

/// Signed bond identifier, one of {-2, -1, +1, +2}.
class BondId {
public:
  explicit constexpr BondId(int j) : j_(j) {
    if (j != -2 && j != -1 && j != 1 && j != 2)
      throw std::invalid_argument("BondId: j must be one of {-2,-1,1,2}");
  }

  constexpr int value() const { return j_; }
  /// Mirror partner: b_{+j} <-> b_{-j}. An involution.
  constexpr BondId mirror() const { return BondId(-j_); }
  /// Sign of the bond coordinate: x = sign * i * h at grid index i.
  constexpr double coord_sign() const { return j_ > 0 ? 1.0 : -1.0; }
  /// Storage slot; order matches the timeseries CSV columns (m1,p1,m2,p2).
  constexpr int slot() const {
    switch (j_) {
    case -1: return 0;
    case 1: return 1;
    case -2: return 2;
    default: return 3;
    }
  }
  std::string label() const { return j_ > 0 ? "+" + std::to_string(j_) : std::to_string(j_); }

  friend constexpr bool operator==(BondId a, BondId b) { return a.j_ == b.j_; }

private:
  int j_;
};

inline constexpr std::array<BondId, 4> kBonds{BondId(-1), BondId(1), BondId(-2), BondId(2)};

/// Per-bond positive weights (nonlinearity beta or continuity gamma).
struct BondWeights {
  std::array<double, 4> w{};

  double &operator[](BondId b) { return w[b.slot()]; }
  double operator[](BondId b) const { return w[b.slot()]; }

  void validate_positive(const char *what) const {
    for (double v : w)
      if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " weights must be positive");
  }
};

/// Local grid index of the mirror point -x_i on the partner bond. With the
/// vertex at index 0 on every bond the mirror is index-preserving; only the
/// bond id flips.
inline int mirror_index(int i, int points_per_bond) {
  if (i < 0 || i >= points_per_bond)
    throw std::out_of_range("mirror_index: grid index out of range");
  return i;
}

/// gamma weights induced by beta: gamma_{-1} = 1 and
/// gamma_{±j}/gamma_{-1} = sqrt(beta_{±j}/beta_{-1}).
BondWeights gammas_from_betas(const BondWeights &beta);

inline constexpr double kSumRuleTol = 1e-12;

/// Residual of 1/beta_1 + 1/beta_2 = 1/beta_{-1} + 1/beta_{-2} and whether it
/// vanishes to tolerance. Holding it makes the bond system integrable.
std::pair<bool, double> check_integrability_sum_rule(const BondWeights &beta,
                                                     double tol = kSumRuleTol);

/// Residual of 1/beta_{-1} + 1/beta_1 = 1/beta_{-2} + 1/beta_2. Holding it
/// makes the vertex transparent (reflectionless) for incident solitons.
std::pair<bool, double> check_transparency_sum_rule(const BondWeights &beta,
                                                    double tol = kSumRuleTol);

/// Star graph topology plus uniform discretization of each (truncated) bond.
class StarGraph {
public:
  StarGraph(double bond_length, int points_per_bond, const BondWeights &beta,
            const BondWeights &gamma);

  /// gamma derived from beta via the square-root relation.
  StarGraph(double bond_length, int points_per_bond, const BondWeights &beta)
      : StarGraph(bond_length, points_per_bond, beta, gammas_from_betas(beta)) {}

  double bond_length() const { return length_; }
  int points_per_bond() const { return points_; }
  double spacing() const { return h_; }

  double beta(BondId b) const { return beta_[b]; }
  double gamma(BondId b) const { return gamma_[b]; }
  const BondWeights &betas() const { return beta_; }
  const BondWeights &gammas() const { return gamma_; }

  /// Coupling coefficient sqrt(beta_j beta_{-j}) of the bond pair |j|.
  double nonlinear_coeff(BondId b) const { return coeff_[b.slot()]; }

  /// Signed coordinate of grid index i on bond b.
  double coord(BondId b, int i) const { return b.coord_sign() * h_ * i; }

private:
  double length_;
  int points_;
  double h_;
  BondWeights beta_;
  BondWeights gamma_;
  std::array<double, 4> coeff_{};
};

/// Per-bond complex grid functions at one time level.
struct Field {
  std::array<VecC, 4> bond;
  double t = 0.0;

  explicit Field(int points_per_bond = 0, double time = 0.0) : t(time) {
    for (auto &v : bond) v = VecC::Zero(points_per_bond);
  }

  VecC &operator[](BondId b) { return bond[b.slot()]; }
  const VecC &operator[](BondId b) const { return bond[b.slot()]; }

  bool all_finite() const {
    for (const auto &v : bond)
      if (!v.allFinite()) return false;
    return true;
  }
};

} // namespace nnlsg

#endif
