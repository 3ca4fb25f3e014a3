#include "nnlsg/graph.hpp"

#include <cmath>

namespace nnlsg {

BondWeights gammas_from_betas(const BondWeights &beta) {
  beta.validate_positive("beta");
  const double ref = beta[BondId(-1)];
  BondWeights gamma;
  for (BondId b : kBonds) gamma[b] = std::sqrt(beta[b] / ref);
  return gamma;
}

std::pair<bool, double> check_integrability_sum_rule(const BondWeights &beta, double tol) {
  beta.validate_positive("beta");
  const double lhs = 1.0 / beta[BondId(1)] + 1.0 / beta[BondId(2)];
  const double rhs = 1.0 / beta[BondId(-1)] + 1.0 / beta[BondId(-2)];
  const double residual = std::abs(lhs - rhs);
  return {residual <= tol, residual};
}

std::pair<bool, double> check_transparency_sum_rule(const BondWeights &beta, double tol) {
  beta.validate_positive("beta");
  const double lhs = 1.0 / beta[BondId(-1)] + 1.0 / beta[BondId(1)];
  const double rhs = 1.0 / beta[BondId(-2)] + 1.0 / beta[BondId(2)];
  const double residual = std::abs(lhs - rhs);
  return {residual <= tol, residual};
}

StarGraph::StarGraph(double bond_length, int points_per_bond, const BondWeights &beta,
                     const BondWeights &gamma)
    : length_(bond_length), points_(points_per_bond), beta_(beta), gamma_(gamma) {
  if (!(bond_length > 0.0)) throw std::invalid_argument("StarGraph: bond length must be positive");
  if (points_per_bond < 3) throw std::invalid_argument("StarGraph: need at least 3 points per bond");
  beta_.validate_positive("beta");
  gamma_.validate_positive("gamma");
  h_ = length_ / (points_ - 1);
  for (BondId b : kBonds)
    coeff_[b.slot()] = std::sqrt(beta_[b] * beta_[b.mirror()]);
}

} // namespace nnlsg
