#include "nnlsg/observables.hpp"

#include <algorithm>
#include <cmath>

namespace nnlsg {

namespace {

// Derivative with respect to the global coordinate x, second order, stored
// index order (which runs against x on the -j bonds).
VecC d_dx(const VecC &q, double h, double coord_sign) {
  const Eigen::Index m = q.size();
  VecC d(m);
  const double inv2h = coord_sign / (2.0 * h);
  d[0] = (-3.0 * q[0] + 4.0 * q[1] - q[2]) * inv2h;
  d.segment(1, m - 2) = (q.segment(2, m - 2) - q.segment(0, m - 2)) * inv2h;
  d[m - 1] = (3.0 * q[m - 1] - 4.0 * q[m - 2] + q[m - 3]) * inv2h;
  return d;
}

Complex trapezoid(const VecC &integrand, double h) {
  const Eigen::Index m = integrand.size();
  Complex acc = 0.5 * (integrand[0] + integrand[m - 1]);
  for (Eigen::Index i = 1; i + 1 < m; ++i) acc += integrand[i];
  return acc * h;
}

double span_or(double T, const std::vector<ObservableRecord> &records) {
  return T > 0.0 ? T : records.back().t - records.front().t;
}

} // namespace

Complex bond_norm(const StarGraph &graph, const Field &field, BondId b) {
  const VecC &q = field[b];
  const VecC &qp = field[b.mirror()];
  VecC integrand = (q.array() * qp.array().conjugate()).matrix();
  return trapezoid(integrand, graph.spacing());
}

Complex bond_energy(const StarGraph &graph, const Field &field, BondId b) {
  const VecC &q = field[b];
  const VecC &qp = field[b.mirror()];
  const double h = graph.spacing();
  const VecC dq = d_dx(q, h, b.coord_sign());
  const VecC dqp = d_dx(qp, h, b.mirror().coord_sign());
  const double half_coeff = 0.5 * graph.nonlinear_coeff(b);
  VecC integrand =
      (dq.array() * dqp.array().conjugate() +
       half_coeff * q.array().square() * qp.array().conjugate().square())
          .matrix();
  return trapezoid(integrand, h);
}

std::optional<double> reflection_coefficient(const ObservableRecord &record) {
  double launch = 0.0, total = 0.0;
  for (BondId b : kBonds) {
    const double a = std::abs(record.norm(b));
    total += a;
    if (std::abs(b.value()) == 1) launch += a;
  }
  if (total < kReflectionEps) return std::nullopt;
  return launch / total;
}

ObservableRecord make_record(const StarGraph &graph, const Field &field) {
  ObservableRecord rec;
  rec.t = field.t;
  for (BondId b : kBonds) {
    rec.bond_norms[b.slot()] = bond_norm(graph, field, b);
    rec.total_norm += rec.bond_norms[b.slot()];
    rec.total_energy += bond_energy(graph, field, b);
  }
  rec.reflection = reflection_coefficient(rec);
  return rec;
}

Complex mean_norm(const std::vector<ObservableRecord> &records, double T) {
  if (records.size() < 2) throw std::invalid_argument("mean_norm: need at least 2 records");
  // A constant series has itself as its mean; bypass quadrature rounding so
  // the deviation metric is exactly zero in that case.
  const bool constant = std::all_of(records.begin(), records.end(), [&](const auto &r) {
    return r.total_norm == records.front().total_norm;
  });
  if (constant) return records.front().total_norm;
  Complex acc{0.0};
  for (std::size_t i = 1; i < records.size(); ++i)
    acc += 0.5 * (records[i].total_norm + records[i - 1].total_norm) *
           (records[i].t - records[i - 1].t);
  return acc / span_or(T, records);
}

double norm_error(const std::vector<ObservableRecord> &records, double T) {
  if (records.size() < 2) throw std::invalid_argument("norm_error: need at least 2 records");
  const Complex nbar = mean_norm(records, T);
  double acc = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double a = std::abs(nbar - records[i - 1].total_norm);
    const double b = std::abs(nbar - records[i].total_norm);
    acc += 0.5 * (a + b) * (records[i].t - records[i - 1].t);
  }
  return acc;
}

} // namespace nnlsg
