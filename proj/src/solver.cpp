#include "nnlsg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nnlsg {

namespace {

const Complex kRoot = std::exp(Complex(0.0, -M_PI / 4.0));

Complex potential_at(const StarGraph &g, const Field &f, BondId b, int i) {
  return g.nonlinear_coeff(b) * f[b][i] * std::conj(f[b.mirror()][i]);
}

Field axpy(const Field &f, const Field &k, double a) {
  Field out;
  for (int s = 0; s < 4; ++s) out.bond[s] = f.bond[s] + a * k.bond[s];
  out.t = f.t;
  return out;
}

void zero_outer_ends(Field &f) {
  for (auto &v : f.bond) v[v.size() - 1] = Complex(0.0);
}

// Per-step boundary-solve coefficients with histories and gauge frozen at
// the current level. The end value of every bond then satisfies
//   q_end = (b + d0) / (a - c0),
// where b is built from the two interior neighbours; the same expression
// covers both orientations because the one-sided stencil and the outgoing
// flux flip sign together.
struct TbcPlan {
  double a = 0.0;
  std::array<Complex, 4> c0{}, d0{};
};

TbcPlan prepare_tbc(const StarGraph &g, SimState &st) {
  const int e = g.points_per_bond() - 1;
  const double h = g.spacing();
  const double dt = st.dt;
  const double sq = std::sqrt(dt);
  TbcPlan plan;
  plan.a = 1.5 / h;
  for (BondId b : kBonds) {
    auto &obs = st.outer[b.slot()];
    const Complex v0 = st.nonlinear_scale * potential_at(g, st.field, b, e);
    const Complex v1 = st.nonlinear_scale * potential_at(g, st.field, b, e - 1);
    const Complex v2 = st.nonlinear_scale * potential_at(g, st.field, b, e - 2);
    Complex vx = (3.0 * v0 - 4.0 * v1 + v2) / (2.0 * h);
    if (b.coord_sign() < 0) vx = -vx;  // stored index runs against x on -j bonds
    const Complex phase = std::exp(kImag * obs.gauge.nu);
    const Complex tail = obs.half.pending_half_tail();
    const Complex integ_const = obs.integ.integral_value() + 0.5 * dt * obs.integ.last();
    plan.c0[b.slot()] = -kRoot / sq - 0.125 * kImag * vx * dt;
    plan.d0[b.slot()] = -kRoot * phase * tail / sq - 0.25 * kImag * vx * phase * integ_const;
  }
  return plan;
}

void enforce_tbc(const StarGraph &g, Field &f, const TbcPlan &plan) {
  const int e = g.points_per_bond() - 1;
  const double inv2h = 1.0 / (2.0 * g.spacing());
  for (BondId b : kBonds) {
    VecC &q = f[b];
    const Complex rhs_b = (4.0 * q[e - 1] - q[e - 2]) * inv2h;
    q[e] = (rhs_b + plan.d0[b.slot()]) / (plan.a - plan.c0[b.slot()]);
  }
}

void finalize_tbc(const StarGraph &g, SimState &st, const TbcPlan &plan) {
  enforce_tbc(g, st.field, plan);
  const int e = g.points_per_bond() - 1;
  for (BondId b : kBonds) {
    auto &obs = st.outer[b.slot()];
    const Complex v_end = st.nonlinear_scale * potential_at(g, st.field, b, e);
    gauge_update(obs.gauge, v_end, st.dt);
    const Complex s = st.field[b][e] * std::exp(-kImag * obs.gauge.nu);
    obs.half.append(s);
    obs.integ.append(s);
    obs.integ.accumulate_integral();
  }
}

[[noreturn]] void throw_nonfinite(const Field &f, long step) {
  for (BondId b : kBonds) {
    const VecC &q = f[b];
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (!std::isfinite(q[i].real()) || !std::isfinite(q[i].imag())) {
        std::ostringstream os;
        os << "time step became unstable: non-finite value on bond b_{" << b.label()
           << "} at grid index " << i << ", t = " << f.t << ", step " << step;
        throw SolverError(os.str());
      }
    }
  }
  throw SolverError("time step became unstable (non-finite value)");
}

} // namespace

double resolve_dt(const StarGraph &graph, const SolverConfig &config) {
  if (!(config.c_dt > 0.0) || config.c_dt > kMaxCdt + 1e-12)
    throw std::invalid_argument("SolverConfig: c_dt must lie in (0, 0.7]");
  double dt = config.dt > 0.0 ? config.dt : config.c_dt * graph.spacing() * graph.spacing();
  if (config.T > 0.0) {
    const long n = std::max<long>(1, static_cast<long>(std::ceil(config.T / dt - 1e-9)));
    dt = config.T / double(n);
  }
  return dt;
}

SimState make_sim_state(const StarGraph &graph, const SolverConfig &config, const Field &ic) {
  for (const auto &v : ic.bond)
    if (v.size() != graph.points_per_bond())
      throw std::invalid_argument("make_sim_state: field size does not match the graph");
  SimState st;
  st.field = ic;
  st.dt = resolve_dt(graph, config);
  st.outer_bc = config.outer_bc;
  st.nonlinear_scale = config.nonlinear_scale;
  if (st.outer_bc == OuterBc::Tbc)
    st.outer.assign(4, OuterBoundaryState(st.dt));
  apply_vertex_bc(graph, st.field);
  if (st.outer_bc == OuterBc::Dirichlet0) zero_outer_ends(st.field);
  return st;
}

Field rhs(const StarGraph &graph, const Field &field, double nonlinear_scale) {
  const int m = graph.points_per_bond();
  const int n = m - 2;
  const double inv_h2 = 1.0 / (graph.spacing() * graph.spacing());
  Field d(m, field.t);
  for (BondId b : kBonds) {
    const VecC &q = field[b];
    const VecC &qp = field[b.mirror()];
    VecC lap = (q.segment(2, n) - 2.0 * q.segment(1, n) + q.segment(0, n)) * inv_h2;
    if (nonlinear_scale != 0.0) {
      const double c = nonlinear_scale * graph.nonlinear_coeff(b);
      lap.array() += c * q.segment(1, n).array().square() * qp.segment(1, n).array().conjugate();
    }
    d[b].segment(1, n) = kImag * lap;
  }
  return d;
}

void apply_vertex_bc(const StarGraph &graph, Field &field) {
  Complex num{0.0};
  double den = 0.0;
  for (BondId b : kBonds) {
    const VecC &q = field[b];
    const double gb = graph.gamma(b);
    num += (4.0 * q[1] - q[2]) / gb;
    den += 1.0 / (gb * gb);
  }
  const Complex u = num / (3.0 * den);
  for (BondId b : kBonds) field[b][0] = u / graph.gamma(b);
}

void apply_outer_bc(const StarGraph &graph, SimState &state) {
  if (state.outer_bc == OuterBc::Dirichlet0) {
    zero_outer_ends(state.field);
  } else {
    const TbcPlan plan = prepare_tbc(graph, state);
    enforce_tbc(graph, state.field, plan);
  }
}

void rk4_step(const StarGraph &graph, const SolverConfig &config, SimState &state) {
  (void)config;  // stepping data lives in the state; config fixed at creation
  const double dt = state.dt;
  TbcPlan plan;
  const bool tbc = state.outer_bc == OuterBc::Tbc;
  if (tbc) plan = prepare_tbc(graph, state);

  auto enforce = [&](Field &f) {
    apply_vertex_bc(graph, f);
    if (tbc)
      enforce_tbc(graph, f, plan);
    else
      zero_outer_ends(f);
  };

  const Field &f0 = state.field;
  const Field k1 = rhs(graph, f0, state.nonlinear_scale);
  Field y = axpy(f0, k1, 0.5 * dt);
  enforce(y);
  const Field k2 = rhs(graph, y, state.nonlinear_scale);
  y = axpy(f0, k2, 0.5 * dt);
  enforce(y);
  const Field k3 = rhs(graph, y, state.nonlinear_scale);
  y = axpy(f0, k3, dt);
  enforce(y);
  const Field k4 = rhs(graph, y, state.nonlinear_scale);

  for (int s = 0; s < 4; ++s)
    state.field.bond[s] +=
        (dt / 6.0) * (k1.bond[s] + 2.0 * k2.bond[s] + 2.0 * k3.bond[s] + k4.bond[s]);
  state.field.t += dt;
  ++state.step;

  apply_vertex_bc(graph, state.field);
  if (tbc)
    finalize_tbc(graph, state, plan);
  else
    zero_outer_ends(state.field);

  if (!state.field.all_finite()) throw_nonfinite(state.field, state.step);
}

void run(const StarGraph &graph, const SolverConfig &config, const Field &ic, int record_every,
         const RecordHook &on_record, const RecordHook &on_step) {
  SimState st = make_sim_state(graph, config, ic);
  if (record_every < 1) record_every = 1;
  if (on_record) on_record(st);
  if (!(config.T > 0.0)) return;
  const long nsteps = std::lround(config.T / st.dt);
  for (long i = 1; i <= nsteps; ++i) {
    rk4_step(graph, config, st);
    if (on_step) on_step(st);
    if (on_record && (i % record_every == 0 || i == nsteps)) on_record(st);
  }
}

VertexTransparencyDiagnostic::VertexTransparencyDiagnostic(const StarGraph &graph, double dt)
    : dt_(dt) {
  (void)graph;
  states_.assign(4, OuterBoundaryState(dt));
}

VertexResiduals VertexTransparencyDiagnostic::observe(const StarGraph &graph, const Field &field) {
  const double h = graph.spacing();
  std::array<Complex, 4> t0s{}, nus{}, vs{};
  for (BondId b : kBonds) {
    auto &obs = states_[b.slot()];
    const Complex v0 = potential_at(graph, field, b, 0);
    if (!seeded_)
      obs.gauge.last_V = v0;
    else
      gauge_update(obs.gauge, v0, dt_);
    const Complex v1 = potential_at(graph, field, b, 1);
    const Complex v2 = potential_at(graph, field, b, 2);
    Complex vx = (-3.0 * v0 + 4.0 * v1 - v2) / (2.0 * h);
    if (b.coord_sign() < 0) vx = -vx;
    t0s[b.slot()] = t0_apply(obs.half, obs.gauge, vx, obs.integ, field[b][0]);
    nus[b.slot()] = obs.gauge.nu;
    vs[b.slot()] = v0;
  }
  seeded_ = true;

  auto spread = [](const std::array<Complex, 4> &a) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) m = std::max(m, std::abs(a[i] - a[j]));
    return m;
  };

  VertexResiduals r;
  r.nu_spread = spread(nus);
  r.potential_spread = spread(vs);
  std::array<Complex, 4> weighted{};
  for (BondId b : kBonds)
    weighted[b.slot()] = std::sqrt(graph.beta(b)) * t0s[b.slot()];
  r.t0_continuity = spread(weighted);
  const Complex balance =
      t0s[BondId(-1).slot()] / std::sqrt(graph.beta(BondId(-1))) +
      t0s[BondId(1).slot()] / std::sqrt(graph.beta(BondId(1))) -
      t0s[BondId(-2).slot()] / std::sqrt(graph.beta(BondId(-2))) -
      t0s[BondId(2).slot()] / std::sqrt(graph.beta(BondId(2)));
  r.t0_flux_balance = std::abs(balance);

  max_.nu_spread = std::max(max_.nu_spread, r.nu_spread);
  max_.potential_spread = std::max(max_.potential_spread, r.potential_spread);
  max_.t0_continuity = std::max(max_.t0_continuity, r.t0_continuity);
  max_.t0_flux_balance = std::max(max_.t0_flux_balance, r.t0_flux_balance);
  return r;
}

// --------------------------------------------------------------------- line

LineSim::LineSim(const LineConfig &config, const VecC &ic) : cfg_(config) {
  if (cfg_.points < 5) throw std::invalid_argument("LineSim: need at least 5 points");
  if (ic.size() != cfg_.points) throw std::invalid_argument("LineSim: bad initial data size");
  if (!(cfg_.c_dt > 0.0) || cfg_.c_dt > kMaxCdt + 1e-12)
    throw std::invalid_argument("LineSim: c_dt must lie in (0, 0.7]");
  h_ = 2.0 * cfg_.length / (cfg_.points - 1);
  dt_ = cfg_.dt > 0.0 ? cfg_.dt : cfg_.c_dt * h_ * h_;
  q_ = ic;
  if (cfg_.outer_bc == OuterBc::Tbc)
    ends_.assign(2, OuterBoundaryState(dt_));
  else
    q_[0] = q_[q_.size() - 1] = Complex(0.0);
}

VecR LineSim::grid() const {
  VecR x(cfg_.points);
  for (int i = 0; i < cfg_.points; ++i) x[i] = -cfg_.length + h_ * i;
  return x;
}

VecC LineSim::rhs_interior() const {
  const int m = cfg_.points;
  VecC d = VecC::Zero(m);
  const double inv_h2 = 1.0 / (h_ * h_);
  for (int i = 1; i + 1 < m; ++i) {
    Complex val = (q_[i + 1] - 2.0 * q_[i] + q_[i - 1]) * inv_h2;
    if (cfg_.nonlinear_scale != 0.0)
      val += cfg_.nonlinear_scale * cfg_.coupling * q_[i] * q_[i] * std::conj(q_[m - 1 - i]);
    d[i] = kImag * val;
  }
  return d;
}

void LineSim::enforce_bc(VecC &q, const std::optional<std::array<EndCoeffs, 2>> &tbc) const {
  const int e = cfg_.points - 1;
  if (!tbc) {
    q[0] = q[e] = Complex(0.0);
    return;
  }
  const double a = 1.5 / h_;
  const Complex bl = (4.0 * q[1] - q[2]) / (2.0 * h_);
  q[0] = (bl + (*tbc)[0].d0) / (a - (*tbc)[0].c0);
  const Complex br = (4.0 * q[e - 1] - q[e - 2]) / (2.0 * h_);
  q[e] = (br + (*tbc)[1].d0) / (a - (*tbc)[1].c0);
}

void LineSim::step_once() {
  const int m = cfg_.points;
  const int e = m - 1;
  const double dt = dt_;
  const bool tbc = cfg_.outer_bc == OuterBc::Tbc;

  std::optional<std::array<EndCoeffs, 2>> plan;
  if (tbc) {
    auto pot = [&](int i) {
      return cfg_.nonlinear_scale * cfg_.coupling * q_[i] * std::conj(q_[m - 1 - i]);
    };
    const double sq = std::sqrt(dt);
    plan.emplace();
    for (int side = 0; side < 2; ++side) {
      auto &obs = ends_[side];
      Complex vx;
      if (side == 0)
        vx = (-3.0 * pot(0) + 4.0 * pot(1) - pot(2)) / (2.0 * h_);
      else
        vx = (3.0 * pot(e) - 4.0 * pot(e - 1) + pot(e - 2)) / (2.0 * h_);
      const Complex phase = std::exp(kImag * obs.gauge.nu);
      const Complex tail = obs.half.pending_half_tail();
      const Complex integ_const = obs.integ.integral_value() + 0.5 * dt * obs.integ.last();
      (*plan)[side].c0 = -kRoot / sq - 0.125 * kImag * vx * dt;
      (*plan)[side].d0 = -kRoot * phase * tail / sq - 0.25 * kImag * vx * phase * integ_const;
    }
  }

  auto rhs_of = [&](const VecC &q) {
    VecC d = VecC::Zero(m);
    const double inv_h2 = 1.0 / (h_ * h_);
    const int n = m - 2;
    VecC lap = (q.segment(2, n) - 2.0 * q.segment(1, n) + q.segment(0, n)) * inv_h2;
    if (cfg_.nonlinear_scale != 0.0) {
      const double c = cfg_.nonlinear_scale * cfg_.coupling;
      lap.array() +=
          c * q.segment(1, n).array().square() * q.segment(1, n).reverse().array().conjugate();
    }
    d.segment(1, n) = kImag * lap;
    return d;
  };

  const VecC k1 = rhs_of(q_);
  VecC y = q_ + 0.5 * dt * k1;
  enforce_bc(y, plan);
  const VecC k2 = rhs_of(y);
  y = q_ + 0.5 * dt * k2;
  enforce_bc(y, plan);
  const VecC k3 = rhs_of(y);
  y = q_ + dt * k3;
  enforce_bc(y, plan);
  const VecC k4 = rhs_of(y);
  q_ += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  t_ += dt;
  enforce_bc(q_, plan);

  if (tbc) {
    auto pot = [&](int i) {
      return cfg_.nonlinear_scale * cfg_.coupling * q_[i] * std::conj(q_[m - 1 - i]);
    };
    for (int side = 0; side < 2; ++side) {
      auto &obs = ends_[side];
      gauge_update(obs.gauge, pot(side == 0 ? 0 : e), dt);
      const Complex s = q_[side == 0 ? 0 : e] * std::exp(-kImag * obs.gauge.nu);
      obs.half.append(s);
      obs.integ.append(s);
      obs.integ.accumulate_integral();
    }
  }

  if (!q_.allFinite()) {
    std::ostringstream os;
    os << "LineSim: non-finite value at t = " << t_;
    throw SolverError(os.str());
  }
}

void LineSim::advance(double T) {
  const long n = std::lround(T / dt_);
  for (long i = 0; i < n; ++i) step_once();
}

} // namespace nnlsg
