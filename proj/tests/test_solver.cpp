#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nnlsg/observables.hpp"
#include "nnlsg/solver.hpp"
#include "test_util.hpp"

#include <cmath>
#include <vector>

using namespace nnlsg;

namespace {

Field zero_field(const StarGraph &g) { return Field(g.points_per_bond()); }

double max_field_diff(const Field &a, const Field &b, int stride_a = 1) {
  double worst = 0.0;
  for (int s = 0; s < 4; ++s)
    for (Eigen::Index i = 0; i * stride_a < a.bond[s].size(); ++i)
      worst = std::max(worst, std::abs(a.bond[s][i * stride_a] - b.bond[s][i]));
  return worst;
}

VecC gaussian_packet(const VecR &x, double x0, double sigma, double k0) {
  VecC q(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    q[i] = std::exp(-(x[i] - x0) * (x[i] - x0) / (2 * sigma * sigma)) *
           std::exp(kImag * k0 * x[i]);
  return q;
}

} // namespace

TEST_CASE("zero field is an exact fixed point in both boundary modes") {
  const StarGraph g = test::fig2_graph(101);
  for (OuterBc bc : {OuterBc::Dirichlet0, OuterBc::Tbc}) {
    SolverConfig cfg;
    cfg.T = 1.0;
    cfg.outer_bc = bc;
    SimState st = make_sim_state(g, cfg, zero_field(g));
    for (int k = 0; k < 5; ++k) rk4_step(g, cfg, st);
    for (int s = 0; s < 4; ++s)
      for (Eigen::Index i = 0; i < st.field.bond[s].size(); ++i)
        CHECK(st.field.bond[s][i] == Complex(0.0));
  }
}

TEST_CASE("rhs of the zero field vanishes identically") {
  const StarGraph g = test::fig2_graph(51);
  const Field d = rhs(g, zero_field(g));
  for (int s = 0; s < 4; ++s)
    for (Eigen::Index i = 0; i < d.bond[s].size(); ++i) CHECK(d.bond[s][i] == Complex(0.0));
}

TEST_CASE("linear mode reproduces the free dispersion relation") {
  const double k = 2.0;
  double prev = 0.0;
  for (int lvl = 0; lvl < 2; ++lvl) {
    LineConfig lc;
    lc.length = 5.0;
    lc.points = 201 * (1 << lvl) - (1 << lvl) + 1;  // 201, 401: nested grids
    lc.nonlinear_scale = 0.0;
    const int m = lc.points;
    VecR x(m);
    const double h = 2 * lc.length / (m - 1);
    for (int i = 0; i < m; ++i) x[i] = -lc.length + i * h;
    VecC q(m);
    for (int i = 0; i < m; ++i) q[i] = std::exp(kImag * k * x[i]);
    LineSim sim(lc, q);
    const VecC d = sim.rhs_interior();
    // skip the end-adjacent points; their stencil sees the boundary value
    double worst = 0.0;
    for (int i = 2; i + 2 < m; ++i)
      worst = std::max(worst, std::abs(d[i] - kImag * (-k * k) * q[i]));
    if (lvl > 0) CHECK(prev / worst >= 3.5);
    prev = worst;
  }
}

TEST_CASE("rhs matches the analytic time derivative of the mirror-pair state") {
  // The launch/companion pair on all four bonds solves the bulk equations
  // exactly, so rhs must converge to its centered time derivative.
  const TravelingSolitonParams launch = place_envelope(test::experiment_soliton(), 1.5);
  const TravelingSolitonParams partner = mirror_partner_params(launch);
  const double t0 = 0.25;

  double prev = 0.0;
  for (int lvl = 0; lvl < 3; ++lvl) {
    const int m = 151 * (1 << lvl) - (1 << lvl) + 1;
    const StarGraph g(6.0, m, BondWeights{{6.0, 6.0, 2.0, 2.0}});
    const Field f = test::pair_field(g, launch, t0);
    const Field d = rhs(g, f);
    const double dt = 1e-6;
    double worst = 0.0;
    for (BondId b : kBonds) {
      const TravelingSolitonParams &pb = b.value() > 0 ? launch : partner;
      for (int i = 1; i + 1 < m; ++i) {
        const double x = g.coord(b, i);
        const Complex ddt = (graph_soliton(pb, g.beta(b), x, t0 + dt) -
                             graph_soliton(pb, g.beta(b), x, t0 - dt)) /
                            (2 * dt);
        worst = std::max(worst, std::abs(d[b][i] - ddt));
      }
    }
    if (lvl > 0) CHECK(test::observed_order(prev, worst) >= 1.9);
    prev = worst;
  }
}

TEST_CASE("vertex enforcement is an exact fixed point for balanced data") {
  // All gammas equal; constant values near the vertex have zero one-sided
  // flux on every bond, so the enforced state must not move.
  const StarGraph g(10.0, 101, BondWeights{{2.0, 2.0, 2.0, 2.0}});
  Field f(g.points_per_bond());
  for (BondId b : kBonds)
    for (int i = 0; i < g.points_per_bond(); ++i) f[b][i] = Complex(0.8, -0.3);
  const Field before = f;
  apply_vertex_bc(g, f);
  CHECK(max_field_diff(before, f) < 1e-12);

  Field z = zero_field(g);
  apply_vertex_bc(g, z);
  for (int s = 0; s < 4; ++s) CHECK(z.bond[s][0] == Complex(0.0));
}

TEST_CASE("vertex conditions hold identically for the single-soliton state") {
  // One line soliton scaled onto all four bonds: weighted continuity is
  // exact by construction and the flux balance reduces to the first sum
  // rule, checked with analytic spatial derivatives.
  const TravelingSolitonParams p = place_envelope(test::experiment_soliton(), 1.0);
  const StarGraph g = test::fig2_graph(301, 10.0);
  for (double t : {0.0, 0.37, 1.0}) {
    std::array<Complex, 4> traces{};
    for (BondId b : kBonds)
      traces[b.slot()] = g.gamma(b) * graph_soliton(p, g.beta(b), 0.0, t);
    for (int s = 1; s < 4; ++s) CHECK(std::abs(traces[s] - traces[0]) < 1e-12);

    Complex lhs{}, rhs_{};
    for (BondId b : kBonds) {
      const Complex dq = std::sqrt(2.0 / g.beta(b)) * traveling_soliton_dx(p, 0.0, t);
      if (b.value() > 0)
        lhs += dq / g.gamma(b);
      else
        rhs_ += dq / g.gamma(b);
    }
    CHECK(std::abs(lhs - rhs_) < 1e-10);
  }
}

TEST_CASE("vertex enforcement moves the single-soliton state by O(h^2)") {
  // The one-soliton state satisfies the vertex conditions exactly for
  // integrable weights, so only the one-sided stencil error remains.
  const TravelingSolitonParams p = place_envelope(test::experiment_soliton(), 2.0);
  double prev = 0.0;
  for (int lvl = 0; lvl < 2; ++lvl) {
    const int m = 151 * (1 << lvl) - (1 << lvl) + 1;
    const StarGraph g(6.0, m, BondWeights{{6.0, 6.0, 2.0, 2.0}});
    Field f = test::single_soliton_field(g, p, 0.4);  // envelope at the vertex
    const Field before = f;
    apply_vertex_bc(g, f);
    double worst = 0.0;
    for (int s = 0; s < 4; ++s) worst = std::max(worst, std::abs(f.bond[s][0] - before.bond[s][0]));
    if (lvl > 0) CHECK(prev / worst >= 3.0);
    prev = worst;
  }
}

TEST_CASE("vertex enforcement leaves an exactly balanced discrete flux") {
  auto rng = test::rng(77);
  for (const BondWeights &beta :
       {BondWeights{{3.0, 3.0, 3.0, 3.0}}, BondWeights{{6.0, 6.0, 2.0, 2.0}}}) {
    const StarGraph g(10.0, 101, beta);
    Field f(g.points_per_bond());
    double scale = 0.0;
    for (BondId b : kBonds)
      for (int i = 0; i < g.points_per_bond(); ++i) {
        f[b][i] = Complex(test::uniform(rng, -1, 1), test::uniform(rng, -1, 1));
        scale = std::max(scale, std::abs(f[b][i]));
      }
    apply_vertex_bc(g, f);

    const double inv2h = 1.0 / (2.0 * g.spacing());
    Complex lhs{}, rhs_{};
    for (BondId b : kBonds) {
      const VecC &q = f[b];
      const Complex flux = b.coord_sign() > 0
                               ? (-3.0 * q[0] + 4.0 * q[1] - q[2]) * inv2h
                               : (3.0 * q[0] - 4.0 * q[1] + q[2]) * inv2h;
      (b.value() > 0 ? lhs : rhs_) += flux / g.gamma(b);
    }
    CHECK(std::abs(lhs - rhs_) <= 1e-12 * scale / g.spacing());

    // weighted continuity is exact as well
    const Complex u = f[BondId(-1)][0] * g.gamma(BondId(-1));
    for (BondId b : kBonds) CHECK(std::abs(f[b][0] * g.gamma(b) - u) < 1e-13);
  }
}

TEST_CASE("outer closure application on the star graph") {
  const StarGraph g = test::fig2_graph(201);
  for (OuterBc bc : {OuterBc::Dirichlet0, OuterBc::Tbc}) {
    SolverConfig cfg;
    cfg.T = 1.0;
    cfg.outer_bc = bc;
    SimState st = make_sim_state(g, cfg, zero_field(g));
    apply_outer_bc(g, st);
    for (int s = 0; s < 4; ++s) CHECK(st.field.bond[s][st.field.bond[s].size() - 1] == Complex(0.0));
  }

  // with support far from the outer ends the two closures coincide
  Field bump(g.points_per_bond());
  for (BondId b : kBonds)
    for (int i = 0; i < 60; ++i) {
      const double s = std::sin(M_PI * i / 60.0);
      bump[b][i] = Complex(0.3, -0.2) * s * s;
    }
  SolverConfig cfg_d, cfg_t;
  cfg_d.T = cfg_t.T = 1.0;
  cfg_t.outer_bc = OuterBc::Tbc;
  SimState sd = make_sim_state(g, cfg_d, bump);
  SimState stb = make_sim_state(g, cfg_t, bump);
  for (int k = 0; k < 20; ++k) {
    rk4_step(g, cfg_d, sd);
    rk4_step(g, cfg_t, stb);
  }
  double worst = 0.0;
  for (int s = 0; s < 4; ++s)
    worst = std::max(worst, (sd.field.bond[s] - stb.field.bond[s]).cwiseAbs().maxCoeff());
  CHECK(worst < 1e-10);
}

TEST_CASE("time integrator reaches fourth order on a line soliton") {
  // Standing soliton: an exact solution of the one-line equation. Fixed
  // grid, halved steps; the pairwise differences isolate the time error.
  const StandingSolitonParams p(0.55, 0.45, 0.3, -0.2);
  LineConfig lc;
  lc.length = 12.0;
  lc.points = 301;
  const double h = 2 * lc.length / (lc.points - 1);
  VecC ic(lc.points);
  for (int i = 0; i < lc.points; ++i) ic[i] = standing_soliton(p, -lc.length + i * h, 0.0);

  const double T = 0.1;
  std::vector<VecC> finals;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    LineConfig run = lc;
    run.dt = dt;
    LineSim sim(run, ic);
    sim.advance(T);
    finals.push_back(sim.values());
  }
  const double d1 = (finals[0] - finals[1]).cwiseAbs().maxCoeff();
  const double d2 = (finals[1] - finals[2]).cwiseAbs().maxCoeff();
  CHECK(test::observed_order(d1, d2) >= 3.5);
}

TEST_CASE("norm drift per step is tiny before the vertex interaction") {
  const StarGraph g = test::fig2_graph(601);
  SolverConfig cfg;
  cfg.T = 2.0;
  const Field ic = initial_condition(g, test::experiment_soliton(), 5.0);
  SimState st = make_sim_state(g, cfg, ic);
  Complex n_prev = make_record(g, st.field).total_norm;
  const double scale = std::abs(n_prev);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    rk4_step(g, cfg, st);
    const Complex n = make_record(g, st.field).total_norm;
    worst = std::max(worst, std::abs(n - n_prev));
    n_prev = n;
  }
  CHECK(worst / scale < 1e-9);
}

TEST_CASE("grid refinement self-convergence of the transmission run") {
  const TravelingSolitonParams p = test::experiment_soliton();
  const double T = 1.0;
  std::vector<Field> finals;
  for (int m : {151, 301, 601}) {
    const StarGraph g = test::fig2_graph(m);
    SolverConfig cfg;
    cfg.T = T;
    SimState st = make_sim_state(g, cfg, initial_condition(g, p, 5.0));
    const long n = std::lround(T / st.dt);
    for (long k = 0; k < n; ++k) rk4_step(g, cfg, st);
    finals.push_back(st.field);
  }
  const double d1 = max_field_diff(finals[1], finals[0], 2);
  const double d2 = max_field_diff(finals[2], finals[1], 2);
  CHECK(test::observed_order(d1, d2) >= 1.9);
}

TEST_CASE("both outer closures agree while the field is interior") {
  LineConfig lc;
  lc.length = 5.0;
  lc.points = 201;
  lc.nonlinear_scale = 0.0;
  LineSim base(lc, VecC::Zero(lc.points));
  VecC ic = gaussian_packet(base.grid(), 0.0, 0.4, 2.0);
  ic[0] = ic[lc.points - 1] = Complex(0.0);

  LineConfig tb = lc;
  tb.outer_bc = OuterBc::Tbc;
  LineSim sim_d(lc, ic), sim_t(tb, ic);
  sim_d.advance(0.05);
  sim_t.advance(0.05);
  CHECK((sim_d.values() - sim_t.values()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("transparent closure lets a free packet leave the domain") {
  // Reference: the same packet on a 4x larger zero-boundary domain,
  // restricted to the small window.
  const double L = 5.0, h = 0.025, T = 1.5;
  LineConfig small;
  small.length = L;
  small.points = int(std::lround(2 * L / h)) + 1;
  small.nonlinear_scale = 0.0;
  small.outer_bc = OuterBc::Tbc;
  LineConfig big;
  big.length = 4 * L;
  big.points = int(std::lround(8 * L / h)) + 1;
  big.nonlinear_scale = 0.0;

  LineSim probe(small, VecC::Zero(small.points));
  const VecC ic_small = gaussian_packet(probe.grid(), -1.0, 0.6, 3.0);
  LineSim big_probe(big, VecC::Zero(big.points));
  const VecC ic_big = gaussian_packet(big_probe.grid(), -1.0, 0.6, 3.0);

  LineConfig small_dt = small;
  small_dt.dt = 0.5 * h * h;
  LineConfig big_dt = big;
  big_dt.dt = 0.5 * h * h;
  LineSim sim(small_dt, ic_small), ref(big_dt, ic_big);
  sim.advance(T);
  ref.advance(T);

  const int off = int(std::lround((4 * L - L) / h));
  double err2 = 0.0, norm2 = 0.0;
  for (int i = 0; i < small.points; ++i) {
    err2 += std::norm(sim.values()[i] - ref.values()[off + i]) * h;
    norm2 += std::norm(ic_small[i]) * h;
  }
  CHECK(err2 / norm2 < 1e-3);
}

TEST_CASE("vertex operator residuals separate transparent from broken weights") {
  auto run_diag = [](const BondWeights &beta, int m) {
    const StarGraph g(15.0, m, beta);
    SolverConfig cfg;
    cfg.T = 2.0;
    VertexTransparencyDiagnostic diag(g, resolve_dt(g, cfg));
    run(
        g, cfg, initial_condition(g, test::experiment_soliton(), 5.0), 1 << 30,
        [](const SimState &) {},
        [&](const SimState &st) { diag.observe(g, st.field); });
    return diag.maxima();
  };

  const VertexResiduals fig4_coarse = run_diag(BondWeights{{2.0, 6.0, 2.0, 6.0}}, 301);
  const VertexResiduals fig5_coarse = run_diag(BondWeights{{2.0, 2.0, 0.5, 1.0}}, 301);
  CHECK(fig5_coarse.t0_flux_balance >= 10.0 * fig4_coarse.t0_flux_balance);

  const VertexResiduals fig4_fine = run_diag(BondWeights{{2.0, 6.0, 2.0, 6.0}}, 601);
  CHECK(fig4_fine.t0_flux_balance < fig4_coarse.t0_flux_balance);
  CHECK(fig4_fine.t0_continuity < fig4_coarse.t0_continuity);
}

TEST_CASE("instability is reported with the offending location") {
  const StarGraph g = test::fig2_graph(201);
  SolverConfig cfg;
  cfg.T = 2.0;
  cfg.dt = 20.0 * g.spacing() * g.spacing();  // far beyond the stability bound
  SimState st = make_sim_state(g, cfg, initial_condition(g, test::experiment_soliton(), 5.0));
  bool thrown = false;
  try {
    for (int k = 0; k < 2000; ++k) rk4_step(g, cfg, st);
  } catch (const SolverError &e) {
    thrown = true;
    CHECK(std::string(e.what()).find("bond") != std::string::npos);
  }
  CHECK(thrown);
}

TEST_CASE("run with T = 0 produces exactly the initial record") {
  const StarGraph g = test::fig2_graph(101);
  SolverConfig cfg;
  cfg.T = 0.0;
  int records = 0;
  run(g, cfg, initial_condition(g, test::experiment_soliton(), 5.0), 10,
      [&](const SimState &) { ++records; });
  CHECK(records == 1);
}

TEST_CASE("config validation") {
  const StarGraph g = test::fig2_graph(101);
  SolverConfig cfg;
  cfg.c_dt = 0.9;
  CHECK_THROWS_AS(resolve_dt(g, cfg), std::invalid_argument);
}
