#include "nnlsg/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <limits>
#include <thread>

namespace nnlsg {

namespace fs = std::filesystem;

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string snapshot_filename(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "snapshot_t%g.csv", t);
  return buf;
}

void write_timeseries(const std::vector<ObservableRecord> &records, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,ReN_m1,ImN_m1,ReN_p1,ImN_p1,ReN_m2,ImN_m2,ReN_p2,ImN_p2,ReN,ImN,AbsN,ReE,ImE,R\n";
  for (const auto &r : records) {
    out << format_real(r.t);
    for (BondId b : kBonds)
      out << ',' << format_real(r.norm(b).real()) << ',' << format_real(r.norm(b).imag());
    out << ',' << format_real(r.total_norm.real()) << ',' << format_real(r.total_norm.imag())
        << ',' << format_real(std::abs(r.total_norm)) << ','
        << format_real(r.total_energy.real()) << ',' << format_real(r.total_energy.imag()) << ','
        << (r.reflection ? format_real(*r.reflection) : std::string("nan")) << '\n';
  }
}

void write_summary(const RunSummary &s, const Scenario &sc, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "name = " << s.name << '\n';
  out << "status = " << s.status << '\n';
  if (!s.message.empty()) out << "message = " << s.message << '\n';
  out << "T = " << format_real(sc.T) << '\n';
  out << "Nerr = " << format_real(s.norm_err) << '\n';
  out << "Nbar_re = " << format_real(s.norm_mean.real()) << '\n';
  out << "Nbar_im = " << format_real(s.norm_mean.imag()) << '\n';
  out << "Nerr_rel = "
      << format_real(std::abs(s.norm_mean) > 0.0 ? s.norm_err / std::abs(s.norm_mean)
                                                 : std::numeric_limits<double>::quiet_NaN())
      << '\n';
  out << "R_T = " << (s.reflection_T ? format_real(*s.reflection_T) : std::string("nan")) << '\n';
  out << "res_integrable = " << format_real(s.res_integrable) << '\n';
  out << "res_transparent = " << format_real(s.res_transparent) << '\n';
  out << "integrable = " << (s.integrable ? "yes" : "no") << '\n';
  out << "transparent = " << (s.transparent ? "yes" : "no") << '\n';
}

RunSummary run_impl(const Scenario &scenario, const RunOverrides &overrides,
                    const std::string &out_dir) {
  Scenario sc = scenario;
  if (overrides.resolution > 0) sc.points = overrides.resolution;

  RunSummary summary;
  summary.name = sc.name;
  auto [int_ok, int_res] = check_integrability_sum_rule(sc.beta);
  auto [tra_ok, tra_res] = check_transparency_sum_rule(sc.beta);
  summary.integrable = int_ok;
  summary.transparent = tra_ok;
  summary.res_integrable = int_res;
  summary.res_transparent = tra_res;

  const StarGraph graph = sc.make_graph();
  const SolverConfig config = sc.solver_config();
  const Field ic = initial_condition(graph, sc.soliton_params(), sc.offset, sc.tail_tol);

  const bool writing = !out_dir.empty();
  if (writing) fs::create_directories(out_dir);

  // Map requested snapshot times to the nearest step index.
  const double dt = resolve_dt(graph, config);
  const long nsteps = config.T > 0.0 ? std::lround(config.T / dt) : 0;
  std::vector<std::pair<long, double>> snaps;
  if (writing)
    for (double t : sc.snapshot_times)
      snaps.emplace_back(std::min<long>(nsteps, std::lround(t / dt)), t);

  auto emit_due_snapshots = [&](const SimState &st) {
    for (const auto &[step, t_req] : snaps)
      if (step == st.step)
        emit_snapshot(graph, st.field, out_dir + "/" + snapshot_filename(t_req));
  };

  try {
    run(
        graph, config, ic, sc.record_every,
        [&](const SimState &st) { summary.records.push_back(make_record(graph, st.field)); },
        [&](const SimState &st) { emit_due_snapshots(st); });
    // Snapshot at t = 0 fires before the first step.
    if (writing)
      for (const auto &[step, t_req] : snaps)
        if (step == 0) {
          SolverConfig cfg0 = config;
          cfg0.T = 0.0;
          SimState st0 = make_sim_state(graph, cfg0, ic);
          emit_snapshot(graph, st0.field, out_dir + "/" + snapshot_filename(t_req));
        }
  } catch (const SolverError &e) {
    summary.status = "unstable";
    summary.message = e.what();
  }

  if (summary.records.size() >= 2) {
    summary.norm_err = norm_error(summary.records, sc.T);
    summary.norm_mean = mean_norm(summary.records, sc.T);
    summary.reflection_T = summary.records.back().reflection;
  }

  if (writing) {
    write_timeseries(summary.records, out_dir + "/timeseries.csv");
    write_summary(summary, sc, out_dir + "/summary.txt");
  }
  return summary;
}

} // namespace

RunSummary run_scenario(const Scenario &scenario, const std::string &out_dir,
                        const RunOverrides &overrides) {
  if (out_dir.empty()) throw std::invalid_argument("run_scenario: empty output directory");
  return run_impl(scenario, overrides, out_dir);
}

RunSummary run_scenario_in_memory(const Scenario &scenario, const RunOverrides &overrides) {
  return run_impl(scenario, overrides, "");
}

SweepResult run_sweep(const Scenario &scenario, const std::string &out_dir, int threads) {
  if (!scenario.has_sweep())
    throw ScenarioError("scenario '" + scenario.name + "' has no sweep axes");
  const SweepAxis &am1 = scenario.sweep_beta_m1;
  const SweepAxis &ap1 = scenario.sweep_beta_p1;

  SweepResult result;
  result.rows = am1.count;
  result.cols = ap1.count;
  result.cells.resize(std::size_t(am1.count) * ap1.count);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= result.cells.size()) return;
      const int i = int(idx) / ap1.count;
      const int j = int(idx) % ap1.count;
      SweepCell cell;
      cell.beta_m1 = am1.at(i);
      cell.beta_p1 = ap1.at(j);
      Scenario csc = scenario;
      csc.points = scenario.sweep_points;
      csc.beta[BondId(-1)] = cell.beta_m1;
      csc.beta[BondId(1)] = cell.beta_p1;
      csc.snapshot_times.clear();
      try {
        const RunSummary s = run_scenario_in_memory(csc);
        cell.status = s.status;
        if (s.status == "ok") {
          cell.norm_err = s.norm_err;
          cell.reflection = s.reflection_T.value_or(std::numeric_limits<double>::quiet_NaN());
        } else {
          cell.norm_err = std::numeric_limits<double>::quiet_NaN();
          cell.reflection = std::numeric_limits<double>::quiet_NaN();
        }
        cell.res_integrable = s.res_integrable;
        cell.res_transparent = s.res_transparent;
      } catch (const std::exception &) {
        cell.status = "error";
        cell.norm_err = std::numeric_limits<double>::quiet_NaN();
        cell.reflection = std::numeric_limits<double>::quiet_NaN();
      }
      result.cells[idx] = cell;
    }
  };

  threads = std::max(1, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto &th : pool) th.join();
  }

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(out_dir + "/sweep.csv");
    if (!out) throw std::runtime_error("cannot write sweep.csv");
    out << "beta_m1,beta_p1,Nerr,R,res_integrable,res_transparent,status\n";
    for (const auto &c : result.cells)
      out << format_real(c.beta_m1) << ',' << format_real(c.beta_p1) << ','
          << format_real(c.norm_err) << ',' << format_real(c.reflection) << ','
          << format_real(c.res_integrable) << ',' << format_real(c.res_transparent) << ','
          << c.status << '\n';
  }
  return result;
}

void emit_snapshot(const StarGraph &graph, const Field &field, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write snapshot " + path);
  out << "bond,x,re,im,abs\n";
  for (BondId b : kBonds) {
    const VecC &q = field[b];
    for (int i = 0; i < graph.points_per_bond(); ++i)
      out << b.value() << ',' << format_real(graph.coord(b, i)) << ','
          << format_real(q[i].real()) << ',' << format_real(q[i].imag()) << ','
          << format_real(std::abs(q[i])) << '\n';
  }
}

Field read_snapshot(const StarGraph &graph, const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read snapshot " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty snapshot " + path);
  Field f(graph.points_per_bond());
  std::array<int, 4> fill{};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tok;
    std::getline(row, tok, ',');
    const BondId b(std::stoi(tok));
    std::getline(row, tok, ',');  // coordinate, implied by the index
    std::getline(row, tok, ',');
    const double re = std::stod(tok);
    std::getline(row, tok, ',');
    const double im = std::stod(tok);
    f[b][fill[b.slot()]++] = Complex(re, im);
  }
  for (int c : fill)
    if (c != graph.points_per_bond())
      throw std::runtime_error("snapshot " + path + " does not match the graph");
  return f;
}

} // namespace nnlsg
