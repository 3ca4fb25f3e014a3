#ifndef NNLSG_SCENARIO_HPP
#define NNLSG_SCENARIO_HPP

#include "nnlsg/graph.hpp"
#include "nnlsg/solitons.hpp"
#include "nnlsg/solver.hpp"
#include "nnlsg/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nnlsg {

/// Thrown on malformed scenario files, with line/key diagnostics.
class ScenarioError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses "a", "bi", "a+bi", "a-bi" (also bare "i", "-i") into a complex
/// number. Exponent forms like 1e-3 are allowed in either part.
Complex parse_complex(const std::string &text);

/// Uniformly spaced sweep axis, lo:hi:count with count >= 2.
struct SweepAxis {
  double lo = 0.0, hi = 0.0;
  int count = 0;

  double at(int i) const { return lo + (hi - lo) * double(i) / double(count - 1); }
};

/// One experiment description: graph + solver + soliton launch parameters,
/// plus optional sweep axes over (beta_{-1}, beta_{+1}).
struct Scenario {
  std::string name = "scenario";

  double length = 15.0;
  int points = 601;
  BondWeights beta{{2.0, 2.0, 2.0, 2.0}};

  double c_dt = 0.5;
  double T = 2.0;
  OuterBc outer_bc = OuterBc::Dirichlet0;

  Complex alpha1{1.13, 1.13};
  Complex beta1_sol{1.13, -1.13};
  Complex k1{2.5, 1.5};
  Complex kbar1{-2.5, 1.5};
  double offset = 5.0;
  double tail_tol = kDefaultTailTol;

  std::vector<double> snapshot_times;
  int record_every = 10;

  // sweep-only fields
  SweepAxis sweep_beta_m1, sweep_beta_p1;
  int sweep_points = 201;

  bool has_sweep() const { return sweep_beta_m1.count >= 2 && sweep_beta_p1.count >= 2; }

  TravelingSolitonParams soliton_params() const {
    return TravelingSolitonParams(alpha1, beta1_sol, k1, kbar1);
  }
  StarGraph make_graph() const { return StarGraph(length, points, beta); }
  SolverConfig solver_config() const {
    SolverConfig cfg;
    cfg.T = T;
    cfg.c_dt = c_dt;
    cfg.outer_bc = outer_bc;
    return cfg;
  }
};

/// Parses the flat key = value scenario format ('#' starts a comment).
Scenario parse_scenario(std::istream &in, const std::string &origin = "<stream>");
Scenario load_scenario(const std::string &path);

/// Built-in scenario names, in listing order.
std::vector<std::string> builtin_names();

/// Returns the named built-in; throws ScenarioError for unknown names.
Scenario builtin_scenario(const std::string &name);

/// Loads a file if one exists at the given path, otherwise falls back to the
/// built-in of that name.
Scenario resolve_scenario(const std::string &path_or_name);

} // namespace nnlsg

#endif
