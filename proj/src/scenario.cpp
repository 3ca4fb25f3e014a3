#include "nnlsg/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nnlsg {

namespace {

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real_strict(const std::string &text, const char *what) {
  const std::string t = trim(text);
  if (t.empty()) throw ScenarioError(std::string("empty ") + what);
  char *end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw ScenarioError(std::string("cannot parse ") + what + " '" + t + "'");
  return v;
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

SweepAxis parse_axis(const std::string &text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ScenarioError("sweep axis must be lo:hi:count, got '" + text + "'");
  SweepAxis ax;
  ax.lo = parse_real_strict(parts[0], "sweep axis low end");
  ax.hi = parse_real_strict(parts[1], "sweep axis high end");
  ax.count = int(parse_real_strict(parts[2], "sweep axis count"));
  if (ax.count < 2) throw ScenarioError("sweep axis needs at least 2 points");
  return ax;
}

} // namespace

Complex parse_complex(const std::string &text) {
  std::string t = trim(text);
  if (t.empty()) throw ScenarioError("empty complex literal");
  if (t.back() != 'i' && t.back() != 'I') return Complex(parse_real_strict(t, "number"), 0.0);

  t.pop_back();  // strip the trailing i
  // Split at the last +/- that is not a leading sign and not an exponent sign.
  std::size_t cut = std::string::npos;
  for (std::size_t p = t.size(); p-- > 1;) {
    if ((t[p] == '+' || t[p] == '-') && t[p - 1] != 'e' && t[p - 1] != 'E') {
      cut = p;
      break;
    }
  }
  if (cut == std::string::npos) {
    std::string imag = trim(t);
    if (imag.empty() || imag == "+") return Complex(0.0, 1.0);
    if (imag == "-") return Complex(0.0, -1.0);
    return Complex(0.0, parse_real_strict(imag, "imaginary part"));
  }
  const std::string re = trim(t.substr(0, cut));
  std::string im = trim(t.substr(cut));
  if (im == "+") im = "1";
  if (im == "-") im = "-1";
  return Complex(parse_real_strict(re, "real part"), parse_real_strict(im, "imaginary part"));
}

Scenario parse_scenario(std::istream &in, const std::string &origin) {
  Scenario sc;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string &msg) {
    std::ostringstream os;
    os << origin << ":" << lineno << ": " << msg;
    throw ScenarioError(os.str());
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // section headers are cosmetic
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) fail("empty value for key '" + key + "'");

    try {
      if (key == "name") sc.name = val;
      else if (key == "L") sc.length = parse_real_strict(val, key.c_str());
      else if (key == "M") sc.points = int(parse_real_strict(val, key.c_str()));
      else if (key == "beta_m1") sc.beta[BondId(-1)] = parse_real_strict(val, key.c_str());
      else if (key == "beta_p1") sc.beta[BondId(1)] = parse_real_strict(val, key.c_str());
      else if (key == "beta_m2") sc.beta[BondId(-2)] = parse_real_strict(val, key.c_str());
      else if (key == "beta_p2") sc.beta[BondId(2)] = parse_real_strict(val, key.c_str());
      else if (key == "c_dt") sc.c_dt = parse_real_strict(val, key.c_str());
      else if (key == "T") sc.T = parse_real_strict(val, key.c_str());
      else if (key == "outer_bc") {
        if (val == "dirichlet0") sc.outer_bc = OuterBc::Dirichlet0;
        else if (val == "tbc") sc.outer_bc = OuterBc::Tbc;
        else fail("outer_bc must be dirichlet0 or tbc, got '" + val + "'");
      }
      else if (key == "alpha1") sc.alpha1 = parse_complex(val);
      else if (key == "beta1_sol") sc.beta1_sol = parse_complex(val);
      else if (key == "k1") sc.k1 = parse_complex(val);
      else if (key == "kbar1") sc.kbar1 = parse_complex(val);
      else if (key == "offset") sc.offset = parse_real_strict(val, key.c_str());
      else if (key == "tail_tol") sc.tail_tol = parse_real_strict(val, key.c_str());
      else if (key == "snapshot_times") {
        sc.snapshot_times.clear();
        for (const auto &part : split(val, ','))
          sc.snapshot_times.push_back(parse_real_strict(part, "snapshot time"));
      }
      else if (key == "record_every") sc.record_every = int(parse_real_strict(val, key.c_str()));
      else if (key == "sweep_beta_m1") sc.sweep_beta_m1 = parse_axis(val);
      else if (key == "sweep_beta_p1") sc.sweep_beta_p1 = parse_axis(val);
      else if (key == "sweep_M") sc.sweep_points = int(parse_real_strict(val, key.c_str()));
      else fail("unknown key '" + key + "'");
    } catch (const ScenarioError &e) {
      std::string msg = e.what();
      if (msg.rfind(origin, 0) == 0) throw;  // already located
      fail(msg);
    }
  }

  if (sc.points < 3) throw ScenarioError(origin + ": M must be at least 3");
  for (double t : sc.snapshot_times)
    if (t < 0.0 || t > sc.T + 1e-12)
      throw ScenarioError(origin + ": snapshot time " + std::to_string(t) + " outside [0, T]");
  if (sc.record_every < 1) throw ScenarioError(origin + ": record_every must be >= 1");
  return sc;
}

Scenario load_scenario(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

std::vector<std::string> builtin_names() { return {"fig2", "fig4", "fig5", "sweep"}; }

Scenario builtin_scenario(const std::string &name) {
  Scenario sc;
  sc.name = name;
  sc.snapshot_times = {0.0, 0.9, 1.1, 2.0};
  if (name == "fig2") {
    sc.beta = BondWeights{{6.0, 6.0, 2.0, 2.0}};
  } else if (name == "fig4") {
    sc.beta = BondWeights{{2.0, 6.0, 2.0, 6.0}};
  } else if (name == "fig5") {
    sc.beta = BondWeights{{2.0, 2.0, 0.5, 1.0}};
  } else if (name == "sweep") {
    sc.beta = BondWeights{{2.0, 2.0, 2.0, 2.0}};
    sc.sweep_beta_m1 = SweepAxis{0.5, 4.0, 21};
    sc.sweep_beta_p1 = SweepAxis{0.5, 4.0, 21};
    sc.sweep_points = 201;
    sc.snapshot_times.clear();
  } else {
    throw ScenarioError("unknown built-in scenario '" + name + "'");
  }
  return sc;
}

Scenario resolve_scenario(const std::string &path_or_name) {
  if (std::filesystem::exists(path_or_name)) return load_scenario(path_or_name);
  const auto names = builtin_names();
  if (std::find(names.begin(), names.end(), path_or_name) != names.end())
    return builtin_scenario(path_or_name);
  throw ScenarioError("'" + path_or_name + "' is neither a scenario file nor a built-in name");
}

} // namespace nnlsg
