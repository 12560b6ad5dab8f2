#include "vpb/util/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vpb {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct KeyTable {
  std::map<std::string, std::string> kv;
  std::map<std::string, int> line_of;
  std::vector<std::string> errors;
  std::vector<std::string> used;

  bool has(const std::string& k) const { return kv.count(k) > 0; }

  double num(const std::string& k, double dflt) {
    used.push_back(k);
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    try {
      size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("trailing junk");
      return v;
    } catch (...) {
      errors.push_back("line " + std::to_string(line_of[k]) + ": key '" + k +
                       "' has a non-numeric value '" + it->second + "'");
      return dflt;
    }
  }
  long integer(const std::string& k, long dflt) {
    const double v = num(k, double(dflt));
    if (v != std::floor(v)) {
      errors.push_back("key '" + k + "' must be an integer");
      return dflt;
    }
    return long(v);
  }
  std::vector<double> list(const std::string& k, const std::vector<double>& dflt) {
    used.push_back(k);
    auto it = kv.find(k);
    if (it == kv.end()) return dflt;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      try {
        out.push_back(std::stod(item));
      } catch (...) {
        errors.push_back("key '" + k + "': bad list element '" + item + "'");
      }
    }
    return out;
  }
};

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  KeyTable t;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      t.errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) {
      t.errors.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }
    if (t.kv.count(key))
      t.errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    t.kv[key] = val;
    t.line_of[key] = lineno;
  }

  RunConfig c;
  c.species.m_A = t.num("species.m_A", 1.0);
  c.species.m_B = t.num("species.m_B", 1.0);
  c.species.e_A = t.num("species.e_A", 1.0);
  c.species.e_B = t.num("species.e_B", 1.0);
  c.species.sigma_A = t.num("species.sigma_A", 1.0);
  c.species.sigma_B = t.num("species.sigma_B", 1.0);

  c.kernel.gamma = t.num("kernel.gamma", 1.0);
  c.kernel.C_phi[0][0] = t.num("kernel.C_phi_AA", 1.0);
  c.kernel.C_phi[0][1] = c.kernel.C_phi[1][0] = t.num("kernel.C_phi_AB", 1.0);
  c.kernel.C_phi[1][1] = t.num("kernel.C_phi_BB", 1.0);
  c.kernel.c_b = t.num("kernel.C_b", 1.0);
  c.kernel.b_exponent = t.num("kernel.b_exponent", 1.0);

  c.cells = int(t.integer("grid.cells", 16));
  c.L_x = t.num("grid.L_x", 2.0 * M_PI);
  c.v_points = int(t.integer("grid.v_points", 9));
  c.v_extent = t.num("grid.v_extent", 0.0);
  c.angular = int(t.integer("grid.angular", 26));
  c.interp_order = int(t.integer("grid.interp_order", 2));

  c.ep.sp = c.species;
  c.ep.n_bar_1 = t.num("ep.n_bar_1", 1.0);
  c.ep.C_p = t.num("ep.C_p", 1.0);
  c.ep.c1 = t.num("ep.c1", 0.5);
  c.ep.c2 = t.num("ep.c2", 0.5);
  c.ep.cfl = t.num("ep.cfl", 0.4);
  c.ep.t_end = t.num("ep.t_end", 1.0);
  c.ep.L_x = c.L_x;
  c.ep.cells = c.cells;
  c.ep.blowup_threshold = t.num("ep.blowup_threshold", 100.0);

  c.expansion_k = int(t.integer("expansion.k", 6));
  c.k_terms = int(t.integer("expansion.k_terms", 1));
  c.hilbert.source_samples = int(t.integer("expansion.source_samples", 9));
  c.hilbert.outputs = int(t.integer("expansion.outputs", 5));
  c.hilbert.dt = t.num("expansion.dt", 0.0);
  c.hilbert.solvability_tol = t.num("expansion.solvability_tol", 1e-3);

  c.weight.gamma = c.kernel.gamma;
  c.weight.l = int(t.integer("weight.l", 7));
  c.weight.kappa_0 = t.num("weight.kappa_0", 1e-3);
  c.weight.k = c.expansion_k;

  c.sim.epsilon = t.num("sim.epsilon", 0.1);
  c.sim.t_end = t.num("sim.t_end", 0.5);
  c.sim.outputs = int(t.integer("sim.outputs", 6));
  c.sim.sp = c.species;
  c.sim.kernel = c.kernel;
  c.sim.L_x = c.L_x;
  c.sim.cells = c.cells;
  c.sim.v_extent = c.v_extent;
  c.sim.v_points = c.v_points;
  c.sim.angular = c.angular;
  c.sim.interp_order = c.interp_order;
  c.sim.dt = t.num("sim.dt", 0.0);
  c.sim.cfl = t.num("sim.cfl", 0.5);
  c.sim.subcycle_safety = t.num("sim.subcycle_safety", 0.2);
  c.sim.neg_tol = t.num("sim.neg_tol", 1e-6);
  c.sim.collisions = t.integer("sim.collisions", 1) != 0;
  c.sim.field = t.integer("sim.field", 1) != 0;
  c.sim.well_balanced = t.integer("sim.well_balanced", 1) != 0;
  c.sim.n_bar_e = c.ep.n_bar_e();

  c.eps_list = t.list("sweep.eps_list", {0.2, 0.1, 0.05, 0.025});
  c.perturbation = t.num("sweep.perturbation", 0.1);

  c.seed = std::uint64_t(t.integer("run.seed", 12345));
  c.threads = int(t.integer("run.threads", 0));

  // unknown keys
  std::vector<std::string> unknown;
  for (const auto& [k, v] : t.kv)
    if (std::find(t.used.begin(), t.used.end(), k) == t.used.end()) unknown.push_back(k);
  for (const auto& k : unknown)
    t.errors.push_back("line " + std::to_string(t.line_of[k]) + ": unknown key '" + k + "'");

  // semantic validation, all violations collected
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) t.errors.push_back(msg);
  };
  check(c.species.m_A > 0 && c.species.m_B > 0, "species masses must be positive (species.m_*)");
  check(c.species.m_A >= c.species.m_B, "convention m_A >= m_B violated (species.m_*)");
  check(c.species.sigma_A > 0 && c.species.sigma_B > 0, "diameters must be positive (species.sigma_*)");
  check(c.kernel.gamma > -3.0 && c.kernel.gamma <= 1.0, "gamma must lie in (-3, 1] (kernel.gamma)");
  check(c.kernel.c_b > 0, "Grad bound constant must be positive (kernel.C_b)");
  check(c.kernel.b_exponent >= 1.0, "angular exponent must be >= 1 (kernel.b_exponent)");
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      check(c.kernel.C_phi[a][b] > 0, "kinetic constants must be positive (kernel.C_phi_*)");
  check(c.cells >= 4, "need at least 4 spatial cells (grid.cells)");
  check(c.L_x > 0, "domain length must be positive (grid.L_x)");
  check(c.v_points >= 3 && c.v_points % 2 == 1, "v_points must be odd and >= 3 (grid.v_points)");
  check(c.v_extent >= 0, "v_extent must be >= 0 (grid.v_extent)");
  check(c.angular == 6 || c.angular == 14 || c.angular == 26,
        "angular node count must be 6, 14 or 26 (grid.angular)");
  check(c.interp_order == 1 || c.interp_order == 2, "interp_order must be 1 or 2");
  check(c.ep.n_bar_1 > 0, "background density must be positive (ep.n_bar_1)");
  check(c.ep.C_p > 0, "proportionality constant must be positive (ep.C_p)");
  check(c.ep.theta_bar() > 0, "theta_bar must be positive (ep.c1/ep.c2)");
  check(c.ep.cfl > 0 && c.ep.cfl <= 1, "CFL must lie in (0,1] (ep.cfl)");
  check(c.ep.t_end > 0, "end time must be positive (ep.t_end)");
  check(c.expansion_k >= 6, "expansion order k must be >= 6 (expansion.k)");
  check(c.k_terms >= 0 && c.k_terms <= 2, "k_terms must be 0, 1 or 2 (expansion.k_terms)");
  check(c.hilbert.outputs >= 3, "expansion.outputs must be >= 3");
  check(c.weight.l >= 7, "weight exponent l must be >= 7 (weight.l)");
  check(c.weight.kappa_0 > 0 && c.weight.kappa_0 < 1, "kappa_0 must lie in (0,1) (weight.kappa_0)");
  check(c.sim.epsilon > 0, "epsilon must be positive (sim.epsilon)");
  check(c.sim.t_end > 0, "sim end time must be positive (sim.t_end)");
  check(c.sim.outputs >= 2, "sim.outputs must be >= 2");
  check(c.sim.subcycle_safety > 0 && c.sim.subcycle_safety <= 1,
        "subcycle safety must lie in (0,1] (sim.subcycle_safety)");
  check(c.sim.neg_tol >= 0, "neg_tol must be >= 0 (sim.neg_tol)");
  check(c.eps_list.size() >= 3, "sweep needs at least 3 epsilon values (sweep.eps_list)");
  for (size_t i = 1; i < c.eps_list.size(); ++i)
    check(c.eps_list[i] < c.eps_list[i - 1], "sweep.eps_list must be strictly decreasing");
  for (double e : c.eps_list) check(e > 0 && e < 1, "sweep epsilons must lie in (0,1)");
  check(c.threads >= 0, "threads must be >= 0 (run.threads)");

  if (!t.errors.empty()) throw ConfigError(t.errors);
  return c;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

SweepConfig RunConfig::sweep_config() const {
  SweepConfig sc;
  sc.sim = sim;
  sc.ep = ep;
  sc.hilbert = hilbert;
  sc.weight = weight;
  sc.eps_list = eps_list;
  sc.k_terms = k_terms;
  sc.perturbation = perturbation;
  return sc;
}

std::string RunConfig::emit() const {
  std::ostringstream os;
  auto put = [&](const std::string& k, const std::string& v) { os << k << " = " << v << "\n"; };
  put("ep.C_p", fmt(ep.C_p));
  put("ep.blowup_threshold", fmt(ep.blowup_threshold));
  put("ep.c1", fmt(ep.c1));
  put("ep.c2", fmt(ep.c2));
  put("ep.cfl", fmt(ep.cfl));
  put("ep.n_bar_1", fmt(ep.n_bar_1));
  put("ep.t_end", fmt(ep.t_end));
  put("expansion.dt", fmt(hilbert.dt));
  put("expansion.k", std::to_string(expansion_k));
  put("expansion.k_terms", std::to_string(k_terms));
  put("expansion.outputs", std::to_string(hilbert.outputs));
  put("expansion.solvability_tol", fmt(hilbert.solvability_tol));
  put("expansion.source_samples", std::to_string(hilbert.source_samples));
  put("grid.L_x", fmt(L_x));
  put("grid.angular", std::to_string(angular));
  put("grid.cells", std::to_string(cells));
  put("grid.interp_order", std::to_string(interp_order));
  put("grid.v_extent", fmt(v_extent));
  put("grid.v_points", std::to_string(v_points));
  put("kernel.C_b", fmt(kernel.c_b));
  put("kernel.C_phi_AA", fmt(kernel.C_phi[0][0]));
  put("kernel.C_phi_AB", fmt(kernel.C_phi[0][1]));
  put("kernel.C_phi_BB", fmt(kernel.C_phi[1][1]));
  put("kernel.b_exponent", fmt(kernel.b_exponent));
  put("kernel.gamma", fmt(kernel.gamma));
  put("run.seed", std::to_string(seed));
  put("run.threads", std::to_string(threads));
  put("sim.cfl", fmt(sim.cfl));
  put("sim.collisions", sim.collisions ? "1" : "0");
  put("sim.dt", fmt(sim.dt));
  put("sim.epsilon", fmt(sim.epsilon));
  put("sim.field", sim.field ? "1" : "0");
  put("sim.neg_tol", fmt(sim.neg_tol));
  put("sim.outputs", std::to_string(sim.outputs));
  put("sim.subcycle_safety", fmt(sim.subcycle_safety));
  put("sim.t_end", fmt(sim.t_end));
  put("sim.well_balanced", sim.well_balanced ? "1" : "0");
  put("species.e_A", fmt(species.e_A));
  put("species.e_B", fmt(species.e_B));
  put("species.m_A", fmt(species.m_A));
  put("species.m_B", fmt(species.m_B));
  put("species.sigma_A", fmt(species.sigma_A));
  put("species.sigma_B", fmt(species.sigma_B));
  {
    std::string l;
    for (size_t i = 0; i < eps_list.size(); ++i) l += (i ? "," : "") + fmt(eps_list[i]);
    put("sweep.eps_list", l);
  }
  put("sweep.perturbation", fmt(perturbation));
  put("weight.kappa_0", fmt(weight.kappa_0));
  put("weight.l", std::to_string(weight.l));
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  const std::string s = emit();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace vpb
