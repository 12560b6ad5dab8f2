// vpblab: command-line driver for the two-species kinetic/fluid laboratory.

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <json.hpp>
#include <random>

#include "vpb/collision/linearized.hpp"
#include "vpb/collision/operator.hpp"
#include "vpb/remainder/characteristics.hpp"
#include "vpb/remainder/nu_hat.hpp"
#include "vpb/remainder/support.hpp"
#include "vpb/sim/sweep.hpp"
#include "vpb/util/config.hpp"
#include "vpb/util/output.hpp"
#include "vpb/util/parallel.hpp"

namespace {

constexpr const char* kVersion = "vpblab 0.1.0";

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;  // 0 -> take from config
  int threads = 0;
};

vpb::RunConfig load(const CommonArgs& args) {
  vpb::RunConfig cfg;
  if (!args.config_path.empty()) cfg = vpb::parse_config(args.config_path);
  if (args.seed != 0) cfg.seed = args.seed;
  if (args.threads != 0) cfg.threads = args.threads;
  if (cfg.threads > 0) vpb::set_threads(cfg.threads);
  vpb::ensure_directory(args.out_dir);
  // echo the effective configuration for reproducibility
  vpb::write_text_file(args.out_dir + "/effective_config.cfg", cfg.emit());
  return cfg;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void write_manifest(const CommonArgs& args, const vpb::RunConfig& cfg, const std::string& command,
                    double wall) {
  vpb::Manifest m;
  m.config_hash = cfg.hash();
  m.command = command;
  m.simd_backend = vpb::simd::active().name;
  m.threads = vpb::threads();
  m.wall_seconds = wall;
  m.version = kVersion;
  m.write(args.out_dir + "/manifest.json");
}

// deterministic uniform draw independent of the standard library version
double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = double(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

vpb::VFieldPair random_positive_pair(std::mt19937_64& rng, const vpb::VelocityGrid& vg,
                                     const vpb::SpeciesPair& sp) {
  // smooth positive bumps: Maxwellian-like envelopes with random drifts
  vpb::VFieldPair f(vg.size());
  for (int s = 0; s < 2; ++s) {
    const double n = uniform(rng, 0.5, 1.5);
    const double th = uniform(rng, 0.6, 1.4);
    vpb::Vec3 u{uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4), uniform(rng, -0.4, 0.4)};
    const double m = sp.mass(s);
    for (int iv = 0; iv < vg.size(); ++iv)
      f[s][iv] = vpb::maxwellian_value(n, m, u, th, vg.node(iv)) *
                 (1.0 + 0.3 * std::sin(3.0 * vg.node(iv)[0]));
  }
  return f;
}

int cmd_collision_check(const CommonArgs& args) {
  Timer timer;
  vpb::RunConfig cfg = load(args);
  vpb::VelocityGrid vg(cfg.velocity_extent(), cfg.v_points);
  vpb::AngularGrid ag(cfg.angular);
  vpb::CollisionOperator cop(vg, ag, cfg.kernel, cfg.species, cfg.interp_order);

  std::mt19937_64 rng(cfg.seed);
  vpb::CsvWriter csv(args.out_dir + "/collision_check.csv",
                     {"sample", "res_mass_A", "res_mass_B", "res_mom1", "res_mom2", "res_mom3",
                      "res_energy", "l1_scale", "entropy_production"});
  bool ok = true;
  const int samples = 20;
  double worst_rel = 0.0;
  for (int i = 0; i < samples; ++i) {
    vpb::VFieldPair F = random_positive_pair(rng, vg, cfg.species);
    vpb::VFieldPair CF = cop.apply(F);
    auto res = cop.invariant_residual_of(CF);
    const double scale = cop.l1_scale(CF);
    const double prod = cop.entropy_production(F);
    csv.row({double(i), res[0], res[1], res[2], res[3], res[4], res[5], scale, prod});
    for (double r : res) worst_rel = std::max(worst_rel, std::abs(r) / scale);
    if (prod > 1e-6 * scale) ok = false;
  }
  // calibrated quadrature tolerance for the default grids
  const double tol_quad = 5e-2;
  if (worst_rel > tol_quad) ok = false;

  std::cout << (ok ? "PASS" : "FAIL") << " collision-check: worst invariant residual "
            << worst_rel << " (tol " << tol_quad << ")\n";
  write_manifest(args, cfg, "collision-check", timer.seconds());
  return ok ? 0 : 1;
}

int cmd_euler_poisson(const CommonArgs& args) {
  Timer timer;
  vpb::RunConfig cfg = load(args);
  vpb::EulerPoissonSolver solver(cfg.ep);
  vpb::EPState init = vpb::perturbed_background(cfg.ep, cfg.perturbation);
  auto history = solver.run(init, 0.0, 1);
  auto cons = vpb::conservation_diagnostics(history, cfg.ep);

  vpb::CsvWriter csv(args.out_dir + "/euler_poisson.csv",
                     {"t", "min_nA", "max_nA", "min_nB", "max_nB", "min_theta", "max_theta",
                      "min_u1", "max_u1", "mass_A_drift", "mass_B_drift", "momentum_drift",
                      "energy_drift"});
  bool ok = true;
  for (size_t i = 0; i < history.size(); ++i) {
    const vpb::FluidState& fs = history[i].fs;
    auto mm = [&](const std::vector<double>& f) {
      double lo = f[0], hi = f[0];
      for (double v : f) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      return std::pair<double, double>(lo, hi);
    };
    auto [lnA, hnA] = mm(fs.n_A);
    auto [lnB, hnB] = mm(fs.n_B);
    auto [lth, hth] = mm(fs.theta);
    auto [lu, hu] = mm(fs.u1);
    csv.row({history[i].t, lnA, hnA, lnB, hnB, lth, hth, lu, hu,
             cons[i].mass_A - cons[0].mass_A, cons[i].mass_B - cons[0].mass_B,
             cons[i].momentum[0] - cons[0].momentum[0], cons[i].energy - cons[0].energy});
  }
  const double mass_drift = std::abs(cons.back().mass_A - cons.front().mass_A) +
                            std::abs(cons.back().mass_B - cons.front().mass_B);
  if (mass_drift > 1e-8 * cfg.ep.t_end * cfg.ep.n_bar_1 * cfg.ep.L_x) ok = false;
  std::cout << (ok ? "PASS" : "FAIL") << " euler-poisson: species mass drift " << mass_drift
            << " over t=" << cfg.ep.t_end << "\n";
  write_manifest(args, cfg, "euler-poisson", timer.seconds());
  return ok ? 0 : 1;
}

int cmd_hilbert(const CommonArgs& args) {
  Timer timer;
  vpb::RunConfig cfg = load(args);
  vpb::VelocityGrid vg(cfg.velocity_extent(), cfg.v_points);
  vpb::AngularGrid ag(cfg.angular);
  vpb::KineticSetup ks{cfg.species, cfg.kernel, vg, ag, cfg.interp_order};
  vpb::OrderOnePipeline pipeline(cfg.ep, ks, cfg.hilbert);
  vpb::EPState init = vpb::perturbed_background(cfg.ep, cfg.perturbation);
  vpb::OrderOneResult res = pipeline.run(init);

  vpb::CsvWriter csv(args.out_dir + "/hilbert_order1.csv",
                     {"t", "max_n1A", "max_n1B", "max_u1", "max_theta1", "max_phi1"});
  for (size_t i = 0; i < res.times.size(); ++i) {
    auto mx = [&](const std::vector<double>& f) {
      double m = 0.0;
      for (double v : f) m = std::max(m, std::abs(v));
      return m;
    };
    const vpb::ExpansionTerm& T = res.terms[i];
    csv.row({res.times[i], mx(T.n_A), mx(T.n_B), mx(T.u1), mx(T.theta), mx(T.phi)});
  }

  bool ok = res.b0_min_eig > 0.0 && res.micro1_reproj < 1e-8;
  double worst = 0.0;
  for (int ti = 1; ti + 1 < int(res.times.size()); ++ti) {
    vpb::DistributionPair rbar1 = pipeline.rbar1_field(res, ti);
    auto sres = pipeline.rbar1_solvability(res, ti, rbar1);
    for (double r : sres) worst = std::max(worst, std::abs(r));
  }
  std::cout << (ok ? "PASS" : "FAIL") << " hilbert: micro re-projection " << res.micro1_reproj
            << ", min eig B0 " << res.b0_min_eig << ", worst order-1 solvability residual "
            << worst << "\n";
  write_manifest(args, cfg, "hilbert", timer.seconds());
  return ok ? 0 : 1;
}

int cmd_characteristics(const CommonArgs& args) {
  Timer timer;
  vpb::RunConfig cfg = load(args);

  // a static single-mode field on the configured domain
  vpb::PhiField phi;
  phi.L_x = cfg.L_x;
  phi.times = {0.0};
  phi.grad_phi.resize(1);
  phi.grad_phi[0].resize(cfg.cells);
  for (int i = 0; i < cfg.cells; ++i)
    phi.grad_phi[0][i] = 0.3 * std::sin(2.0 * M_PI * i / cfg.cells);

  vpb::CsvWriter csv(args.out_dir + "/characteristics.csv", {"tau", "x", "v1", "v2", "v3"});
  const vpb::Vec3 v0{0.7, -0.2, 0.1};
  vpb::Trajectory tr =
      vpb::integrate_characteristics(phi, 1.0, 1.3, v0, cfg.species, 0, 0.0, 1e-3);
  for (const auto& s : tr.samples) csv.row({s.tau, s.x, s.v[0], s.v[1], s.v[2]});

  // back-and-forth inversion error
  const auto& end = tr.samples.back();
  vpb::Trajectory back =
      vpb::integrate_characteristics(phi, end.tau, end.x, end.v, cfg.species, 0, 1.0, 1e-3);
  const auto& b = back.samples.back();
  const double err = std::abs(b.x - 1.3) + std::abs(b.v[0] - v0[0]);
  const bool ok = err < 1e-8;
  std::cout << (ok ? "PASS" : "FAIL") << " characteristics: back-and-forth error " << err << "\n";
  write_manifest(args, cfg, "characteristics", timer.seconds());
  return ok ? 0 : 1;
}

int cmd_validity_table(const CommonArgs& args, const std::vector<int>& k_list, int gamma_points,
                       double epsilon) {
  Timer timer;
  vpb::RunConfig cfg = load(args);
  vpb::CsvWriter csv(args.out_dir + "/validity_table.csv", {"gamma", "k", "y", "T"});
  const double g_lo = -2.9, g_hi = 1.0;
  for (int k : k_list)
    for (int i = 0; i < gamma_points; ++i) {
      const double g = g_lo + (g_hi - g_lo) * i / (gamma_points - 1);
      vpb::ValidityTime vt = vpb::validity_time(g, k, epsilon);
      csv.row({g, double(k), vt.y, vt.T});
    }
  std::cout << "PASS validity-table: " << k_list.size() * gamma_points << " rows\n";
  write_manifest(args, cfg, "validity-table", timer.seconds());
  return 0;
}

int cmd_sweep(const CommonArgs& args) {
  Timer timer;
  vpb::RunConfig cfg = load(args);
  vpb::SweepResult res = vpb::epsilon_sweep(cfg.sweep_config());

  vpb::CsvWriter csv(args.out_dir + "/sweep.csv",
                     {"epsilon", "t", "l2_remainder", "linf_weighted_remainder", "mass_drift_A",
                      "mass_drift_B", "energy_drift"});
  for (const auto& r : res.rows)
    csv.row({r.epsilon, r.t, r.l2_remainder, r.linf_weighted, r.mass_drift_A, r.mass_drift_B,
             r.energy_drift});

  nlohmann::json j;
  j["slope"] = res.fit_r0.slope;
  j["intercept"] = res.fit_r0.intercept;
  j["residual"] = res.fit_r0.residual;
  j["stderr_slope"] = res.fit_r0.stderr_slope;
  j["slope_k1"] = res.fit_r1.slope;
  j["intercept_k1"] = res.fit_r1.intercept;
  j["residual_k1"] = res.fit_r1.residual;
  j["monotone"] = res.monotone;
  {
    nlohmann::json je = nlohmann::json::array();
    for (size_t i = 0; i < cfg.eps_list.size(); ++i) {
      nlohmann::json row;
      row["epsilon"] = cfg.eps_list[i];
      row["sup_l2_vs_F0"] = res.sup_r0[i];
      row["sup_l2_vs_F0_eps_F1"] = res.sup_r1[i];
      je.push_back(row);
    }
    j["norms"] = je;
  }
  vpb::write_text_file(args.out_dir + "/slope.json", j.dump(2) + "\n");

  const bool ok = res.fit_r0.slope > 0.8 && res.fit_r0.slope < 1.2;
  std::cout << (ok ? "PASS" : "FAIL") << " sweep: slope " << res.fit_r0.slope
            << " (vs F0), slope " << res.fit_r1.slope << " (vs F0 + eps F1)\n";
  if (!res.monotone) std::cout << "note: sup norms are not monotone across the epsilon list\n";
  write_manifest(args, cfg, "sweep", timer.seconds());
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vpblab: two-species Vlasov-Poisson-Boltzmann laboratory"};
  app.require_subcommand(1);

  CommonArgs common;
  app.add_option("--config", common.config_path, "configuration file (flat key = value)");
  app.add_option("--out", common.out_dir, "output directory");
  app.add_option("--seed", common.seed, "override run.seed");
  app.add_option("--threads", common.threads, "override run.threads");

  auto* c1 = app.add_subcommand("collision-check", "collision operator property suite");
  auto* c2 = app.add_subcommand("euler-poisson", "two-fluid Euler-Poisson run");
  auto* c3 = app.add_subcommand("hilbert", "order-1 Hilbert expansion run");
  auto* c4 = app.add_subcommand("characteristics", "characteristic-curve checks");
  auto* c5 = app.add_subcommand("validity-table", "validity-time exponent table");
  auto* c6 = app.add_subcommand("sweep", "epsilon convergence sweep");

  std::vector<int> k_list{6, 8, 10};
  int gamma_points = 9;
  double table_eps = 0.1;
  c5->add_option("--k", k_list, "expansion orders");
  c5->add_option("--gamma-points", gamma_points, "gamma grid size");
  c5->add_option("--epsilon", table_eps, "epsilon for the T column");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c1->parsed()) return cmd_collision_check(common);
    if (c2->parsed()) return cmd_euler_poisson(common);
    if (c3->parsed()) return cmd_hilbert(common);
    if (c4->parsed()) return cmd_characteristics(common);
    if (c5->parsed()) return cmd_validity_table(common, k_list, gamma_points, table_eps);
    if (c6->parsed()) return cmd_sweep(common);
  } catch (const std::exception& e) {
    nlohmann::json j;
    j["error"] = e.what();
    std::cerr << j.dump() << "\n";
    return 2;
  }
  return 2;
}
