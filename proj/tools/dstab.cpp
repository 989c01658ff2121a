// Command-line front end: simulation, decrease/conservation verification,
// stability probes, flatness screening, and one-command reproduction of the
// three reference experiments.
//
// Exit codes: 0 = pass, 1 = counterexample found, 2 = configuration error,
// 3 = runtime error.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dstab/catalog.hpp"
#include "dstab/csv.hpp"
#include "dstab/euler.hpp"
#include "dstab/flatness.hpp"
#include "dstab/lyapunov.hpp"
#include "dstab/regions.hpp"
#include "dstab/stability.hpp"
#include "dstab/svg.hpp"

namespace {

using namespace dstab;

StepSchedule parse_schedule(const std::string& s) {
  const auto colon = s.find(':');
  const std::string kind = s.substr(0, colon);
  std::map<std::string, std::string> kv;
  if (colon != std::string::npos) kv = detail::parse_params(s.substr(colon + 1));
  auto get = [&kv](const std::string& k, double d) {
    auto it = kv.find(k);
    return it == kv.end() ? d : std::stod(it->second);
  };
  if (kind == "pow" || kind == "power")
    return make_power_schedule(get("c", 1.0), get("p", 6.0), get("cap", get("c", 1.0)));
  if (kind == "const" || kind == "constant")
    return make_constant_schedule(get("c", 0.01), get("cap", kInf));
  throw std::invalid_argument("unknown schedule kind: " + kind);
}

Selector parse_selector(const std::string& s, const ProblemSpec& problem) {
  if (s == "first") return Selector::First();
  if (s == "random") return Selector::Random();
  if (s.rfind("index:", 0) == 0) return Selector::Index(std::stoi(s.substr(6)));
  if (s == "adversarial") {
    ScalarFn obj = problem.g_list.empty() ? problem.f : problem.g_list[0].value;
    return Selector::Adversarial(obj);
  }
  throw std::invalid_argument("unknown selector: " + s);
}

Field pick_field(const ProblemSpec& problem, const std::string& kind, bool descent) {
  if (kind == "normalized")
    return descent ? problem.descent_normalized() : problem.field_normalized;
  if (kind == "bouligand")
    return descent ? problem.descent_bouligand() : problem.field_bouligand;
  throw std::invalid_argument("unknown field kind: " + kind);
}

void emit_or_print(const std::string& path, const std::string& content) {
  if (path.empty())
    std::cout << content;
  else
    write_file(path, content);
}

void write_witness(const std::string& path, const ProbeReport& rep, std::size_t dim) {
  if (rep.witness && !path.empty()) write_file(path, trajectory_csv(*rep.witness, dim));
}

Box plot_window(const Trajectory& traj, const Box& bound) {
  Box w;
  w.lo = traj.points[0];
  w.hi = traj.points[0];
  for (const auto& p : traj.points)
    for (std::size_t i = 0; i < p.size(); ++i) {
      w.lo[i] = std::min(w.lo[i], p[i]);
      w.hi[i] = std::max(w.hi[i], p[i]);
    }
  for (std::size_t i = 0; i < w.lo.size(); ++i) {
    const double pad = std::max(0.3, 0.2 * (w.hi[i] - w.lo[i]));
    w.lo[i] = std::max(w.lo[i] - pad, bound.lo[i]);
    w.hi[i] = std::min(w.hi[i] + pad, bound.hi[i]);
  }
  return w;
}

void write_svg_plot(const std::string& path, const ProblemSpec& problem, const Trajectory& traj,
                    int g_log_mode) {
  if (problem.dim != 2 || path.empty()) return;
  SvgPlot plot(plot_window(traj, problem.bounded_box));
  plot.add_contours(problem.f, "#1f77b4", 8, 1);
  if (!problem.g_list.empty()) {
    auto g = problem.g_list[0].value;
    plot.add_contours(g, "#2ca02c", 8, g_log_mode);
  }
  plot.add_trajectory(traj);
  write_file(path, plot.render());
}

struct ReproduceSpec {
  std::string problem;
  Vec x0;
  StepSchedule schedule;
  std::int64_t steps;
};

ReproduceSpec figure_spec(const std::string& fig) {
  if (fig == "fig1") return {"flat4", {2.5, 0.01}, make_power_schedule(1.0, 6.0, 1.0), 100000};
  if (fig == "fig2")
    return {"parabola", {0.9, 0.7}, make_power_schedule(0.1, 6.0, 0.1), 100000};
  if (fig == "fig3")
    return {"ellipse:a=2,b=1", {0.8, 0.2}, make_power_schedule(1.0, 6.0, 1.0), 100000};
  throw std::invalid_argument("unknown figure: " + fig);
}

int run_reproduce(const std::string& fig, const std::string& out_dir, std::uint64_t seed) {
  const ReproduceSpec spec = figure_spec(fig);
  ProblemSpec problem = get_problem(spec.problem);
  Trajectory traj = simulate(problem, problem.descent_normalized(), spec.schedule, spec.x0,
                             spec.steps, Selector::First(), seed);
  const std::string base = out_dir.empty() ? fig : out_dir + "/" + fig;
  write_file(base + ".csv", trajectory_csv(traj, problem.dim));
  write_svg_plot(base + ".svg", problem, traj, -1);
  if (traj.error) {
    std::cerr << "simulation truncated at k=" << traj.error->k << ": " << traj.error->what << "\n";
    return 3;
  }
  std::cout << fig << ": K=" << traj.ks.back() << " f=" << fmt_double(traj.f_values.back())
            << " g=" << fmt_double(traj.g_values.back()) << "\n";
  return 0;
}

std::vector<double> parse_grid(const std::string& s) { return detail::parse_vec(s); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for Euler discretizations of set-valued dynamics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "plain-text config: key = value lines with [section] headers");

  std::uint64_t seed = 42;
  app.add_option("--seed", seed, "global RNG seed")->envname("DSTAB_SEED");

  // ---- simulate ------------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "run the Euler engine on a catalog problem");
  std::string sim_problem = "parabola", sim_field = "normalized", sim_x0, sim_sched = "pow:c=1,p=6";
  std::string sim_selector = "first", sim_csv = "trajectory.csv", sim_svg;
  std::string sim_glog = "auto";
  std::int64_t sim_steps = 100000, sim_thin = 1;
  bool sim_dump = false;
  sim->add_option("--problem", sim_problem, "problem id, e.g. ellipse:a=2,b=1");
  sim->add_option("--field", sim_field, "normalized | bouligand");
  sim->add_option("--x0", sim_x0, "initial point, comma separated")->required();
  sim->add_option("--schedule", sim_sched, "pow:c=..,p=..,cap=.. | const:c=..");
  sim->add_option("--steps", sim_steps, "number of Euler steps");
  sim->add_option("--selector", sim_selector, "first | random | index:N | adversarial");
  sim->add_option("--thin", sim_thin, "store every m-th state");
  sim->add_option("--csv", sim_csv, "trajectory CSV path");
  sim->add_option("--svg", sim_svg, "optional contour + trajectory SVG path");
  sim->add_option("--g-contours", sim_glog, "auto | log | linear");
  sim->add_flag("--dump-config", sim_dump, "print the resolved config and exit");

  // ---- verify --------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "decrease and conservation verifiers");
  verify->require_subcommand(1);
  std::string v_problem = "parabola", v_field = "normalized", v_csv, v_witness = "witness.csv";
  std::string v_at, v_x0;
  double v_p = 2.0, v_omega = -1.0, v_alpha_bar = 0.1, v_r = 0.05;
  double v_ell = 0.04, v_kappa = -1.0, v_zeta = -1.0, v_T = 1.0, v_alpha = 1e-3;
  int v_q = 2, v_asteps = 8;
  std::int64_t v_n = 200;
  for (const char* name : {"dl", "pdl", "pqdl", "first", "second", "conserved", "zeta", "descent"}) {
    auto* sub = verify->add_subcommand(name);
    sub->add_option("--problem", v_problem);
    sub->add_option("--field", v_field);
    sub->add_option("--csv", v_csv);
    sub->add_option("--witness", v_witness);
    sub->add_option("--n", v_n);
    sub->add_option("--a-steps", v_asteps);
    sub->add_option("--alpha-bar", v_alpha_bar);
    sub->add_option("--p", v_p);
    sub->add_option("--q", v_q);
    sub->add_option("--omega", v_omega);
    sub->add_option("--at", v_at);
    sub->add_option("--x0", v_x0);
    sub->add_option("--r", v_r);
    sub->add_option("--ell", v_ell);
    sub->add_option("--kappa", v_kappa);
    sub->add_option("--zeta", v_zeta);
    sub->add_option("--T", v_T);
    sub->add_option("--alpha", v_alpha);
  }

  // ---- probe ---------------------------------------------------------------
  auto* probe = app.add_subcommand("probe", "stability, attractor, and geometry probes");
  probe->require_subcommand(1);
  std::string p_problem = "parabola", p_field = "normalized", p_csv, p_witness = "witness.csv";
  std::string p_at, p_x0, p_target = "minima";
  std::string p_delta_grid = "0.005,0.002", p_alpha_grid = "0.02,0.01,0.005";
  std::string p_radii = "0.02,0.04,0.08";
  double p_epsilon = 0.1, p_p = 2.0, p_c = 1.0, p_cap = 1.0, p_eps_final = 0.2;
  double p_rho = 0.1, p_alpha_bar = 0.05, p_r = 0.1;
  std::int64_t p_n_init = 4, p_steps = 30000, p_n = 200, p_n_per_radius = 50;
  int p_asteps = 8;
  for (const char* name :
       {"point", "set", "asymptotic", "attractor", "subreg", "verdier", "distbound"}) {
    auto* sub = probe->add_subcommand(name);
    sub->add_option("--problem", p_problem);
    sub->add_option("--field", p_field);
    sub->add_option("--csv", p_csv);
    sub->add_option("--witness", p_witness);
    sub->add_option("--at", p_at);
    sub->add_option("--x0", p_x0);
    sub->add_option("--target", p_target);
    sub->add_option("--epsilon", p_epsilon);
    sub->add_option("--delta-grid", p_delta_grid);
    sub->add_option("--alpha-grid", p_alpha_grid);
    sub->add_option("--p", p_p);
    sub->add_option("--c", p_c);
    sub->add_option("--cap", p_cap);
    sub->add_option("--eps-final", p_eps_final);
    sub->add_option("--n-init", p_n_init);
    sub->add_option("--steps", p_steps);
    sub->add_option("--n", p_n);
    sub->add_option("--radii", p_radii);
    sub->add_option("--n-per-radius", p_n_per_radius);
    sub->add_option("--rho", p_rho);
    sub->add_option("--alpha-bar", p_alpha_bar);
    sub->add_option("--a-steps", p_asteps);
    sub->add_option("--r", p_r);
  }

  // ---- flatness ------------------------------------------------------------
  auto* flat = app.add_subcommand("flatness", "oscillation profiles and flat-minimum screening");
  flat->require_subcommand(1);
  std::string f_problem = "parabola", f_at, f_at2, f_radii = "0.001,0.002,0.005,0.01", f_csv;
  int f_grid = 24, f_draws = 200;
  std::int64_t f_samples = 41;
  for (const char* name : {"profile", "compare", "screen"}) {
    auto* sub = flat->add_subcommand(name);
    sub->add_option("--problem", f_problem);
    sub->add_option("--at", f_at);
    sub->add_option("--at2", f_at2);
    sub->add_option("--radii", f_radii);
    sub->add_option("--grid", f_grid);
    sub->add_option("--draws", f_draws);
    sub->add_option("--samples", f_samples);
    sub->add_option("--csv", f_csv);
  }

  // ---- reproduce -----------------------------------------------------------
  auto* repro = app.add_subcommand("reproduce", "rebuild the reference figure experiments");
  repro->require_subcommand(1);
  std::string r_outdir;
  for (const char* name : {"fig1", "fig2", "fig3"})
    repro->add_subcommand(name)->add_option("--out-dir", r_outdir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      ProblemSpec problem = get_problem(sim_problem);
      if (sim_dump) {
        std::cout << app.config_to_str(true, false);
        return 0;
      }
      const Vec x0 = detail::parse_vec(sim_x0);
      Trajectory traj = simulate(problem, pick_field(problem, sim_field, true),
                                 parse_schedule(sim_sched), x0, sim_steps,
                                 parse_selector(sim_selector, problem), seed, sim_thin);
      write_file(sim_csv, trajectory_csv(traj, problem.dim));
      const int g_log = sim_glog == "auto" ? -1 : (sim_glog == "log" ? 1 : 0);
      write_svg_plot(sim_svg, problem, traj, g_log);
      if (traj.error) {
        std::cerr << "simulation truncated at k=" << traj.error->k << ": " << traj.error->what
                  << "\n";
        return 3;
      }
      return 0;
    }

    if (verify->parsed()) {
      ProblemSpec problem = get_problem(v_problem);
      const std::string sub = verify->get_subcommands().front()->get_name();
      const Field F = pick_field(problem, v_field, true);
      const RegionSampler region = decrease_region(problem);
      const ScalarFn g = problem.g_list.empty() ? problem.f : problem.g_list[0].value;
      std::string csv = certificate_csv_header();
      int code = 0;

      if (sub == "dl") {
        auto cert = verify_dL(g, F, region, v_alpha_bar, v_n, v_asteps, seed, problem.name);
        csv += certificate_csv_row("dl", cert);
        write_witness(v_witness, cert.report, problem.dim);
        code = cert.passed() ? 0 : 1;
      } else if (sub == "pdl") {
        double omega = v_omega, alpha_bar = v_alpha_bar;
        if (omega < 0.0) {
          auto cal = calibrate_p_dL(g, F, region, v_p, v_alpha_bar, v_n, v_asteps, seed);
          if (!cal.ok) throw std::runtime_error("calibration failed to find a decrease constant");
          omega = cal.omega;
          alpha_bar = cal.alpha_bar;
        }
        auto cert = verify_p_dL(g, F, region, v_p, omega, alpha_bar, v_n, v_asteps, seed,
                                problem.name);
        csv += certificate_csv_row("pdl", cert);
        write_witness(v_witness, cert.report, problem.dim);
        code = cert.passed() ? 0 : 1;
      } else if (sub == "pqdl") {
        double omega = v_omega, alpha_bar = v_alpha_bar;
        if (omega < 0.0) {
          auto cal = calibrate_pq_dL(g, F, region, v_p, v_q, v_alpha_bar, v_n, seed);
          if (!cal.ok) throw std::runtime_error("calibration failed to find a decrease constant");
          omega = cal.omega;
          alpha_bar = cal.alpha_bar;
        }
        auto cert =
            verify_pq_dL(g, F, region, v_p, v_q, omega, alpha_bar, v_n, seed, problem.name);
        csv += certificate_csv_row("pqdl", cert);
        write_witness(v_witness, cert.report, problem.dim);
        code = cert.passed() ? 0 : 1;
      } else if (sub == "first") {
        if (v_at.empty()) throw std::invalid_argument("verify first: --at required");
        const Vec at = detail::parse_vec(v_at);
        auto res = check_first_order(problem.g_list.at(0), F, at, seed);
        DecreaseCertificate cert;
        cert.kind = DecreaseCertificate::Kind::firstorder;
        cert.region_name = problem.name;
        cert.report.worst_margin = res.s;
        if (!res.certified) cert.report.flag_counterexample(step_witness(at, at, 0, 0, 0));
        csv += certificate_csv_row("first", cert);
        code = res.certified ? 0 : 1;
      } else if (sub == "second") {
        if (v_at.empty()) throw std::invalid_argument("verify second: --at required");
        const Vec at = detail::parse_vec(v_at);
        auto res = check_second_order(problem.g_list.at(0), F, at, v_r, v_n, seed);
        DecreaseCertificate cert;
        cert.kind = DecreaseCertificate::Kind::secondorder;
        cert.region_name = problem.name;
        cert.report.worst_margin = res.s2;
        if (!res.certified) cert.report.flag_counterexample(step_witness(at, at, 0, 0, 0));
        csv += certificate_csv_row("second", cert);
        code = res.certified ? 0 : 1;
      } else if (sub == "conserved") {
        bool all_ok = true;
        for (std::size_t i = 0; i < problem.conserved.size(); ++i) {
          auto rep = check_conserved(problem.conserved[i], problem.field_normalized,
                                     conserved_region(problem, i), v_n, mix_seed(seed, i));
          csv += certificate_csv_row("conserved:" + problem.conserved[i].name, problem.name, rep);
          all_ok = all_ok && rep.passed();
        }
        if (problem.conserved.empty())
          csv += certificate_csv_row("conserved:none", problem.name, ProbeReport{});
        code = all_ok ? 0 : 1;
      } else if (sub == "zeta") {
        SetDescriptor X = v_at.empty()
                              ? (problem.attractor ? *problem.attractor : problem.minima)
                              : point_set(detail::parse_vec(v_at));
        auto est = estimate_zeta(problem, v_ell, X, v_r > 0 ? v_r : 1.0, v_n, seed);
        std::cout << "zeta = " << fmt_double(est.zeta) << " accepted = " << est.accepted
                  << (est.degenerate ? " (degenerate: annulus touches a critical point)" : "")
                  << "\n";
        code = 0;
      } else if (sub == "descent") {
        if (v_x0.empty()) throw std::invalid_argument("verify descent: --x0 required");
        const Vec x0 = detail::parse_vec(v_x0);
        double kappa = v_kappa, zeta = v_zeta;
        if (zeta < 0.0)
          zeta = estimate_zeta(problem, v_ell, point_set(x0), 1.0, 200, seed).zeta;
        if (kappa < 0.0) {
          // admissible angle constant for normalized descent: 1/sup|grad f|
          Rng rng(seed);
          double sup = 0.0;
          for (int i = 0; i < 4096; ++i) {
            const Vec x = rng.in_ball(x0, 1.0);
            if (problem.f(x) <= 1.5 * v_ell) sup = std::max(sup, norm(problem.grad_f(x)));
          }
          kappa = sup > 0.0 ? 1.0 / sup : 1.0;
        }
        const std::int64_t K = static_cast<std::int64_t>(std::ceil(v_T / v_alpha)) + 1;
        Trajectory traj = simulate(problem, F, make_constant_schedule(v_alpha), x0, K,
                                   Selector::First(), seed);
        auto rep = check_descent_window(traj, v_ell, kappa, zeta, v_T);
        csv += certificate_csv_row("descent", problem.name, rep);
        code = rep.passed() ? 0 : 1;
      }
      emit_or_print(v_csv, csv);
      return code;
    }

    if (probe->parsed()) {
      ProblemSpec problem = get_problem(p_problem);
      const std::string sub = probe->get_subcommands().front()->get_name();
      const Field F = pick_field(problem, p_field, true);
      std::string csv = probe_csv_header();
      int code = 0;

      auto target_set = [&]() -> SetDescriptor {
        if (!p_at.empty()) return point_set(detail::parse_vec(p_at));
        if (p_target == "attractor") {
          if (!problem.attractor) throw std::invalid_argument("problem has no attractor descriptor");
          return *problem.attractor;
        }
        return problem.minima;
      };

      if (sub == "point") {
        if (p_at.empty()) throw std::invalid_argument("probe point: --at required");
        StabilityProbeConfig cfg;
        cfg.epsilon = p_epsilon;
        cfg.delta_grid = parse_grid(p_delta_grid);
        cfg.alpha_grid = parse_grid(p_alpha_grid);
        cfg.power_p = p_p;
        cfg.n_init = p_n_init;
        cfg.K = p_steps;
        cfg.seed = seed;
        auto rep = probe_point_stability(problem, F, detail::parse_vec(p_at), cfg);
        csv += probe_csv_row("point", p_at, rep);
        write_witness(p_witness, rep, problem.dim);
        code = rep.passed() ? 0 : 1;
      } else if (sub == "set") {
        StabilityProbeConfig cfg;
        cfg.epsilon = p_epsilon;
        cfg.delta_grid = parse_grid(p_delta_grid);
        cfg.alpha_grid = parse_grid(p_alpha_grid);
        cfg.power_p = p_p;
        cfg.n_init = p_n_init;
        cfg.K = p_steps;
        cfg.seed = seed;
        auto rep = probe_set_stability(problem, F, target_set(), cfg);
        csv += probe_csv_row("set", p_target, rep);
        write_witness(p_witness, rep, problem.dim);
        code = rep.passed() ? 0 : 1;
      } else if (sub == "asymptotic") {
        SetDescriptor X = target_set();
        std::vector<Vec> starts;
        if (!p_x0.empty()) {
          starts.push_back(detail::parse_vec(p_x0));
        } else {
          auto basin = attractor_basin(problem);
          Rng rng(seed);
          for (std::int64_t i = 0; i < p_n_init; ++i) starts.push_back(basin(rng));
        }
        auto out = probe_asymptotic(problem, F, X, p_p, p_c, starts, p_steps, p_eps_final, p_cap,
                                    Selector::First(), seed);
        csv += probe_csv_row("asymptotic", p_target, out.report);
        write_witness(p_witness, out.report, problem.dim);
        code = out.report.passed() ? 0 : 1;
      } else if (sub == "attractor") {
        if (!problem.attractor) throw std::invalid_argument("problem has no attractor descriptor");
        auto out = probe_attractor(problem, F, *problem.attractor, p_p, attractor_basin(problem),
                                   p_epsilon, p_n_init, p_steps, p_c, p_cap, seed);
        csv += probe_csv_row("attractor", problem.attractor->name, out.report);
        write_witness(p_witness, out.report, problem.dim);
        code = out.report.passed() ? 0 : 1;
      } else if (sub == "subreg") {
        const Vec at = p_at.empty() ? Vec(problem.dim, 0.0) : detail::parse_vec(p_at);
        auto est = estimate_subregularity(problem, problem.minima, at, parse_grid(p_radii),
                                          p_n_per_radius, seed);
        std::cout << "tau = " << fmt_double(est.tau)
                  << " fit_quality = " << fmt_double(est.fit_quality) << " used = " << est.used
                  << " excluded = " << est.excluded << "\n";
        ProbeReport rep;
        rep.worst_margin = est.tau;
        rep.stats.trials = est.used;
        csv += probe_csv_row("subreg", "minima", rep);
        code = 0;
      } else if (sub == "verdier") {
        const Vec at = p_at.empty() ? Vec(problem.dim, 0.0) : detail::parse_vec(p_at);
        auto res = check_verdier(problem, problem.minima, at, p_r, p_n, seed);
        std::cout << "max_ratio = " << fmt_double(res.max_ratio)
                  << " slope = " << fmt_double(res.slope) << " skipped = " << res.skipped << "\n";
        csv += probe_csv_row("verdier", "minima", res.report);
        code = res.report.passed() ? 0 : 1;
      } else if (sub == "distbound") {
        const Vec at = p_at.empty() ? Vec(problem.dim, 0.0) : detail::parse_vec(p_at);
        auto rep = check_distance_lower_bound(problem, problem.minima, at, p_alpha_bar, p_rho, p_n,
                                              p_asteps, seed);
        csv += probe_csv_row("distbound", "minima", rep);
        write_witness(p_witness, rep, problem.dim);
        code = rep.passed() ? 0 : 1;
      }
      emit_or_print(p_csv, csv);
      return code;
    }

    if (flat->parsed()) {
      ProblemSpec problem = get_problem(f_problem);
      const std::string sub = flat->get_subcommands().front()->get_name();
      const std::vector<double> radii = parse_grid(f_radii);
      if (sub == "profile") {
        if (f_at.empty()) throw std::invalid_argument("flatness profile: --at required");
        auto prof = flatness_profile(problem.f, detail::parse_vec(f_at), radii, f_grid, f_draws,
                                     seed);
        emit_or_print(f_csv, profile_csv(prof));
        return 0;
      }
      if (sub == "compare") {
        if (f_at.empty() || f_at2.empty())
          throw std::invalid_argument("flatness compare: --at and --at2 required");
        auto order = compare_flatness(problem.f, detail::parse_vec(f_at),
                                      detail::parse_vec(f_at2), radii, f_grid, f_draws, seed);
        std::cout << to_string(order) << "\n";
        return 0;
      }
      auto rank = screen_flat_minima(problem, f_samples, radii, f_grid, f_draws, seed);
      emit_or_print(f_csv, ranking_csv(rank));
      return 0;
    }

    if (repro->parsed())
      return run_reproduce(repro->get_subcommands().front()->get_name(), r_outdir, seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
