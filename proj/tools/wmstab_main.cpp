// Command-line driver: eigenvalue scans, structural verification, the series
// shooting oracle, and nonlinear blowup runs with the least-damped-mode fit.

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wmstab/eigenmode.hpp"
#include "wmstab/eigensolver.hpp"
#include "wmstab/io.hpp"
#include "wmstab/shooting.hpp"
#include "wmstab/similarity.hpp"
#include "wmstab/structural.hpp"
#include "wmstab/wave_sim.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitConfig = 2;

struct GlobalOpts {
  std::string outdir;
  std::string precision = "double";
  int jobs = 1;
};

std::filesystem::path out_path(const GlobalOpts& g, const std::string& name) {
  std::filesystem::create_directories(g.outdir);
  return std::filesystem::path(g.outdir) / name;
}

bool parse_pair(const std::string& s, double& a, double& b) {
  return std::sscanf(s.c_str(), "%lf:%lf", &a, &b) == 2;
}

template <class T>
void print_eigen_table(const std::vector<wmstab::EigenRecord<T>>& recs) {
  std::printf("  n   lambda_n        residual   method\n");
  for (std::size_t i = 0; i < recs.size(); ++i)
    std::printf("%3zu   %-13.7f  %8.1e   %s\n", i, double(recs[i].lambda.real()),
                double(recs[i].residual), recs[i].method.c_str());
}

// scan partitioned over threads; chunks overlap one step so no cell is lost
template <class T>
wmstab::RealScanResult<T> scan_real(T lo, T hi, T step, T tol, int jobs) {
  using namespace wmstab;
  if (jobs <= 1) return find_real_eigenvalues(lo, hi, step, tol);
  std::vector<RealScanResult<T>> parts(jobs);
  std::vector<std::thread> ths;
  const T w = (hi - lo) / T(jobs);
  for (int j = 0; j < jobs; ++j) {
    const T a = lo + w * T(j);
    const T b = (j + 1 == jobs) ? hi : lo + w * T(j + 1) + step;
    ths.emplace_back([&, a, b, j] { parts[j] = find_real_eigenvalues(a, b, step, tol); });
  }
  for (auto& t : ths) t.join();
  RealScanResult<T> out;
  for (auto& p : parts) {
    out.records.insert(out.records.end(), p.records.begin(), p.records.end());
    out.unresolved.insert(out.unresolved.end(), p.unresolved.begin(), p.unresolved.end());
    out.non_converged_points.insert(out.non_converged_points.end(),
                                    p.non_converged_points.begin(),
                                    p.non_converged_points.end());
    out.cells_subdivided += p.cells_subdivided;
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const auto& x, const auto& y) { return x.lambda.real() > y.lambda.real(); });
  std::vector<EigenRecord<T>> dedup;
  for (auto& r : out.records)
    if (dedup.empty() || std::abs(dedup.back().lambda - r.lambda) > T(1e-6))
      dedup.push_back(r);
  out.records = std::move(dedup);
  return out;
}

template <class T>
int run_eigen(const GlobalOpts& g, double lo, double hi, double step, double tol,
              bool with_complex, const std::string& region, const std::string& grid) {
  using namespace wmstab;
  const auto scan = scan_real<T>(T(lo), T(hi), T(step), T(tol), g.jobs);

  print_eigen_table(scan.records);
  int bad = 0;
  for (const auto& u : scan.unresolved) {
    if (std::abs(u.final_residual) > T(1)) {
      std::printf("note: sign change through a fraction pole in [%.6g, %.6g]\n",
                  double(u.lo), double(u.hi));
    } else {
      std::printf("ERROR: bracket [%.6g, %.6g] did not converge (|f| = %.2e)\n",
                  double(u.lo), double(u.hi), double(u.final_residual));
      ++bad;
    }
  }
  for (const auto x : scan.non_converged_points)
    std::printf("note: fraction did not settle at lambda = %.6g\n", double(x));

  write_text(out_path(g, "eigenvalues.csv"), eigen_records_csv(scan.records));
  json manifest;
  manifest["command"] = "eigen";
  manifest["range"] = {lo, hi};
  manifest["step"] = step;
  manifest["tol"] = tol;
  manifest["precision"] = g.precision;
  manifest["jobs"] = g.jobs;
  manifest["records"] = eigen_records_json(scan.records);
  manifest["cells_subdivided"] = scan.cells_subdivided;

  if (with_complex) {
    double r0, r1, i0, i1;
    if (std::sscanf(region.c_str(), "%lf:%lf:%lf:%lf", &r0, &r1, &i0, &i1) != 4) {
      std::fprintf(stderr, "bad --region (want re0:re1:im0:im1)\n");
      return kExitConfig;
    }
    int nre, nim;
    if (std::sscanf(grid.c_str(), "%d:%d", &nre, &nim) != 2 || nre < 2 || nim < 2) {
      std::fprintf(stderr, "bad --grid (want nre:nim)\n");
      return kExitConfig;
    }
    const auto cscan = find_complex_eigenvalues(T(r0), T(r1), T(i0), T(i1),
                                                std::size_t(nre), std::size_t(nim));
    std::printf("complex search [%g,%g]x[%g,%g] (%dx%d seeds): %zu roots, "
                "%zu seeds fell to the real axis, %zu diverged\n",
                r0, r1, i0, i1, nre, nim, cscan.records.size(), cscan.converged_real,
                cscan.diverged);
    manifest["complex"] = {{"region", {r0, r1, i0, i1}},
                           {"grid", {nre, nim}},
                           {"records", eigen_records_json(cscan.records)},
                           {"seeds", cscan.seeds},
                           {"converged_real", cscan.converged_real},
                           {"diverged", cscan.diverged}};
    if (!cscan.records.empty()) std::printf("WARNING: complex roots found\n");
  }

  write_text(out_path(g, "eigenvalues.json"), manifest.dump(2) + "\n");
  return bad == 0 ? kExitOk : kExitNumerical;
}

template <class T>
int run_shoot(const GlobalOpts& g, double lo, double hi, double step, double tol,
              double midpoint) {
  using namespace wmstab;
  (void)midpoint;
  const auto recs = oracle_eigenvalues(T(lo), T(hi), T(step), T(tol));
  print_eigen_table(recs);
  write_text(out_path(g, "shooting.csv"), eigen_records_csv(recs));
  json manifest;
  manifest["command"] = "shoot";
  manifest["window"] = {lo, hi};
  manifest["step"] = step;
  manifest["tol"] = tol;
  manifest["precision"] = g.precision;
  manifest["records"] = eigen_records_json(recs);
  write_text(out_path(g, "shooting.json"), manifest.dump(2) + "\n");
  return kExitOk;
}

struct CheckLine {
  std::string name;
  bool pass;
  double measured;
  std::string note;
};

template <class T>
void verify_gauge(std::vector<CheckLine>& out) {
  const double r = double(wmstab::gauge_mode_residual<T>(100));
  out.push_back({"gauge-mode residual (100 samples)", r < 1e-12, r, "< 1e-12"});
  const double re = double(wmstab::gauge_mode_equation_residual_at<T>(T(1)));
  out.push_back({"gauge-mode residual at the endpoint", re < 1e-12, re, "< 1e-12"});
  const double rp = double(wmstab::gauge_mode_residual<T>(100, T(0.01)));
  out.push_back({"perturbed-mode control", rp > 1e-3, rp, "> 1e-3"});
}

template <class T>
void verify_sl(std::vector<CheckLine>& out) {
  using C = std::complex<T>;
  const auto m1 = wmstab::sl_map(C(1));
  out.push_back({"mu(1) = 1", std::abs(m1.mu - C(1)) == T(0), double(std::abs(m1.mu - C(1))),
                 "exact"});
  T worst(0);
  for (int i = 0; i < 100; ++i) {
    const C lam(T(-6) + T(12) * T(i) / T(99), T(0.37) * T(i % 7));
    const auto d = std::abs(wmstab::sl_map(lam).mu - wmstab::sl_map(C(2) - lam).mu);
    worst = std::max(worst, d);
  }
  out.push_back({"mu symmetry about lambda = 1", worst < T(1e-13), double(worst), "< 1e-13"});
  out.push_back({"mu = 1 mode positive on (0,1)", wmstab::sl_gauge_positivity<T>(1000), 1.0,
                 "1000 samples"});
}

template <class T>
void verify_resonance(std::vector<CheckLine>& out, int n_lo, int n_hi) {
  for (int N = n_lo; N <= n_hi; ++N) {
    const auto r = wmstab::resonance_check<T>(N);
    const bool expect_log = (N != 3);
    out.push_back({"log-free series order N = " + std::to_string(N) +
                       (N == 1 ? " (reported verbatim)" : ""),
                   r.log_required == expect_log, double(std::abs(r.obstruction)),
                   r.log_required ? "log required" : "log-free"});
  }
}

template <class T>
void verify_apparent(std::vector<CheckLine>& out) {
  const double m = double(wmstab::apparent_singularity_check<T>());
  out.push_back({"apparent singularity at lambda = -2", m < 1e-8, m, "< 1e-8"});
  const double c = double(wmstab::apparent_singularity_mismatch<T>(std::complex<T>(T(-2.5)), false));
  out.push_back({"control at lambda = -2.5 (analytic branch only)", c > 1e-3, c, "> 1e-3"});
  const double c2 = double(wmstab::apparent_singularity_mismatch<T>(std::complex<T>(T(-2.5)), true));
  out.push_back({"control with the singular branch restored", c2 < 1e-8, c2, "< 1e-8"});
}

template <class T>
void verify_ratio(std::vector<CheckLine>& out) {
  using namespace wmstab;
  const auto scan = find_real_eigenvalues(T(-12.5), T(1.5), T(0.02), T(1e-12));
  bool all_min = scan.records.size() == 12;
  double worst = 0;
  for (const auto& r : scan.records) {
    if (r.ratio_terminating) continue;
    all_min = all_min && r.ratio_class == RatioClass::minimal;
    worst = std::max(worst, std::abs(double(r.ratio_plateau) - 0.5));
  }
  out.push_back({"minimal-ratio plateau at the 12 eigenvalues", all_min && worst < 1e-3,
                 worst, "|plateau - 1/2| < 1e-3"});
  bool all_dom = true;
  double worst_d = 0;
  for (std::size_t i = 0; i + 1 < scan.records.size(); ++i) {
    const T mid = (scan.records[i].lambda.real() + scan.records[i + 1].lambda.real()) / T(2);
    const auto p = minimal_ratio_test(std::complex<T>(mid), 2000);
    all_dom = all_dom && p.cls == RatioClass::dominant;
    worst_d = std::max(worst_d, std::abs(double(p.plateau_value) - 1.0));
  }
  out.push_back({"dominant-ratio plateau at the 11 midpoints", all_dom && worst_d < 1e-3,
                 worst_d, "|plateau - 1| < 1e-3"});
}

template <class T>
void verify_oracle(std::vector<CheckLine>& out, double lo, double hi) {
  using namespace wmstab;
  const auto sh = oracle_eigenvalues(T(lo), T(hi), T(0.05), T(1e-9));
  const auto cf = find_real_eigenvalues(T(lo), T(hi), T(0.02), T(1e-12));
  bool ok = sh.size() == cf.records.size();
  double worst = 0;
  if (ok)
    for (std::size_t i = 0; i < sh.size(); ++i)
      worst = std::max(worst, double(std::abs(sh[i].lambda - cf.records[i].lambda)));
  ok = ok && worst < 1e-6;
  out.push_back({"shooting oracle matches the fraction solver (" +
                     std::to_string(sh.size()) + " pairs)",
                 ok, worst, "< 1e-6"});
}

template <class T>
int run_verify(const GlobalOpts& g, const std::string& check, int n_lo, int n_hi,
               double olo, double ohi) {
  std::vector<CheckLine> lines;
  if (check == "all" || check == "gauge") verify_gauge<T>(lines);
  if (check == "all" || check == "sl") verify_sl<T>(lines);
  if (check == "all" || check == "resonance") verify_resonance<T>(lines, n_lo, n_hi);
  if (check == "all" || check == "apparent") verify_apparent<T>(lines);
  if (check == "all" || check == "ratio") verify_ratio<T>(lines);
  if (check == "all" || check == "oracle") verify_oracle<T>(lines, olo, ohi);
  if (lines.empty()) {
    std::fprintf(stderr, "unknown --check '%s'\n", check.c_str());
    return kExitConfig;
  }

  int failed = 0;
  json rows = json::array();
  for (const auto& l : lines) {
    std::printf("[%s] %-55s measured %.3e (%s)\n", l.pass ? "PASS" : "FAIL",
                l.name.c_str(), l.measured, l.note.c_str());
    failed += l.pass ? 0 : 1;
    rows.push_back({{"name", l.name}, {"pass", l.pass}, {"measured", l.measured},
                    {"criterion", l.note}});
  }
  json manifest;
  manifest["command"] = "verify";
  manifest["check"] = check;
  manifest["precision"] = g.precision;
  manifest["results"] = rows;
  write_text(out_path(g, "verify.json"), manifest.dump(2) + "\n");
  std::printf("%d/%zu checks passed\n", int(lines.size()) - failed, lines.size());
  return failed == 0 ? kExitOk : kExitNumerical;
}

struct EvolveArgs {
  std::string data = "lump";
  double amp = 8.0, width = 1.2, T0 = 1.0, cutoff = 2.0;
  std::size_t nodes = 4097;
  double radius = 2.5, cfl = 0.4, t_end = 0.9;
  std::size_t snap_every = 8;
  bool expect_blowup = false;
};

wmstab::WaveState<double> build_initial(const EvolveArgs& a) {
  using namespace wmstab;
  InitialDataParams<double> p;
  p.blowup_time = a.T0;
  p.amplitude = a.amp;
  p.width = a.width;
  p.cutoff_radius = a.cutoff;
  InitialDataKind kind;
  if (a.data == "exact") kind = InitialDataKind::exact_self_similar;
  else if (a.data == "truncated") kind = InitialDataKind::truncated_self_similar;
  else if (a.data == "lump") kind = InitialDataKind::gaussian_lump;
  else if (a.data == "zero") kind = InitialDataKind::zero;
  else throw std::invalid_argument("unknown --data kind '" + a.data + "'");
  return make_initial_data(kind, p, a.nodes, a.radius);
}

json evolve_manifest(const EvolveArgs& a, const wmstab::Trajectory<double>& traj,
                     const wmstab::BlowupEstimate<double>& est) {
  json m;
  m["data"] = a.data;
  m["amplitude"] = a.amp;
  m["width"] = a.width;
  m["T0"] = a.T0;
  m["cutoff"] = a.cutoff;
  m["nodes"] = a.nodes;
  m["radius"] = a.radius;
  m["cfl"] = a.cfl;
  m["t_end"] = a.t_end;
  m["snap_every"] = a.snap_every;
  m["stop_reason"] = traj.stop_reason;
  m["scheme_failed"] = traj.scheme_failed;
  m["snapshots"] = traj.snapshots.size();
  m["blew_up"] = est.blew_up;
  if (est.blew_up) {
    m["T_est"] = est.T_est;
    m["T_uncertainty"] = est.uncertainty;
  }
  const double e0 = traj.energy_history.front().second;
  double drift = 0;
  for (const auto& [t, e] : traj.energy_history)
    drift = std::max(drift, std::abs(e - e0) / std::max(e0, 1e-300));
  m["energy_drift"] = drift;
  return m;
}

int run_evolve(const GlobalOpts& g, const EvolveArgs& a) {
  using namespace wmstab;
  const auto s0 = build_initial(a);
  const auto traj = evolve(s0, a.cfl, a.t_end, a.snap_every);
  const auto est = detect_blowup(traj);

  if (traj.scheme_failed)
    std::printf("scheme failure: %s\n", traj.stop_reason.c_str());
  else if (est.blew_up)
    std::printf("blowup detected: T = %.8f +- %.2e (%zu slope points)\n", est.T_est,
                est.uncertainty, est.points_used);
  else
    std::printf("no blowup detected (stop: %s)\n", traj.stop_reason.c_str());

  const std::size_t stride = std::max<std::size_t>(1, a.nodes / 257);
  write_text(out_path(g, "trajectory.csv"), trajectory_csv(traj, stride));
  write_text(out_path(g, "slope_history.csv"),
             history_csv(traj.slope_history, "t", "central_slope"));
  write_text(out_path(g, "energy_history.csv"),
             history_csv(traj.energy_history, "t", "energy"));
  json manifest = evolve_manifest(a, traj, est);
  manifest["command"] = "evolve";
  manifest["node_stride"] = stride;
  write_text(out_path(g, "run_manifest.json"), manifest.dump(2) + "\n");

  if (traj.scheme_failed) return kExitNumerical;
  if (a.expect_blowup && !est.blew_up) return kExitNumerical;
  return kExitOk;
}

int run_fit(const GlobalOpts& g, const EvolveArgs& a, double mode_lambda,
            std::size_t rho_points, double window_len, std::size_t figure_frames) {
  using namespace wmstab;
  using C = std::complex<double>;

  double lam1 = mode_lambda;
  if (lam1 == 0.0) {  // default: locate the least-damped eigenvalue
    const auto scan = find_real_eigenvalues(-0.6, -0.5, 0.02, 1e-12);
    if (scan.records.size() != 1) {
      std::fprintf(stderr, "could not locate the least-damped eigenvalue\n");
      return kExitNumerical;
    }
    lam1 = scan.records[0].lambda.real();
  }

  const auto s0 = build_initial(a);
  const auto traj = evolve(s0, a.cfl, a.t_end, a.snap_every);
  const auto est = detect_blowup(traj);
  if (traj.scheme_failed || !est.blew_up) {
    std::printf("no blowup: nothing to fit (stop: %s)\n", traj.stop_reason.c_str());
    return kExitNumerical;
  }
  const double T = refine_blowup_time(traj, est.T_est, lam1);
  std::printf("blowup time: %.8f (slope fit %.8f +- %.1e)\n", T, est.T_est,
              est.uncertainty);

  std::vector<double> rho(rho_points);
  for (std::size_t i = 0; i < rho_points; ++i) rho[i] = double(i) / double(rho_points - 1);
  const auto phi = eigenmode_profile(C(lam1), rho);
  const auto frames = similarity_frames(traj, T, rho);

  FitOptions<double> opt;
  opt.window_len = window_len;
  const auto fit = fit_mode(frames, rho, phi, lam1, opt);
  if (!fit.ok) {
    std::printf("fit failed: %s\n", fit.message.c_str());
    return kExitNumerical;
  }
  std::printf("lambda_1 estimate: %.6f +- %.4f (log-slope), %.6f +- %.4f (pairwise)\n",
              fit.lambda_est, fit.lambda_est_err, fit.lambda_pairwise,
              fit.lambda_pairwise_err);
  std::printf("c_1 = %.6f over tau in [%.3f, %.3f] (%zu frames)\n", fit.c1, fit.tau_lo,
              fit.tau_hi, frames.size());

  write_text(out_path(g, "frames.csv"), frames_csv(frames, rho));
  write_text(out_path(g, "slope_history.csv"),
             history_csv(traj.slope_history, "t", "central_slope"));
  {
    std::string amps = "tau,amplitude,shape_residual,in_window\n";
    for (std::size_t j = 0; j < fit.taus.size(); ++j)
      amps += fmt_g17(fit.taus[j]) + "," + fmt_g17(fit.amplitudes[j]) + "," +
              fmt_g17(fit.shape_residuals[j]) + "," +
              (fit.in_window[j] ? "1" : "0") + "\n";
    write_text(out_path(g, "amplitudes.csv"), amps);
  }
  // deviation vs fitted-mode overlay for a few late frames
  std::size_t written = 0;
  for (std::size_t j = frames.size(); j-- > 0 && written < figure_frames;) {
    if (!fit.in_window[j]) continue;
    write_text(out_path(g, "figure_frame_" + std::to_string(written) + ".csv"),
               figure_csv(frames[j], rho, phi, fit.c1, lam1));
    ++written;
  }

  json manifest = evolve_manifest(a, traj, est);
  manifest["command"] = "fit";
  manifest["mode_lambda"] = lam1;
  manifest["rho_points"] = rho_points;
  manifest["window_len"] = window_len;
  manifest["T_refined"] = T;
  manifest["lambda_est"] = fit.lambda_est;
  manifest["lambda_est_err"] = fit.lambda_est_err;
  manifest["lambda_pairwise"] = fit.lambda_pairwise;
  manifest["c1"] = fit.c1;
  manifest["fit_window"] = {fit.tau_lo, fit.tau_hi};
  manifest["frames"] = frames.size();
  write_text(out_path(g, "run_manifest.json"), manifest.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-similar blowup stability toolkit"};
  app.set_config("--config");

  GlobalOpts g;
  const char* env_out = std::getenv("WMSTAB_OUTDIR");
  g.outdir = env_out ? env_out : "out";
  app.add_option("--outdir", g.outdir, "output directory");
  app.add_option("--precision", g.precision, "double | extended")
      ->check(CLI::IsMember({"double", "extended"}));
  app.add_option("--jobs", g.jobs, "parallel workers for scans")->check(CLI::Range(1, 64));

  // eigen
  auto* eig = app.add_subcommand("eigen", "continued-fraction eigenvalue scan");
  std::string range = "-12.5:1.5", region = "-13:2:0.1:5", grid = "60:30";
  double step = 0.02, tol = 1e-12;
  bool with_complex = false;
  eig->add_option("--range", range, "real scan range lo:hi");
  eig->add_option("--step", step, "scan step");
  eig->add_option("--tol", tol, "root residual tolerance");
  eig->add_flag("--complex", with_complex, "also search the complex plane");
  eig->add_option("--region", region, "complex region re0:re1:im0:im1");
  eig->add_option("--grid", grid, "complex seed grid nre:nim");

  // shoot
  auto* sho = app.add_subcommand("shoot", "series shooting oracle (window [-7.5, 1.5])");
  std::string window = "-7.5:1.5";
  double sstep = 0.05, stol = 1e-9, midpoint = 0.5;
  sho->add_option("--window", window, "scan window lo:hi");
  sho->add_option("--step", sstep, "scan step");
  sho->add_option("--tol", stol, "wronskian tolerance");
  sho->add_option("--midpoint", midpoint, "matching point in (0,1)");

  // verify
  auto* ver = app.add_subcommand("verify", "structural checks");
  std::string check = "all", nrange = "1:8", owindow = "-7.5:1.5";
  ver->add_option("--check", check, "all|gauge|sl|resonance|apparent|ratio|oracle");
  ver->add_option("--n", nrange, "resonance order range lo:hi");
  ver->add_option("--window", owindow, "oracle agreement window lo:hi");

  // evolve / fit
  EvolveArgs ea;
  auto add_evolve_opts = [&](CLI::App* c) {
    c->add_option("--data", ea.data, "exact|truncated|lump|zero");
    c->add_option("--amp", ea.amp, "lump amplitude");
    c->add_option("--width", ea.width, "lump width");
    c->add_option("--T0", ea.T0, "self-similar blowup time");
    c->add_option("--cutoff", ea.cutoff, "truncation radius (units of T0)");
    c->add_option("--nodes", ea.nodes, "grid nodes");
    c->add_option("--radius", ea.radius, "outer radius");
    c->add_option("--cfl", ea.cfl, "dt = cfl h");
    c->add_option("--t-end", ea.t_end, "final time");
    c->add_option("--snap-every", ea.snap_every, "snapshot cadence (steps)");
  };
  auto* evo = app.add_subcommand("evolve", "nonlinear radial evolution to blowup");
  add_evolve_opts(evo);
  evo->add_flag("--expect-blowup", ea.expect_blowup, "exit nonzero unless blowup found");

  auto* fit = app.add_subcommand("fit", "evolve and fit the least-damped mode");
  add_evolve_opts(fit);
  double mode_lambda = 0.0, window_len = 1.8;
  std::size_t rho_points = 201, figure_frames = 3;
  fit->add_option("--mode-lambda", mode_lambda, "mode eigenvalue (0: solve for it)");
  fit->add_option("--rho-points", rho_points, "similarity grid points");
  fit->add_option("--window-len", window_len, "fit window length in tau (0: all trusted)");
  fit->add_option("--figure-frames", figure_frames, "late frames to dump as overlays");

  app.require_subcommand(0, 1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const bool ext = g.precision == "extended";
    if (eig->parsed()) {
      double lo, hi;
      if (!parse_pair(range, lo, hi) || !(lo < hi)) {
        std::fprintf(stderr, "bad --range (want lo:hi with lo < hi)\n");
        return kExitConfig;
      }
      return ext ? run_eigen<long double>(g, lo, hi, step, tol, with_complex, region, grid)
                 : run_eigen<double>(g, lo, hi, step, tol, with_complex, region, grid);
    }
    if (sho->parsed()) {
      double lo, hi;
      if (!parse_pair(window, lo, hi) || !(lo < hi)) {
        std::fprintf(stderr, "bad --window\n");
        return kExitConfig;
      }
      return ext ? run_shoot<long double>(g, lo, hi, sstep, stol, midpoint)
                 : run_shoot<double>(g, lo, hi, sstep, stol, midpoint);
    }
    if (ver->parsed()) {
      double nlo, nhi, olo, ohi;
      if (!parse_pair(nrange, nlo, nhi) || !parse_pair(owindow, olo, ohi)) {
        std::fprintf(stderr, "bad --n or --window\n");
        return kExitConfig;
      }
      return ext ? run_verify<long double>(g, check, int(nlo), int(nhi), olo, ohi)
                 : run_verify<double>(g, check, int(nlo), int(nhi), olo, ohi);
    }
    if (evo->parsed()) return run_evolve(g, ea);
    if (fit->parsed())
      return run_fit(g, ea, mode_lambda, rho_points, window_len, figure_frames);
    std::printf("%s\n", app.help().c_str());
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
}
