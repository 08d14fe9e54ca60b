// Acceptance gate: one line per criterion, nonzero exit if any ran criterion
// fails. Criterion 7 needs an externally supplied case CSV and is skipped
// unless SIRPINN_GERMANY_CSV is set. Optional argv: criterion numbers to run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sirpinn/errors.hpp"
#include "sirpinn/experiment.hpp"
#include "sirpinn/fit_rt.hpp"
#include "sirpinn/fit_sir.hpp"
#include "sirpinn/grad.hpp"
#include "sirpinn/net.hpp"
#include "sirpinn/optim.hpp"
#include "sirpinn/pipeline.hpp"
#include "sirpinn/report.hpp"
#include "sirpinn/sir.hpp"
#include "sirpinn/stats.hpp"

#ifndef SIRPINN_DATA_DIR
#define SIRPINN_DATA_DIR "data"
#endif

using namespace sirpinn;
namespace fs = std::filesystem;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

struct Line {
  std::string label;
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

std::vector<Line> g_lines;

void record(const std::string& label, bool pass, const std::string& detail) {
  g_lines.push_back({label, pass, false, detail});
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << label << ": " << detail
            << std::endl;
}

void record_skip(const std::string& label, const std::string& detail) {
  g_lines.push_back({label, true, true, detail});
  std::cout << "[SKIP] " << label << ": " << detail << std::endl;
}

std::string data_dir() {
  if (const char* env = std::getenv("SIRPINN_DATA_DIR")) return env;
  return SIRPINN_DATA_DIR;
}

std::string fmt(double v, int prec = 6) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << v;
  return ss.str();
}

// minimal CSV loader for the bundled reference tables (no quoting needed)
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw IoError("cannot open " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::size_t column_of(const std::vector<std::string>& header,
                      const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw ParseError("missing column " + name);
}

// ---- shared scenario builders ----

RegionDataset benchmark_dataset() {
  SirParams p;
  p.alpha = 0.07;
  p.beta = 0.22658;
  p.N = 7e7;
  return synth_generate(p, 15.0, 35, 0.0, 1, "benchmark");
}

NetworkConfig benchmark_net(std::uint64_t seed) {
  NetworkConfig nc;
  nc.output_dim = 3;
  nc.hidden_layers = 12;
  nc.hidden_width = 64;
  nc.activation = Activation::kTanh;
  nc.seed = seed;
  return nc;
}

TrainConfig benchmark_train() {
  TrainConfig tc;
  tc.iterations = 15000;
  tc.initial_lr = 1e-3;
  tc.lr_schedule_power = 1.0;
  tc.data_loss_weight = 10.0;
  tc.physics_loss_weight = 1.0;
  return tc;
}

RegionDataset piecewise_rt_dataset(double rt_hi, double rt_lo, double alpha,
                                   int days, double i0, double N) {
  RegionDataset ds;
  ds.region_name = "piecewise";
  ds.N = N;
  ds.series.N = N;
  const double tf = days;
  const double Is_mid = reduced_closed_form(rt_hi, alpha, 0.0, tf, 1.0, 0.5);
  const long base = iso_to_days("2021-01-01");
  for (int k = 0; k <= days; ++k) {
    const double ts = k / tf;
    const double Is = ts <= 0.5
                          ? reduced_closed_form(rt_hi, alpha, 0.0, tf, 1.0, ts)
                          : reduced_closed_form(rt_lo, alpha, 0.0, tf, Is_mid,
                                                ts - 0.5);
    const double I = i0 * Is;
    ds.dates.push_back(days_to_iso(base + k));
    ds.series.t.push_back(k);
    ds.series.I.push_back(I);
    ds.series.R.push_back(0.0);
    ds.series.S.push_back(N - I);
  }
  return ds;
}

// ---- criterion 1 ----

void criterion_1() {
  const double start = now_s();
  const RegionDataset ds = benchmark_dataset();
  const TrainConfig tc = benchmark_train();

  std::vector<double> betas;
  bool loss_decayed = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SirFitResult res = fit_sir(ds, benchmark_net(seed), tc);
    betas.push_back(res.beta_hat);
    if (res.loss_history.back() > 0.1 * res.loss_history[99])
      loss_decayed = false;
  }
  const double elapsed = now_s() - start;

  const double mean = metric_mean(betas);
  const double stdev = metric_std(betas);
  const double lo = *std::min_element(betas.begin(), betas.end());
  const double hi = *std::max_element(betas.begin(), betas.end());

  const bool band = mean >= 0.215 && mean <= 0.240;
  const bool time_ok = elapsed <= 300.0;
  record("criterion 1 (synthetic benchmark fit, 10 seeds)", band && time_ok,
         "mean beta_hat=" + fmt(mean) + " (band [0.215,0.240]), spread [" +
             fmt(lo) + ", " + fmt(hi) + "], " + fmt(elapsed, 4) +
             "s for 10 runs (limit 300s)");
  record("invariant (loss decay: final <= 10% of iteration-100 loss)",
         loss_decayed, loss_decayed ? "held on all 10 runs" : "violated");
  record("invariant (beta_hat dispersion over seeds <= 1e-3)", stdev <= 1e-3,
         "std=" + fmt(stdev, 3));
}

// ---- criterion 2 ----

void criterion_2() {
  const double start = now_s();
  const double alpha = 1.0 / 14.0;
  const TrainConfig tc = benchmark_train();

  bool all_ok = true;
  std::string detail;
  for (const double beta : {0.1, 0.2266, 0.3}) {
    SirParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.N = 1e6;
    const RegionDataset ds = synth_generate(p, 100.0, 100, 0.0, 1, "grid");
    const SirFitResult res = fit_sir(ds, benchmark_net(1), tc);
    const double beta_err = std::abs(res.beta_hat - beta) / beta;
    const double alpha_err = std::abs(res.alpha_hat - alpha) / alpha;
    const bool ok = beta_err <= 0.02 && alpha_err <= 0.05;
    all_ok = all_ok && ok;
    if (!detail.empty()) detail += "; ";
    detail += "beta=" + fmt(beta) + ": rel err beta=" + fmt(beta_err, 3) +
              ", alpha=" + fmt(alpha_err, 3);
  }
  const double elapsed = now_s() - start;
  const bool time_ok = elapsed <= 600.0;
  record("criterion 2 (oracle parameter recovery grid)", all_ok && time_ok,
         detail + "; " + fmt(elapsed, 4) + "s total (limit 600s)");
}

// ---- criterion 3 ----

struct FdCheck {
  double max_rel = 0.0;
  std::size_t worst = 0;
};

FdCheck fd_check(Network& net, const std::vector<double>& times,
                 const PointFn& fn, double w0, double w1) {
  LossKernel kernel(net, times);
  std::vector<double> grad(net.size());
  kernel.accumulate(net, fn, grad);

  double gmax = 0.0;
  for (const double g : grad) gmax = std::max(gmax, std::abs(g));

  auto loss_at = [&]() {
    const LossKernel::Result r = kernel.evaluate(net, fn);
    return w0 * r.data_loss + w1 * r.physics_loss;
  };

  FdCheck out;
  const double h = 1e-5;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double keep = net.params()[i];
    net.params()[i] = keep + h;
    const double up = loss_at();
    net.params()[i] = keep - h;
    const double dn = loss_at();
    net.params()[i] = keep;
    const double fd = (up - dn) / (2.0 * h);
    // tiny-gradient slots are floored at 1e-3 * the largest gradient:
    // below that, central differences are dominated by cancellation noise
    const double denom = std::max({std::abs(fd), 1e-3 * gmax, 1e-12});
    const double rel = std::abs(grad[i] - fd) / denom;
    if (rel > out.max_rel) {
      out.max_rel = rel;
      out.worst = i;
    }
  }
  return out;
}

void criterion_3() {
  NetworkConfig nc;
  nc.output_dim = 3;
  nc.hidden_layers = 2;
  nc.hidden_width = 8;
  nc.activation = Activation::kTanh;
  nc.seed = 17;

  std::vector<double> times;
  std::vector<std::array<double, 3>> obs;
  std::vector<double> obs_I;
  for (int k = 0; k <= 12; ++k) {
    times.push_back(k / 12.0);
    obs.push_back({0.95 - 0.01 * k, 0.2 + 0.04 * k, 0.03 * k});
    obs_I.push_back(0.2 + 0.04 * k);
  }

  Network sir_net(nc);
  sir_net.add_scalar("raw_alpha", std::atanh(0.1));
  sir_net.add_scalar("raw_beta", std::atanh(0.1));
  SirScaling sc;
  sc.N = 1e6;
  sc.c = 400.0;
  sc.t0 = 0.0;
  sc.tf = 12.0;

  const FdCheck sir_data =
      fd_check(sir_net, times, make_sir_point_loss(sir_net, obs, sc, 1.0, 0.0),
               1.0, 0.0);
  const FdCheck sir_phys =
      fd_check(sir_net, times, make_sir_point_loss(sir_net, obs, sc, 0.0, 1.0),
               0.0, 1.0);

  NetworkConfig rc = nc;
  rc.output_dim = 2;
  rc.seed = 18;
  Network rt_net(rc);
  const double alpha = 1.0 / 14.0;
  const FdCheck rt_data = fd_check(
      rt_net, times, make_rt_point_loss(obs_I, alpha, 0.0, 12.0, 1.0, 0.0),
      1.0, 0.0);
  const FdCheck rt_phys = fd_check(
      rt_net, times, make_rt_point_loss(obs_I, alpha, 0.0, 12.0, 0.0, 1.0),
      0.0, 1.0);

  const bool ok = sir_data.max_rel <= 1e-4 && rt_data.max_rel <= 1e-4 &&
                  sir_phys.max_rel <= 1e-3 && rt_phys.max_rel <= 1e-3;
  record("criterion 3 (gradient exactness vs central differences)", ok,
         "max rel err: data losses " + fmt(sir_data.max_rel, 3) + " / " +
             fmt(rt_data.max_rel, 3) + " (tol 1e-4), physics losses " +
             fmt(sir_phys.max_rel, 3) + " / " + fmt(rt_phys.max_rel, 3) +
             " (tol 1e-3), every parameter checked");
}

// ---- criterion 4 ----

void criterion_4() {
  double worst = 0.0;
  auto conservation = [&worst](const SirParams& p, double i0, int days,
                               int spd) {
    const CompartmentSeries s =
        sir_rk4_simulate(p, p.N - i0, i0, 0.0, days, spd);
    for (std::size_t k = 0; k < s.size(); ++k) {
      worst = std::max(worst,
                       std::abs(s.S[k] + s.I[k] + s.R[k] - p.N) / p.N);
    }
  };
  SirParams bench;
  bench.alpha = 0.07;
  bench.beta = 0.22658;
  bench.N = 7e7;
  conservation(bench, 15.0, 35, 100);
  conservation(bench, 15.0, 35, 10);
  for (const double beta : {0.1, 0.2266, 0.3}) {
    SirParams p;
    p.alpha = 1.0 / 14.0;
    p.beta = beta;
    p.N = 1e6;
    conservation(p, 100.0, 100, 10);
  }
  SirParams hot;
  hot.alpha = 0.2;
  hot.beta = 0.9;
  hot.N = 1e5;
  conservation(hot, 50.0, 120, 4);

  auto i_end = [&bench](int spd) {
    return sir_rk4_simulate(bench, bench.N - 15.0, 15.0, 0.0, 35, spd).I[35];
  };
  const double truth = i_end(256);
  const double e1 = std::abs(i_end(1) - truth);
  const double e2 = std::abs(i_end(2) - truth);
  const double e4 = std::abs(i_end(4) - truth);
  const double o12 = std::log2(e1 / e2);
  const double o24 = std::log2(e2 / e4);

  const bool ok = worst <= 1e-6 && o12 >= 3.8 && o24 >= 3.8;
  record("criterion 4 (RK4 validity)", ok,
         "max |S+I+R-N|/N = " + fmt(worst, 3) +
             " (tol 1e-6); step-halving orders " + fmt(o12, 4) + ", " +
             fmt(o24, 4) + " (need >= 3.8)");
}

// ---- criterion 5 ----

void criterion_5() {
  const double start = now_s();
  const double alpha = 1.0 / 14.0;
  const int days = 120;
  const RegionDataset ds =
      piecewise_rt_dataset(1.4, 0.8, alpha, days, 100.0, 1e6);

  NetworkConfig nc;
  nc.output_dim = 2;
  nc.hidden_layers = 7;
  nc.hidden_width = 20;
  nc.activation = Activation::kRelu;
  nc.seed = 1;

  RtFitConfig cfg;
  cfg.alpha = alpha;
  cfg.w0 = 100.0;
  cfg.w1 = 1e-5;
  cfg.stage1_iters = 10000;
  cfg.stage2_iters = 10000;
  cfg.rt_init = 1.0;

  const RtFitResult res = fit_rt(ds, cfg, nc);
  const double elapsed = now_s() - start;

  // interior 80% of each piece: pieces are [0,60] and [60,120]
  double err1 = 0.0, err2 = 0.0;
  long sign_hits = 0, sign_total = 0;
  for (int k = 6; k <= 54; ++k) {
    err1 = std::max(err1, std::abs(res.series.rt[k] - 1.4));
    sign_total++;
    if (res.series.rt[k] > 1.0) sign_hits++;
  }
  for (int k = 66; k <= 114; ++k) {
    err2 = std::max(err2, std::abs(res.series.rt[k] - 0.8));
    sign_total++;
    if (res.series.rt[k] < 1.0) sign_hits++;
  }

  const bool band = err1 <= 0.1 && err2 <= 0.1;
  const bool stage1 = res.stage1_data_loss <= 1e-4;
  const bool time_ok = elapsed <= 300.0;
  record("criterion 5 (piecewise-Rt recovery)", band && stage1 && time_ok,
         "max |rt - truth| interior: piece1=" + fmt(err1, 3) + ", piece2=" +
             fmt(err2, 3) + " (tol 0.1); stage-1 data loss=" +
             fmt(res.stage1_data_loss, 3) + " (tol 1e-4); " + fmt(elapsed, 4) +
             "s (limit 300s)");

  const long n = static_cast<long>(res.series.rt.size());
  const double half = n / 2.0;
  const bool days_band =
      std::abs(res.summary.days_above_one - half) <= 0.1 * n;
  record("invariant (days_above_one ~ half the window +- 10%)", days_band,
         "days_above_one=" + std::to_string(res.summary.days_above_one) +
             " of " + std::to_string(n));
  const bool sign_ok = sign_hits >= (9 * sign_total + 9) / 10;
  record("invariant (growth/decay sign agreement >= 90% of interior days)",
         sign_ok, std::to_string(sign_hits) + "/" + std::to_string(sign_total));
}

// ---- criterion 6 ----

void criterion_6() {
  const std::string dir = data_dir();
  const auto params = read_csv(dir + "/reference_params.csv");
  const auto rts = read_csv(dir + "/reference_rt_summary.csv");
  const auto meta = load_region_metadata(dir + "/region_metadata.csv");

  const std::size_t p_region = column_of(params[0], "region");
  const std::size_t p_beta = column_of(params[0], "beta");
  const std::size_t r_region = column_of(rts[0], "region");
  const std::size_t r_mode = column_of(rts[0], "alpha_mode");
  const std::size_t r_peak = column_of(rts[0], "peak_rt");

  // the 16 states: every region except the national row
  std::vector<double> beta, vacc_b;
  for (std::size_t i = 1; i < params.size(); ++i) {
    if (params[i][p_region] == "Germany") continue;
    beta.push_back(std::stod(params[i][p_beta]));
    vacc_b.push_back(*meta.at(params[i][p_region]).vaccination_pct);
  }
  std::vector<double> peak, vacc_p;
  for (std::size_t i = 1; i < rts.size(); ++i) {
    if (rts[i][r_region] == "Germany") continue;
    if (rts[i][r_mode] != "fixed_14d") continue;
    peak.push_back(std::stod(rts[i][r_peak]));
    vacc_p.push_back(*meta.at(rts[i][r_region]).vaccination_pct);
  }

  bool ok = beta.size() == 16 && peak.size() == 16;
  std::string detail;
  if (!ok) {
    detail = "expected 16 state rows, got " + std::to_string(beta.size()) +
             " / " + std::to_string(peak.size());
  } else {
    const Correlation bv = pearson(beta, vacc_b);
    const Correlation pv = pearson(peak, vacc_p);
    const bool r1 = std::abs(bv.r - (-0.5741)) <= 0.0005;
    const bool p1 = std::abs(bv.p - 0.02) <= 0.005;
    const bool r2 = std::abs(pv.r - (-0.44552)) <= 0.002;
    ok = r1 && p1 && r2;
    detail = "beta vs vaccination: r=" + fmt(bv.r, 6) +
             " (target -0.5741 +- 0.0005" + std::string(r1 ? "" : ", MISSED") +
             "), p=" + fmt(bv.p, 4) + " (target ~0.02" +
             std::string(p1 ? "" : ", MISSED") +
             "); peak-rt vs vaccination: r=" + fmt(pv.r, 6) +
             " (target -0.44552 +- 0.002" + std::string(r2 ? "" : ", MISSED") +
             "); note: the bundled tables carry 3 decimals, which shifts r by"
             " ~0.003-0.012 from the full-precision originals";
  }
  record("criterion 6 (reference-table correlations)", ok, detail);
}

// ---- criterion 7 (env-gated) ----

void criterion_7() {
  const char* path = std::getenv("SIRPINN_GERMANY_CSV");
  if (path == nullptr) {
    record_skip("criterion 7 (real-data plausibility)",
                "set SIRPINN_GERMANY_CSV to a national case/death CSV "
                "covering 2020-03-09..2023-06-22 to enable this soft check");
    return;
  }

  ParseReport report;
  const std::vector<RawCaseRecord> recs = load_case_csv(path, &report);
  std::string region = "Germany";
  bool found = false;
  for (const RawCaseRecord& r : recs)
    if (r.region == region) found = true;
  if (!found && !recs.empty()) region = recs.front().region;

  const double N = 83.16e6;
  const RegionDataset ds =
      build_dataset(recs, region, "2020-03-09", "2023-06-22", N, 14);

  const SirFitResult sir = fit_sir(ds, benchmark_net(1), benchmark_train());

  NetworkConfig rtn;
  rtn.output_dim = 2;
  rtn.hidden_layers = 7;
  rtn.hidden_width = 20;
  rtn.activation = Activation::kRelu;
  rtn.seed = 1;
  RtFitConfig cfg;  // national defaults: alpha=1/14, w0=1e2, w1=1e-6
  const RtFitResult rt = fit_rt(ds, cfg, rtn);

  const bool ok = sir.alpha_hat >= 0.06 && sir.alpha_hat <= 0.10 &&
                  sir.beta_hat >= 0.08 && sir.beta_hat <= 0.13 &&
                  rt.summary.days_above_one >= 250 &&
                  rt.summary.days_above_one <= 375 &&
                  rt.summary.peak_rt >= 1.4 && rt.summary.peak_rt <= 1.9;
  record("criterion 7 (real-data plausibility, soft)", ok,
         "alpha_hat=" + fmt(sir.alpha_hat, 4) + " beta_hat=" +
             fmt(sir.beta_hat, 4) + " days_above_one=" +
             std::to_string(rt.summary.days_above_one) + " peak_rt=" +
             fmt(rt.summary.peak_rt, 4));
}

// ---- criterion 8 ----

void criterion_8() {
  bool ok = true;
  std::string detail;

  // queue conservation + steady state
  {
    const std::vector<double> cases(60, 10.0);
    const std::vector<double> deaths(60, 0.0);
    const CompartmentSeries s = recovery_queue(cases, deaths, 14, 1e6, 0.0);
    bool steady = true, conserved = true;
    double cum = 0.0;
    for (std::size_t d = 0; d < cases.size(); ++d) {
      cum += cases[d];
      if (std::abs(s.I[d] + s.R[d] - cum) > 1e-9) conserved = false;
      if (d >= 13 && s.I[d] != 140.0) steady = false;
    }
    ok = ok && steady && conserved;
    detail += std::string("queue steady/conserved=") +
              (steady && conserved ? "yes" : "NO");
  }

  // derive_susceptible_removed tracks the integrator within 1%
  {
    SirParams p;
    p.alpha = 0.07;
    p.beta = 0.22658;
    p.N = 7e7;
    const CompartmentSeries sim =
        sir_rk4_simulate(p, p.N - 15.0, 15.0, 0.0, 35, 100);
    const CompartmentSeries got =
        derive_susceptible_removed(sim.I, p.alpha, p.N, 15.0);
    bool within = true;
    for (std::size_t k = 1; k < sim.size(); ++k)
      if (std::abs(got.R[k] - sim.R[k]) > 0.01 * sim.R[k]) within = false;
    ok = ok && within;
    detail += std::string("; derive_SR within 1%=") + (within ? "yes" : "NO");
  }

  // pearson affine invariance
  {
    const std::vector<double> x{0.097, 0.108, 0.097, 0.083, 0.100, 0.086};
    const std::vector<double> y{79.5, 84.5, 77.6, 88.3, 79.5, 75.8};
    const Correlation base = pearson(x, y);
    std::vector<double> xs = x, ys = y;
    for (double& v : xs) v = 250.0 * v - 3.0;
    for (double& v : ys) v = 0.125 * v + 40.0;
    const Correlation mapped = pearson(xs, ys);
    const bool inv = std::abs(base.r - mapped.r) < 1e-12 &&
                     std::abs(base.p - mapped.p) < 1e-12;
    ok = ok && inv;
    detail += std::string("; pearson affine-invariant=") + (inv ? "yes" : "NO");
  }

  // end-to-end byte determinism of reports, including across worker counts
  {
    const std::string base = "/tmp/sirpinn_acc_det";
    fs::remove_all(base);
    fs::create_directories(base);
    SirParams p;
    p.alpha = 0.07;
    p.beta = 0.22658;
    p.N = 7e7;
    const RegionDataset ds = synth_generate(p, 15.0, 35, 0.01, 2, "detA");
    save_dataset_json(ds, base + "/ds.json");

    ExperimentConfig ec;
    ec.mode = RunMode::kFitSir;
    ec.dataset_paths = {base + "/ds.json"};
    ec.repetitions = 2;
    ec.base_seed = 5;
    ec.net.output_dim = 3;
    ec.net.hidden_layers = 2;
    ec.net.hidden_width = 8;
    ec.net.activation = Activation::kTanh;
    ec.train.iterations = 120;
    ec.train.data_loss_weight = 10.0;

    auto run_into = [&](const std::string& out, int workers) {
      ExperimentConfig c = ec;
      c.output_dir = out;
      c.workers = workers;
      fs::create_directories(out);
      run_experiment(c);
    };
    run_into(base + "/a", 1);
    run_into(base + "/b", 2);

    auto slurp = [](const std::string& path) {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    bool same = true;
    for (const std::string name : {"params.csv", "runs.json"}) {
      const std::string a = slurp(base + "/a/" + name);
      if (a.empty() || a != slurp(base + "/b/" + name)) same = false;
    }
    ok = ok && same;
    detail += std::string("; reports byte-identical across worker counts=") +
              (same ? "yes" : "NO");
  }

  record("criterion 8 (property suite)", ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto wanted = [&](int n) { return only.empty() || only.count(n) > 0; };

  const double start = now_s();
  try {
    if (wanted(1)) criterion_1();
    if (wanted(2)) criterion_2();
    if (wanted(3)) criterion_3();
    if (wanted(4)) criterion_4();
    if (wanted(5)) criterion_5();
    if (wanted(6)) criterion_6();
    if (wanted(7)) criterion_7();
    if (wanted(8)) criterion_8();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] acceptance run aborted: " << e.what() << std::endl;
    return 1;
  }

  int failed = 0, skipped = 0;
  for (const Line& l : g_lines) {
    if (l.skipped)
      ++skipped;
    else if (!l.pass)
      ++failed;
  }
  std::cout << "acceptance: " << (g_lines.size() - failed - skipped) << "/"
            << (g_lines.size() - skipped) << " checks passed";
  if (skipped > 0) std::cout << " (" << skipped << " skipped)";
  std::cout << " in " << fmt(now_s() - start, 4) << "s" << std::endl;
  return failed == 0 ? 0 : 1;
}
