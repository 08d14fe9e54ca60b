// sirpinn: SIR inverse-problem fitting and reporting.
//
// Exit codes: 0 success, 1 configuration/data problem, 2 training failure.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sirpinn/errors.hpp"
#include "sirpinn/experiment.hpp"
#include "sirpinn/report.hpp"

namespace {

using sirpinn::AggregateResult;
using sirpinn::ExperimentConfig;
using sirpinn::RunMode;

void print_summary(const AggregateResult& result) {
  for (const auto& reg : result.regions) {
    if (result.mode == RunMode::kFitSir && reg.runs.count("alpha_hat")) {
      std::printf("%s: alpha = %.6f +- %.6f, beta = %.6f +- %.6f (%zu runs)\n",
                  reg.region.c_str(),
                  sirpinn::metric_mean(reg.runs.at("alpha_hat")),
                  sirpinn::metric_std(reg.runs.at("alpha_hat")),
                  sirpinn::metric_mean(reg.runs.at("beta_hat")),
                  sirpinn::metric_std(reg.runs.at("beta_hat")),
                  reg.runs.at("alpha_hat").size());
    } else if (result.mode == RunMode::kFitRt &&
               reg.runs.count("peak_rt")) {
      std::printf(
          "%s: days Rt>1 = %.1f +- %.1f, peak Rt = %.3f +- %.3f (%zu runs)\n",
          reg.region.c_str(),
          sirpinn::metric_mean(reg.runs.at("days_above_one")),
          sirpinn::metric_std(reg.runs.at("days_above_one")),
          sirpinn::metric_mean(reg.runs.at("peak_rt")),
          sirpinn::metric_std(reg.runs.at("peak_rt")),
          reg.runs.at("peak_rt").size());
    }
  }
  for (const auto& c : result.correlations)
    std::printf("correlation %s: r = %.6f, p = %.6f (n = %ld)\n",
                c.pair.c_str(), c.r, c.p, c.n);
  for (const auto& w : result.warnings)
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  for (const auto& e : result.fit_errors)
    std::fprintf(stderr, "fit error: %s\n", e.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PINN-based SIR parameter and Rt estimation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string activation_name;
  ExperimentConfig cfg;

  // shared options are registered per subcommand so --help stays honest
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config JSON");
    sub->add_option("--out", cfg.output_dir, "output directory");
    sub->add_option("--seed", cfg.base_seed, "base seed (run k uses seed+k)");
  };
  auto add_fit_common = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--dataset", cfg.dataset_paths,
                    "RegionDataset JSON file (repeatable)");
    sub->add_option("--metadata", cfg.metadata_csv,
                    "region,population,vaccination_pct CSV");
    sub->add_option("--region", cfg.regions, "region filter (repeatable)");
    sub->add_option("--reps", cfg.repetitions, "repetitions per region");
    sub->add_option("--workers", cfg.workers, "parallel fits");
    sub->add_option("--hidden-layers", cfg.net.hidden_layers, "hidden layers");
    sub->add_option("--width", cfg.net.hidden_width, "hidden width");
    sub->add_option("--activation", activation_name, "tanh or relu");
  };

  CLI::App* fit_sir = app.add_subcommand(
      "fit-sir", "estimate (alpha, beta) from one or more datasets");
  add_fit_common(fit_sir);
  fit_sir->add_option("--iterations", cfg.train.iterations, "Adam iterations");
  fit_sir->add_option("--lr", cfg.train.initial_lr, "initial learning rate");
  fit_sir->add_option("--w0", cfg.train.data_loss_weight, "data-loss weight");
  fit_sir->add_option("--w1", cfg.train.physics_loss_weight,
                      "physics-loss weight");

  CLI::App* fit_rt =
      app.add_subcommand("fit-rt", "estimate time-dependent Rt");
  add_fit_common(fit_rt);
  bool use_alpha_exp = false;
  fit_rt->add_option("--alpha", cfg.rt.alpha, "fixed recovery rate");
  fit_rt->add_flag("--use-alpha-exp", use_alpha_exp,
                   "use each dataset's fitted alpha_exp instead of --alpha");
  fit_rt->add_option("--w0", cfg.rt.w0, "data-loss weight (stage 2)");
  fit_rt->add_option("--w1", cfg.rt.w1, "physics-loss weight (stage 2)");
  fit_rt->add_option("--stage1", cfg.rt.stage1_iters, "stage-1 iterations");
  fit_rt->add_option("--stage2", cfg.rt.stage2_iters, "stage-2 iterations");
  fit_rt->add_option("--rt-init", cfg.rt.rt_init,
                     "Rt head offset applied after stage 1");
  fit_rt->add_option("--window-t0", cfg.rt.window_t0, "window start day");
  fit_rt->add_option("--window-tf", cfg.rt.window_tf,
                     "window end day (-1 = last)");

  CLI::App* simulate =
      app.add_subcommand("simulate", "generate a synthetic dataset via RK4");
  add_common(simulate);
  simulate->add_option("--beta", cfg.sim_params.beta, "transmission rate");
  simulate->add_option("--alpha", cfg.sim_params.alpha, "recovery rate");
  simulate->add_option("--N", cfg.sim_params.N, "population");
  simulate->add_option("--i0", cfg.sim_i0, "initial infectious count");
  simulate->add_option("--days", cfg.sim_days, "days to simulate");
  simulate->add_option("--noise", cfg.sim_noise,
                       "multiplicative noise std on I");
  simulate->add_option("--name", cfg.sim_region, "region name");

  CLI::App* report =
      app.add_subcommand("report", "re-emit tables/plots from a runs.json");
  add_common(report);
  report->add_option("--from", cfg.report_source, "runs.json from a sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // app.exit prints the help or error text; fold CLI11's exit codes into
    // the documented contract (--help stays 0, any usage error is 1)
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig run_cfg;
    if (!config_path.empty()) run_cfg = sirpinn::load_config_json(config_path);

    // subcommand picks the mode; explicit flags override the config file
    CLI::App* sub = app.get_subcommands().front();
    if (sub == fit_sir) run_cfg.mode = RunMode::kFitSir;
    if (sub == fit_rt) run_cfg.mode = RunMode::kFitRt;
    if (sub == simulate) run_cfg.mode = RunMode::kSimulate;
    if (sub == report) run_cfg.mode = RunMode::kReport;

    if (sub->count("--out")) run_cfg.output_dir = cfg.output_dir;
    if (sub->count("--seed")) run_cfg.base_seed = cfg.base_seed;
    if (sub == fit_sir || sub == fit_rt) {
      if (sub->count("--dataset")) run_cfg.dataset_paths = cfg.dataset_paths;
      if (sub->count("--metadata")) run_cfg.metadata_csv = cfg.metadata_csv;
      if (sub->count("--region")) run_cfg.regions = cfg.regions;
      if (sub->count("--reps")) run_cfg.repetitions = cfg.repetitions;
      if (sub->count("--workers")) run_cfg.workers = cfg.workers;
      if (sub->count("--hidden-layers"))
        run_cfg.net.hidden_layers = cfg.net.hidden_layers;
      if (sub->count("--width"))
        run_cfg.net.hidden_width = cfg.net.hidden_width;
      if (sub->count("--activation")) {
        if (activation_name == "tanh")
          run_cfg.net.activation = sirpinn::Activation::kTanh;
        else if (activation_name == "relu")
          run_cfg.net.activation = sirpinn::Activation::kRelu;
        else
          throw sirpinn::ConfigError("unknown activation '" + activation_name +
                                     "'");
      }
    }
    if (sub == fit_sir) {
      if (sub->count("--iterations"))
        run_cfg.train.iterations = cfg.train.iterations;
      if (sub->count("--lr")) run_cfg.train.initial_lr = cfg.train.initial_lr;
      if (sub->count("--w0"))
        run_cfg.train.data_loss_weight = cfg.train.data_loss_weight;
      if (sub->count("--w1"))
        run_cfg.train.physics_loss_weight = cfg.train.physics_loss_weight;
    }
    if (sub == fit_rt) {
      if (!sub->count("--config") && !sub->count("--activation"))
        run_cfg.net.activation = sirpinn::Activation::kRelu;
      if (sub->count("--alpha")) run_cfg.rt.alpha = cfg.rt.alpha;
      if (use_alpha_exp) run_cfg.rt_use_alpha_exp = true;
      if (sub->count("--w0")) run_cfg.rt.w0 = cfg.rt.w0;
      if (sub->count("--w1")) run_cfg.rt.w1 = cfg.rt.w1;
      if (sub->count("--stage1")) run_cfg.rt.stage1_iters = cfg.rt.stage1_iters;
      if (sub->count("--stage2")) run_cfg.rt.stage2_iters = cfg.rt.stage2_iters;
      if (sub->count("--rt-init")) run_cfg.rt.rt_init = cfg.rt.rt_init;
      if (sub->count("--window-t0")) run_cfg.rt.window_t0 = cfg.rt.window_t0;
      if (sub->count("--window-tf")) run_cfg.rt.window_tf = cfg.rt.window_tf;
    }
    if (sub == simulate) {
      if (sub->count("--beta")) run_cfg.sim_params.beta = cfg.sim_params.beta;
      if (sub->count("--alpha"))
        run_cfg.sim_params.alpha = cfg.sim_params.alpha;
      if (sub->count("--N")) run_cfg.sim_params.N = cfg.sim_params.N;
      if (sub->count("--i0")) run_cfg.sim_i0 = cfg.sim_i0;
      if (sub->count("--days")) run_cfg.sim_days = cfg.sim_days;
      if (sub->count("--noise")) run_cfg.sim_noise = cfg.sim_noise;
      if (sub->count("--name")) run_cfg.sim_region = cfg.sim_region;
    }
    if (sub == report) {
      if (sub->count("--from")) run_cfg.report_source = cfg.report_source;
    }

    const AggregateResult result = sirpinn::run_experiment(run_cfg);
    print_summary(result);
    if (!result.fit_errors.empty()) return 2;
    return 0;
  } catch (const sirpinn::TrainingError& e) {
    std::fprintf(stderr, "training error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
