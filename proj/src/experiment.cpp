#include "sirpinn/experiment.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sirpinn/errors.hpp"
#include "sirpinn/report.hpp"
#include "sirpinn/stats.hpp"
#include "sirpinn/svg.hpp"

namespace sirpinn {

namespace {

void check_keys(const nlohmann::json& j, const char* where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        ok = true;
        break;
      }
    if (!ok)
      throw ConfigError(std::string("config: unknown key '") + item.key() +
                        "' in " + where);
  }
}

RunMode parse_mode(const std::string& s) {
  if (s == "fit_sir") return RunMode::kFitSir;
  if (s == "fit_rt") return RunMode::kFitRt;
  if (s == "simulate") return RunMode::kSimulate;
  if (s == "report") return RunMode::kReport;
  throw ConfigError("config: unknown mode '" + s + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (repetitions < 1) throw ConfigError("config: repetitions must be >= 1");
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
  if (output_dir.empty()) throw ConfigError("config: output_dir empty");
  if (mode == RunMode::kFitSir || mode == RunMode::kFitRt) {
    if (dataset_paths.empty())
      throw ConfigError("config: fit modes need at least one dataset");
  }
  if (mode == RunMode::kReport && report_source.empty())
    throw ConfigError("config: report mode needs report_source");
  if (mode == RunMode::kSimulate) {
    sim_params.validate();
    if (sim_i0 < 0 || sim_days < 1 || sim_noise < 0)
      throw ConfigError("config: bad simulate parameters");
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }

  ExperimentConfig c;
  try {
    check_keys(j, "top level",
               {"mode", "dataset_paths", "metadata_csv", "regions",
                "repetitions", "base_seed", "workers", "output_dir", "net",
                "train", "rt", "rt_use_alpha_exp", "simulate",
                "report_source"});
    if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
    if (j.contains("dataset_paths"))
      c.dataset_paths = j["dataset_paths"].get<std::vector<std::string>>();
    if (j.contains("metadata_csv"))
      c.metadata_csv = j["metadata_csv"].get<std::string>();
    if (j.contains("regions"))
      c.regions = j["regions"].get<std::vector<std::string>>();
    if (j.contains("repetitions")) c.repetitions = j["repetitions"].get<int>();
    if (j.contains("base_seed"))
      c.base_seed = j["base_seed"].get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j["workers"].get<int>();
    if (j.contains("output_dir"))
      c.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("rt_use_alpha_exp"))
      c.rt_use_alpha_exp = j["rt_use_alpha_exp"].get<bool>();
    if (j.contains("report_source"))
      c.report_source = j["report_source"].get<std::string>();

    if (j.contains("net")) {
      const auto& n = j["net"];
      check_keys(n, "net",
                 {"output_dim", "hidden_layers", "hidden_width", "activation",
                  "seed"});
      if (n.contains("output_dim")) c.net.output_dim = n["output_dim"];
      if (n.contains("hidden_layers")) c.net.hidden_layers = n["hidden_layers"];
      if (n.contains("hidden_width")) c.net.hidden_width = n["hidden_width"];
      if (n.contains("seed")) c.net.seed = n["seed"].get<std::uint64_t>();
      if (n.contains("activation")) {
        const std::string a = n["activation"].get<std::string>();
        if (a == "tanh")
          c.net.activation = Activation::kTanh;
        else if (a == "relu")
          c.net.activation = Activation::kRelu;
        else
          throw ConfigError("config: unknown activation '" + a + "'");
      }
    }
    if (j.contains("train")) {
      const auto& t = j["train"];
      check_keys(t, "train",
                 {"iterations", "initial_lr", "lr_schedule_power",
                  "data_loss_weight", "physics_loss_weight",
                  "stage1_iterations"});
      if (t.contains("iterations")) c.train.iterations = t["iterations"];
      if (t.contains("initial_lr")) c.train.initial_lr = t["initial_lr"];
      if (t.contains("lr_schedule_power"))
        c.train.lr_schedule_power = t["lr_schedule_power"];
      if (t.contains("data_loss_weight"))
        c.train.data_loss_weight = t["data_loss_weight"];
      if (t.contains("physics_loss_weight"))
        c.train.physics_loss_weight = t["physics_loss_weight"];
      if (t.contains("stage1_iterations"))
        c.train.stage1_iterations = t["stage1_iterations"];
    }
    if (j.contains("rt")) {
      const auto& r = j["rt"];
      check_keys(r, "rt",
                 {"alpha", "w0", "w1", "stage1_iters", "stage2_iters",
                  "window_t0", "window_tf", "rt_init", "initial_lr",
                  "lr_power"});
      if (r.contains("alpha")) c.rt.alpha = r["alpha"];
      if (r.contains("w0")) c.rt.w0 = r["w0"];
      if (r.contains("w1")) c.rt.w1 = r["w1"];
      if (r.contains("stage1_iters")) c.rt.stage1_iters = r["stage1_iters"];
      if (r.contains("stage2_iters")) c.rt.stage2_iters = r["stage2_iters"];
      if (r.contains("window_t0")) c.rt.window_t0 = r["window_t0"];
      if (r.contains("window_tf")) c.rt.window_tf = r["window_tf"];
      if (r.contains("rt_init")) c.rt.rt_init = r["rt_init"];
      if (r.contains("initial_lr")) c.rt.initial_lr = r["initial_lr"];
      if (r.contains("lr_power")) c.rt.lr_power = r["lr_power"];
    }
    if (j.contains("simulate")) {
      const auto& s = j["simulate"];
      check_keys(s, "simulate",
                 {"alpha", "beta", "N", "i0", "days", "noise", "region"});
      if (s.contains("alpha")) c.sim_params.alpha = s["alpha"];
      if (s.contains("beta")) c.sim_params.beta = s["beta"];
      if (s.contains("N")) c.sim_params.N = s["N"];
      if (s.contains("i0")) c.sim_i0 = s["i0"];
      if (s.contains("days")) c.sim_days = s["days"];
      if (s.contains("noise")) c.sim_noise = s["noise"];
      if (s.contains("region")) c.sim_region = s["region"].get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

namespace {

struct FitJob {
  int region_idx;
  int rep;
  std::uint64_t seed;
};

struct FitOutcome {
  bool ok = false;
  std::string error;
  SirFitResult sir;
  RtFitResult rt;
};

AggregateResult run_fits(const ExperimentConfig& config,
                         const std::vector<RegionDataset>& datasets) {
  AggregateResult result;
  result.mode = config.mode;

  std::vector<FitJob> jobs;
  for (int r = 0; r < static_cast<int>(datasets.size()); ++r)
    for (int k = 0; k < config.repetitions; ++k)
      jobs.push_back({r, k, config.base_seed + static_cast<std::uint64_t>(k)});
  std::vector<FitOutcome> outcomes(jobs.size());

  auto run_one = [&](const FitJob& job) {
    FitOutcome out;
    const RegionDataset& ds = datasets[job.region_idx];
    try {
      NetworkConfig net = config.net;
      net.seed = job.seed;
      if (config.mode == RunMode::kFitSir) {
        net.output_dim = 3;
        out.sir = fit_sir(ds, net, config.train);
      } else {
        net.output_dim = 2;
        RtFitConfig rt = config.rt;
        if (config.rt_use_alpha_exp) {
          if (!ds.alpha_exp)
            throw ConfigError("dataset '" + ds.region_name +
                              "' has no alpha_exp");
          rt.alpha = *ds.alpha_exp;
        }
        out.rt = fit_rt(ds, rt, net);
      }
      out.ok = true;
    } catch (const std::exception& e) {
      out.error = "region " + ds.region_name + " seed " +
                  std::to_string(job.seed) + ": " + e.what();
    }
    return out;
  };

  if (config.workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i)
      outcomes[i] = run_one(jobs[i]);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        outcomes[i] = run_one(jobs[i]);
      }
    };
    std::vector<std::thread> pool;
    const int n_threads =
        std::min<int>(config.workers, static_cast<int>(jobs.size()));
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // aggregate in (region, repetition) order regardless of completion order
  for (int r = 0; r < static_cast<int>(datasets.size()); ++r) {
    const RegionDataset& ds = datasets[r];
    RegionAggregate reg;
    reg.region = ds.region_name;
    reg.N = ds.N;
    reg.vaccination_pct = ds.vaccination_pct;

    std::vector<const FitOutcome*> ok_runs;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      if (jobs[i].region_idx != r) continue;
      const FitOutcome& out = outcomes[i];
      if (!out.ok) {
        result.fit_errors.push_back(out.error);
        continue;
      }
      ok_runs.push_back(&out);
      if (config.mode == RunMode::kFitSir) {
        reg.runs["alpha_hat"].push_back(out.sir.alpha_hat);
        reg.runs["beta_hat"].push_back(out.sir.beta_hat);
        reg.runs["final_data_loss"].push_back(out.sir.final_data_loss);
        reg.runs["final_physics_loss"].push_back(out.sir.final_physics_loss);
        reg.runs["seed"].push_back(static_cast<double>(out.sir.seed));
        if (out.sir.degenerate)
          result.warnings.push_back("region " + ds.region_name + " seed " +
                                    std::to_string(out.sir.seed) +
                                    ": degenerate data, rates unidentifiable");
        if (out.sir.negative_rate)
          result.warnings.push_back("region " + ds.region_name + " seed " +
                                    std::to_string(out.sir.seed) +
                                    ": negative fitted rate");
      } else {
        reg.alpha_used = out.rt.series.alpha_used;
        reg.runs["days_above_one"].push_back(
            static_cast<double>(out.rt.summary.days_above_one));
        reg.runs["peak_rt"].push_back(out.rt.summary.peak_rt);
        reg.runs["stage1_data_loss"].push_back(out.rt.stage1_data_loss);
        reg.runs["final_data_loss"].push_back(out.rt.final_data_loss);
        reg.runs["final_physics_loss"].push_back(out.rt.final_physics_loss);
        reg.runs["seed"].push_back(static_cast<double>(out.rt.seed));
        if (out.rt.degenerate)
          result.warnings.push_back("region " + ds.region_name + " seed " +
                                    std::to_string(out.rt.seed) +
                                    ": no infections in the fit window");
      }
    }

    if (config.mode == RunMode::kFitRt && !ok_runs.empty()) {
      const std::size_t W = ok_runs.front()->rt.series.rt.size();
      const long t0 = static_cast<long>(ok_runs.front()->rt.series.t.front());
      reg.rt_mean.resize(W);
      reg.rt_std.resize(W);
      std::vector<double> day(ok_runs.size());
      for (std::size_t k = 0; k < W; ++k) {
        for (std::size_t i = 0; i < ok_runs.size(); ++i)
          day[i] = ok_runs[i]->rt.series.rt[k];
        reg.rt_mean[k] = metric_mean(day);
        reg.rt_std[k] = metric_std(day);
      }
      for (std::size_t k = 0; k < W; ++k) {
        const std::size_t idx = static_cast<std::size_t>(t0) + k;
        reg.dates.push_back(idx < ds.dates.size() ? ds.dates[idx] : "");
      }
    }
    result.regions.push_back(std::move(reg));
  }
  return result;
}

void add_correlations(AggregateResult& result) {
  const bool sir = result.mode == RunMode::kFitSir;
  const std::vector<std::string> metrics =
      sir ? std::vector<std::string>{"alpha_hat", "beta_hat"}
          : std::vector<std::string>{"days_above_one", "peak_rt"};

  std::vector<double> vacc;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < result.regions.size(); ++i) {
    if (result.regions[i].vaccination_pct &&
        !result.regions[i].runs.empty()) {
      vacc.push_back(*result.regions[i].vaccination_pct);
      idx.push_back(i);
    }
  }
  if (vacc.size() < 3) return;

  for (const std::string& metric : metrics) {
    std::vector<double> x;
    x.reserve(idx.size());
    bool have_all = true;
    for (const std::size_t i : idx) {
      const auto it = result.regions[i].runs.find(metric);
      if (it == result.regions[i].runs.end() || it->second.empty()) {
        have_all = false;
        break;
      }
      x.push_back(metric_mean(it->second));
    }
    if (!have_all) continue;
    try {
      const Correlation c = pearson(x, vacc);
      result.correlations.push_back({metric + "_vs_vaccination_pct", c.r, c.p,
                                     static_cast<long>(x.size())});
    } catch (const StatsError& e) {
      result.warnings.push_back("correlation " + metric +
                                "_vs_vaccination_pct skipped: " + e.what());
    }
  }
}

}  // namespace

AggregateResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  if (config.mode == RunMode::kReport) {
    AggregateResult result = load_aggregate_json(config.report_source);
    emit_report(result, ReportFormat::kCsv, config.output_dir);
    emit_report(result, ReportFormat::kJson, config.output_dir);
    return result;
  }

  if (config.mode == RunMode::kSimulate) {
    RegionDataset ds =
        synth_generate(config.sim_params, config.sim_i0, config.sim_days,
                       config.sim_noise, config.base_seed, config.sim_region);
    const std::string token = file_token(ds.region_name);
    save_dataset_json(ds, config.output_dir + "/dataset_" + token + ".json");
    emit_plot(ds.series, {}, config.output_dir + "/compartments_" + token +
                                 ".svg",
              ds.region_name);
    AggregateResult result;
    result.mode = RunMode::kSimulate;
    RegionAggregate reg;
    reg.region = ds.region_name;
    reg.N = ds.N;
    result.regions.push_back(std::move(reg));
    return result;
  }

  // fit modes
  std::map<std::string, RegionMeta> meta;
  if (!config.metadata_csv.empty())
    meta = load_region_metadata(config.metadata_csv);

  std::vector<RegionDataset> datasets;
  for (const std::string& path : config.dataset_paths) {
    RegionDataset ds = load_dataset_json(path);
    const auto it = meta.find(ds.region_name);
    if (it != meta.end()) {
      if (!ds.vaccination_pct) ds.vaccination_pct = it->second.vaccination_pct;
      if (!ds.alpha_exp) ds.alpha_exp = it->second.alpha_exp;
    }
    datasets.push_back(std::move(ds));
  }
  if (!config.regions.empty()) {
    std::vector<RegionDataset> picked;
    for (const std::string& want : config.regions) {
      bool found = false;
      for (RegionDataset& ds : datasets) {
        if (ds.region_name == want) {
          picked.push_back(std::move(ds));
          found = true;
          break;
        }
      }
      if (!found)
        throw InputError("region '" + want + "' not among loaded datasets");
    }
    datasets = std::move(picked);
  }

  AggregateResult result = run_fits(config, datasets);
  add_correlations(result);
  emit_report(result, ReportFormat::kCsv, config.output_dir);
  emit_report(result, ReportFormat::kJson, config.output_dir);

  if (config.mode == RunMode::kFitRt) {
    for (const RegionAggregate& reg : result.regions) {
      if (reg.rt_mean.empty()) continue;
      RtSeries mean_series;
      mean_series.alpha_used = reg.alpha_used.value_or(0.0);
      for (std::size_t k = 0; k < reg.rt_mean.size(); ++k) {
        mean_series.t.push_back(static_cast<double>(k));
        mean_series.rt.push_back(reg.rt_mean[k]);
      }
      emit_plot(mean_series, {},
                config.output_dir + "/rt_series_" + file_token(reg.region) +
                    ".svg",
                reg.region + " Rt");
    }
  }
  return result;
}

}  // namespace sirpinn
