#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sirpinn/fit_rt.hpp"
#include "sirpinn/fit_sir.hpp"
#include "sirpinn/net.hpp"
#include "sirpinn/optim.hpp"
#include "sirpinn/pipeline.hpp"
#include "sirpinn/sir.hpp"

namespace sirpinn {

enum class RunMode { kFitSir, kFitRt, kSimulate, kReport };

struct ExperimentConfig {
  RunMode mode = RunMode::kFitSir;
  std::vector<std::string> dataset_paths;  // RegionDataset JSON files
  std::string metadata_csv;  // optional region,population,vaccination_pct
  std::vector<std::string> regions;  // empty = every loaded dataset
  int repetitions = 10;
  std::uint64_t base_seed = 1;
  int workers = 1;
  std::string output_dir = ".";

  NetworkConfig net;
  TrainConfig train;
  RtFitConfig rt;
  bool rt_use_alpha_exp = false;  // prefer dataset alpha_exp over rt.alpha

  // simulate mode
  SirParams sim_params{0.07, 0.22658, 7e7};
  double sim_i0 = 15.0;
  int sim_days = 35;
  double sim_noise = 0.0;
  std::string sim_region = "synthetic";

  std::string report_source;  // report mode: previously written runs JSON

  void validate() const;
};

/// parse the JSON form (same field names as the struct); unknown keys are
/// rejected so config typos fail loudly
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config_json(const std::string& path);

struct RegionAggregate {
  std::string region;
  double N = 0.0;
  std::optional<double> vaccination_pct;
  std::optional<double> alpha_used;  // rt mode: the fixed recovery rate
  // metric -> one value per repetition, in seed order
  std::map<std::string, std::vector<double>> runs;
  // per-day mean/std of the fitted Rt curve (rt mode)
  std::vector<std::string> dates;
  std::vector<double> rt_mean, rt_std;
};

struct CorrelationEntry {
  std::string pair;
  double r = 0.0;
  double p = 1.0;
  long n = 0;
};

struct AggregateResult {
  RunMode mode = RunMode::kFitSir;
  std::vector<RegionAggregate> regions;
  std::vector<CorrelationEntry> correlations;
  std::vector<std::string> warnings;
  std::vector<std::string> fit_errors;  // nonempty => training failure
};

double metric_mean(const std::vector<double>& v);
double metric_std(const std::vector<double>& v);  // sample std, 0 when n < 2

/// Run repetitions x regions fits (seeds base_seed + k), aggregate, and
/// write every artifact into output_dir. Dataset/config problems throw;
/// per-fit training errors are captured in fit_errors instead so one bad
/// seed cannot discard a sweep.
AggregateResult run_experiment(const ExperimentConfig& config);

}  // namespace sirpinn
