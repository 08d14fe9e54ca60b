#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sirpinn/sir.hpp"

namespace sirpinn {

/// One line of an ingested case CSV.
struct RawCaseRecord {
  std::string date;  // ISO-8601 calendar date
  std::string region;
  double new_cases = 0.0;
  double new_deaths = 0.0;
};

struct ParseReport {
  std::vector<std::string> warnings;  // one entry per gap day filled
};

/// Preprocessed observation set for one region: raw daily counts plus the
/// metadata the solvers and reports need. Solvers normalize internally.
struct RegionDataset {
  std::string region_name;
  double N = 0.0;
  std::vector<std::string> dates;  // uniform daily, ISO-8601
  CompartmentSeries series;        // raw counts
  std::optional<double> vaccination_pct;
  std::optional<double> alpha_exp;  // recovery rate from a previous SIR fit

  void validate() const;  // throws ValidationError
};

// ---- calendar helpers (proleptic Gregorian) ----
// days since 1970-01-01; throws ParseError on malformed dates
long iso_to_days(const std::string& iso);
std::string days_to_iso(long days);

/// Parse `date,region,new_cases,new_deaths` CSV. Records come back sorted
/// by (region, date) with missing interior days filled by zero-count rows;
/// each filled day adds one warning to the report.
std::vector<RawCaseRecord> load_case_csv(const std::string& path,
                                         ParseReport* report = nullptr);

/// FIFO recovery queue: a day's new cases stay infectious for
/// recovery_days days, then move to R. Deaths remove the oldest queued
/// members on their report date (and count toward R immediately). i0 enters
/// the queue on day 0. Conservation I(t)+R(t) = i0 + cumulative cases holds
/// exactly by construction, with S = N - I - R.
CompartmentSeries recovery_queue(std::span<const double> new_cases,
                                 std::span<const double> new_deaths,
                                 int recovery_days, double N, double i0,
                                 std::vector<std::string>* warnings = nullptr);

/// Appendix-style reconstruction when only I is observed: R integrated
/// forward by the trapezoidal rule from dR/dt = alpha*I with R(0)=0, then
/// S = N - I - R. i0 must match the first sample. Throws ValidationError
/// if any reconstructed S is negative.
CompartmentSeries derive_susceptible_removed(const std::vector<double>& I,
                                             double alpha, double N,
                                             double i0);

/// Synthetic dataset factory around the RK4 simulator. noise_std > 0 adds
/// multiplicative Gaussian noise to I (S re-derived so S+I+R = N stays
/// exact); noise_std = 0 returns the oracle trajectory unchanged.
RegionDataset synth_generate(const SirParams& params, double i0, int days,
                             double noise_std, std::uint64_t seed,
                             const std::string& region_name = "synthetic",
                             const std::string& start_date = "2020-01-01");

/// records -> one region's dataset: select region and [start_date, end_date]
/// window, seed i0 with the start date's new cases, run the recovery queue.
RegionDataset build_dataset(const std::vector<RawCaseRecord>& records,
                            const std::string& region,
                            const std::string& start_date,
                            const std::string& end_date, double N,
                            int recovery_days,
                            std::vector<std::string>* warnings = nullptr);

// JSON round-trip (fields region, N, dates, S, I, R; optional metadata)
std::string dataset_to_json(const RegionDataset& ds);
RegionDataset dataset_from_json(const std::string& text);
RegionDataset load_dataset_json(const std::string& path);
void save_dataset_json(const RegionDataset& ds, const std::string& path);

}  // namespace sirpinn
