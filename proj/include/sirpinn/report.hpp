#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sirpinn/experiment.hpp"

namespace sirpinn {

struct RegionMeta {
  double population = 0.0;
  std::optional<double> vaccination_pct;
  std::optional<double> alpha_exp;
};

/// `region,population,vaccination_pct[,alpha_exp]` CSV keyed by region.
std::map<std::string, RegionMeta> load_region_metadata(
    const std::string& path);

enum class ReportFormat { kCsv, kJson };

/// Write the mode's tables (params.csv or rt_summary.csv plus
/// rt_series_<region>.csv) or the raw per-run JSON (runs.json), and
/// correlations.json when correlations exist. Column order is fixed and
/// numbers are printed with a fixed format, so identical results give
/// byte-identical files. Returns the written paths.
std::vector<std::string> emit_report(const AggregateResult& result,
                                     ReportFormat format,
                                     const std::string& output_dir);

// runs.json round-trip (report mode re-emits tables from a previous sweep)
std::string aggregate_to_json(const AggregateResult& result);
AggregateResult aggregate_from_json(const std::string& text);
AggregateResult load_aggregate_json(const std::string& path);

/// sanitize a region name for use inside a file name
std::string file_token(const std::string& region);

}  // namespace sirpinn
