#include "sirpinn/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sirpinn/errors.hpp"
#include "sirpinn/pipeline.hpp"

namespace sirpinn {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string mode_name(RunMode m) {
  switch (m) {
    case RunMode::kFitSir: return "fit_sir";
    case RunMode::kFitRt: return "fit_rt";
    case RunMode::kSimulate: return "simulate";
    case RunMode::kReport: return "report";
  }
  return "unknown";
}

RunMode mode_from_name(const std::string& s) {
  if (s == "fit_sir") return RunMode::kFitSir;
  if (s == "fit_rt") return RunMode::kFitRt;
  if (s == "simulate") return RunMode::kSimulate;
  if (s == "report") return RunMode::kReport;
  throw ParseError("unknown mode '" + s + "'");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string correlations_json(const AggregateResult& result) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CorrelationEntry& c : result.correlations)
    arr.push_back({{"pair", c.pair}, {"r", c.r}, {"p", c.p}, {"n", c.n}});
  return arr.dump(2) + "\n";
}

}  // namespace

std::map<std::string, RegionMeta> load_region_metadata(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open region metadata '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError("'" + path + "': empty file");
  auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
  };
  line = strip(line);
  const bool with_alpha = line == "region,population,vaccination_pct,alpha_exp";
  if (!with_alpha && line != "region,population,vaccination_pct")
    throw ParseError("'" + path +
                     "': header must be region,population,vaccination_pct"
                     "[,alpha_exp]");

  std::map<std::string, RegionMeta> out;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string region, pop, vacc, alpha;
    if (!std::getline(ss, region, ',') || !std::getline(ss, pop, ','))
      throw ParseError("line " + std::to_string(lineno) + ": too few fields");
    std::getline(ss, vacc, ',');
    if (with_alpha) std::getline(ss, alpha, ',');
    RegionMeta meta;
    try {
      meta.population = std::stod(pop);
      if (!vacc.empty()) meta.vaccination_pct = std::stod(vacc);
      if (!alpha.empty()) meta.alpha_exp = std::stod(alpha);
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno) + ": bad number");
    }
    if (meta.population <= 0.0)
      throw ValidationError("line " + std::to_string(lineno) +
                            ": population must be positive");
    if (meta.vaccination_pct &&
        (*meta.vaccination_pct < 0 || *meta.vaccination_pct > 100))
      throw ValidationError("line " + std::to_string(lineno) +
                            ": vaccination_pct outside [0,100]");
    if (!out.emplace(region, meta).second)
      throw ValidationError("line " + std::to_string(lineno) +
                            ": duplicate region '" + region + "'");
  }
  return out;
}

double metric_mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double acc = 0.0;
  for (const double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double metric_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = metric_mean(v);
  double acc = 0.0;
  for (const double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

std::string file_token(const std::string& region) {
  std::string out;
  for (const char c : region) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += c;
    else if (!out.empty() && out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "region" : out;
}

std::vector<std::string> emit_report(const AggregateResult& result,
                                     ReportFormat format,
                                     const std::string& output_dir) {
  if (result.regions.empty())
    throw InputError("emit_report: no regions to report");
  std::filesystem::create_directories(output_dir);
  const std::string dir = output_dir + "/";
  std::vector<std::string> written;

  if (format == ReportFormat::kJson) {
    const std::string path = dir + "runs.json";
    write_file(path, aggregate_to_json(result));
    written.push_back(path);
  } else if (result.mode == RunMode::kFitSir) {
    std::ostringstream csv;
    csv << "region,population,vaccination_pct,alpha_mean,alpha_std,"
           "beta_mean,beta_std\n";
    for (const RegionAggregate& reg : result.regions) {
      const auto& a = reg.runs.at("alpha_hat");
      const auto& b = reg.runs.at("beta_hat");
      csv << reg.region << ',' << fmt(reg.N) << ','
          << (reg.vaccination_pct ? fmt(*reg.vaccination_pct) : "") << ','
          << fmt(metric_mean(a)) << ',' << fmt(metric_std(a)) << ','
          << fmt(metric_mean(b)) << ',' << fmt(metric_std(b)) << '\n';
    }
    const std::string path = dir + "params.csv";
    write_file(path, csv.str());
    written.push_back(path);
  } else if (result.mode == RunMode::kFitRt) {
    std::ostringstream csv;
    csv << "region,alpha_used,days_above_one_mean,days_above_one_std,"
           "peak_rt_mean,peak_rt_std\n";
    for (const RegionAggregate& reg : result.regions) {
      const auto& d = reg.runs.at("days_above_one");
      const auto& p = reg.runs.at("peak_rt");
      csv << reg.region << ','
          << (reg.alpha_used ? fmt(*reg.alpha_used) : "") << ','
          << fmt(metric_mean(d)) << ',' << fmt(metric_std(d)) << ','
          << fmt(metric_mean(p)) << ',' << fmt(metric_std(p)) << '\n';
    }
    const std::string path = dir + "rt_summary.csv";
    write_file(path, csv.str());
    written.push_back(path);

    for (const RegionAggregate& reg : result.regions) {
      if (reg.rt_mean.empty()) continue;
      std::ostringstream series;
      series << "date,day,rt_mean,rt_std\n";
      for (std::size_t k = 0; k < reg.rt_mean.size(); ++k) {
        series << (k < reg.dates.size() ? reg.dates[k] : "") << ',' << k << ','
               << fmt(reg.rt_mean[k]) << ',' << fmt(reg.rt_std[k]) << '\n';
      }
      const std::string path2 = dir + "rt_series_" + file_token(reg.region) +
                                ".csv";
      write_file(path2, series.str());
      written.push_back(path2);
    }
  }

  if (!result.correlations.empty()) {
    const std::string path = dir + "correlations.json";
    write_file(path, correlations_json(result));
    written.push_back(path);
  }
  return written;
}

std::string aggregate_to_json(const AggregateResult& result) {
  nlohmann::json j;
  j["mode"] = mode_name(result.mode);
  nlohmann::json regions = nlohmann::json::array();
  for (const RegionAggregate& reg : result.regions) {
    nlohmann::json r;
    r["region"] = reg.region;
    r["N"] = reg.N;
    if (reg.vaccination_pct) r["vaccination_pct"] = *reg.vaccination_pct;
    if (reg.alpha_used) r["alpha_used"] = *reg.alpha_used;
    r["runs"] = reg.runs;
    if (!reg.dates.empty()) r["dates"] = reg.dates;
    if (!reg.rt_mean.empty()) {
      r["rt_mean"] = reg.rt_mean;
      r["rt_std"] = reg.rt_std;
    }
    regions.push_back(std::move(r));
  }
  j["regions"] = std::move(regions);
  nlohmann::json corr = nlohmann::json::array();
  for (const CorrelationEntry& c : result.correlations)
    corr.push_back({{"pair", c.pair}, {"r", c.r}, {"p", c.p}, {"n", c.n}});
  j["correlations"] = std::move(corr);
  j["warnings"] = result.warnings;
  j["fit_errors"] = result.fit_errors;
  return j.dump(2) + "\n";
}

AggregateResult aggregate_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("runs JSON: ") + e.what());
  }
  AggregateResult out;
  try {
    out.mode = mode_from_name(j.at("mode").get<std::string>());
    for (const auto& r : j.at("regions")) {
      RegionAggregate reg;
      reg.region = r.at("region").get<std::string>();
      reg.N = r.at("N").get<double>();
      if (r.contains("vaccination_pct"))
        reg.vaccination_pct = r["vaccination_pct"].get<double>();
      if (r.contains("alpha_used"))
        reg.alpha_used = r["alpha_used"].get<double>();
      reg.runs =
          r.at("runs").get<std::map<std::string, std::vector<double>>>();
      if (r.contains("dates"))
        reg.dates = r["dates"].get<std::vector<std::string>>();
      if (r.contains("rt_mean")) {
        reg.rt_mean = r["rt_mean"].get<std::vector<double>>();
        reg.rt_std = r["rt_std"].get<std::vector<double>>();
      }
      out.regions.push_back(std::move(reg));
    }
    for (const auto& c : j.at("correlations")) {
      out.correlations.push_back({c.at("pair").get<std::string>(),
                                  c.at("r").get<double>(),
                                  c.at("p").get<double>(),
                                  c.at("n").get<long>()});
    }
    out.warnings = j.at("warnings").get<std::vector<std::string>>();
    out.fit_errors = j.at("fit_errors").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("runs JSON: ") + e.what());
  }
  return out;
}

AggregateResult load_aggregate_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open runs JSON '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return aggregate_from_json(ss.str());
}

}  // namespace sirpinn
