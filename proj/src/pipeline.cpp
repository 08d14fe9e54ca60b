#include "sirpinn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "sirpinn/errors.hpp"

namespace sirpinn {

namespace {

// Howard Hinnant's civil-days algorithms
long days_from_civil(long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, long& y, unsigned& m, unsigned& d) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<long>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y += m <= 2;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_count(const std::string& field, long line, const char* what) {
  double v = 0.0;
  const std::string f = trim(field);
  const char* first = f.data();
  const char* last = f.data() + f.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last)
    throw ParseError("line " + std::to_string(line) + ": bad " + what + " '" +
                     field + "'");
  if (v < 0.0)
    throw ValidationError("line " + std::to_string(line) + ": negative " +
                          what);
  return v;
}

}  // namespace

long iso_to_days(const std::string& iso) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-' ||
      std::sscanf(iso.c_str(), "%4d-%2u-%2u", &y, &m, &d) != 3)
    throw ParseError("bad ISO date '" + iso + "'");
  const long days = days_from_civil(y, m, d);
  if (days_to_iso(days) != iso)  // rejects 2021-02-30 and friends
    throw ParseError("invalid calendar date '" + iso + "'");
  return days;
}

std::string days_to_iso(long days) {
  long y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04ld-%02u-%02u", y, m, d);
  return buf;
}

void RegionDataset::validate() const {
  const std::size_t n = dates.size();
  if (n == 0) throw ValidationError("dataset '" + region_name + "' is empty");
  if (series.size() != n || series.S.size() != n || series.I.size() != n ||
      series.R.size() != n)
    throw ValidationError("dataset '" + region_name + "': ragged series");
  if (!(N > 0.0))
    throw ValidationError("dataset '" + region_name + "': population not set");
  long prev = iso_to_days(dates.front());
  for (std::size_t k = 1; k < n; ++k) {
    const long cur = iso_to_days(dates[k]);
    if (cur != prev + 1)
      throw ValidationError("dataset '" + region_name +
                            "': dates not uniform daily at " + dates[k]);
    prev = cur;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (series.S[k] < 0 || series.I[k] < 0 || series.R[k] < 0)
      throw ValidationError("dataset '" + region_name +
                            "': negative compartment at " + dates[k]);
    if (std::abs(series.S[k] + series.I[k] + series.R[k] - N) > 1e-6 * N)
      throw ValidationError("dataset '" + region_name +
                            "': S+I+R != N at " + dates[k]);
  }
  if (vaccination_pct && (*vaccination_pct < 0 || *vaccination_pct > 100))
    throw ValidationError("dataset '" + region_name +
                          "': vaccination_pct outside [0,100]");
}

std::vector<RawCaseRecord> load_case_csv(const std::string& path,
                                         ParseReport* report) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open case CSV '" + path + "'");

  std::string line;
  long lineno = 0;
  if (!std::getline(in, line))
    throw ParseError("'" + path + "': empty file");
  ++lineno;
  if (trim(line) != "date,region,new_cases,new_deaths")
    throw ParseError("'" + path +
                     "': header must be date,region,new_cases,new_deaths");

  std::vector<RawCaseRecord> recs;
  std::vector<long> rec_days;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != 4)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 4 comma-separated fields");
    RawCaseRecord r;
    r.date = trim(f[0]);
    try {
      rec_days.push_back(iso_to_days(r.date));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    r.region = trim(f[1]);
    if (r.region.empty())
      throw ParseError("line " + std::to_string(lineno) + ": empty region");
    r.new_cases = parse_count(f[2], lineno, "new_cases");
    r.new_deaths = parse_count(f[3], lineno, "new_deaths");
    recs.push_back(std::move(r));
  }

  // sort by (region, date)
  std::vector<std::size_t> order(recs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (recs[a].region != recs[b].region)
                       return recs[a].region < recs[b].region;
                     return rec_days[a] < rec_days[b];
                   });

  std::vector<RawCaseRecord> out;
  out.reserve(recs.size());
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    const RawCaseRecord& r = recs[order[idx]];
    const long day = rec_days[order[idx]];
    if (!out.empty() && out.back().region == r.region) {
      const long prev = iso_to_days(out.back().date);
      if (day == prev)
        throw ValidationError("region " + r.region + ": duplicate date " +
                              r.date);
      for (long g = prev + 1; g < day; ++g) {
        out.push_back({days_to_iso(g), r.region, 0.0, 0.0});
        if (report)
          report->warnings.push_back("region " + r.region +
                                     ": filled missing day " + days_to_iso(g) +
                                     " with zero counts");
      }
    }
    out.push_back(r);
  }
  return out;
}

CompartmentSeries recovery_queue(std::span<const double> new_cases,
                                 std::span<const double> new_deaths,
                                 int recovery_days, double N, double i0,
                                 std::vector<std::string>* warnings) {
  if (new_cases.size() != new_deaths.size())
    throw InputError("recovery_queue: cases/deaths length mismatch");
  if (new_cases.empty()) throw InputError("recovery_queue: empty input");
  if (recovery_days < 1) throw InputError("recovery_queue: recovery_days < 1");
  if (!(N > 0.0)) throw InputError("recovery_queue: population must be > 0");
  if (i0 < 0.0) throw InputError("recovery_queue: negative i0");

  struct Cohort {
    double count;
    long day_in;
  };
  std::deque<Cohort> queue;
  double in_queue = 0.0;   // = I(t)
  double removed = 0.0;    // = R(t): expired + died
  double cum_cases = 0.0;

  CompartmentSeries out;
  out.N = N;
  const long n = static_cast<long>(new_cases.size());
  for (long t = 0; t < n; ++t) {
    // cohorts entering on day d stay infectious through day d+recovery_days-1
    while (!queue.empty() && t - queue.front().day_in >= recovery_days) {
      in_queue -= queue.front().count;
      removed += queue.front().count;
      queue.pop_front();
    }

    double entering = new_cases[t];
    if (entering < 0.0) throw InputError("recovery_queue: negative cases");
    if (t == 0) entering += i0;
    cum_cases += new_cases[t];
    if (i0 + cum_cases > N)
      throw ValidationError(
          "recovery_queue: cumulative cases and deaths exceed population at "
          "day " +
          std::to_string(t));
    if (entering > 0.0) {
      queue.push_back({entering, t});
      in_queue += entering;
    }

    double deaths = new_deaths[t];
    if (deaths < 0.0) throw InputError("recovery_queue: negative deaths");
    if (deaths > in_queue) {
      if (warnings)
        warnings->push_back("day " + std::to_string(t) + ": " +
                            std::to_string(deaths - in_queue) +
                            " deaths exceed the infectious queue; capped");
      deaths = in_queue;
    }
    double remaining = deaths;
    while (remaining > 0.0 && !queue.empty()) {
      Cohort& oldest = queue.front();
      const double take = std::min(oldest.count, remaining);
      oldest.count -= take;
      in_queue -= take;
      removed += take;
      remaining -= take;
      if (oldest.count <= 0.0) queue.pop_front();
    }

    out.t.push_back(static_cast<double>(t));
    out.I.push_back(in_queue);
    out.R.push_back(removed);
    out.S.push_back(N - in_queue - removed);
  }
  return out;
}

CompartmentSeries derive_susceptible_removed(const std::vector<double>& I,
                                             double alpha, double N,
                                             double i0) {
  if (I.empty()) throw InputError("derive_susceptible_removed: empty I series");
  if (!(alpha >= 0.0) || !(N > 0.0))
    throw InputError("derive_susceptible_removed: bad alpha or N");
  if (std::abs(I.front() - i0) > 1e-9 * std::max(1.0, std::abs(i0)))
    throw InputError(
        "derive_susceptible_removed: i0 does not match the first I sample");

  CompartmentSeries out;
  out.N = N;
  double R = 0.0;
  for (std::size_t k = 0; k < I.size(); ++k) {
    if (I[k] < 0.0)
      throw InputError("derive_susceptible_removed: negative I sample");
    if (k > 0) R += 0.5 * alpha * (I[k - 1] + I[k]);
    const double S = N - I[k] - R;
    if (S < 0.0)
      throw ValidationError(
          "derive_susceptible_removed: reconstructed S negative at day " +
          std::to_string(k));
    out.t.push_back(static_cast<double>(k));
    out.S.push_back(S);
    out.I.push_back(I[k]);
    out.R.push_back(R);
  }
  return out;
}

RegionDataset synth_generate(const SirParams& params, double i0, int days,
                             double noise_std, std::uint64_t seed,
                             const std::string& region_name,
                             const std::string& start_date) {
  if (noise_std < 0.0) throw InputError("synth_generate: negative noise_std");
  CompartmentSeries sim =
      sir_rk4_simulate(params, params.N - i0, i0, 0.0, days, 10);

  if (noise_std > 0.0) {
    std::mt19937_64 eng(seed);
    auto uniform01 = [&eng]() {  // in (0,1), never 0
      return ((eng() >> 11) + 0.5) * 0x1.0p-53;
    };
    for (std::size_t k = 0; k < sim.size(); ++k) {
      const double u1 = uniform01();
      const double u2 = uniform01();
      const double z =
          std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      sim.I[k] = std::max(0.0, sim.I[k] * (1.0 + noise_std * z));
      sim.S[k] = params.N - sim.I[k] - sim.R[k];
    }
  }

  RegionDataset ds;
  ds.region_name = region_name;
  ds.N = params.N;
  const long day0 = iso_to_days(start_date);
  for (std::size_t k = 0; k < sim.size(); ++k)
    ds.dates.push_back(days_to_iso(day0 + static_cast<long>(k)));
  ds.series = std::move(sim);
  return ds;
}

RegionDataset build_dataset(const std::vector<RawCaseRecord>& records,
                            const std::string& region,
                            const std::string& start_date,
                            const std::string& end_date, double N,
                            int recovery_days,
                            std::vector<std::string>* warnings) {
  const long d0 = iso_to_days(start_date);
  const long d1 = iso_to_days(end_date);
  if (d1 < d0) throw InputError("build_dataset: end date before start date");

  const std::size_t n = static_cast<std::size_t>(d1 - d0 + 1);
  std::vector<double> cases(n, 0.0), deaths(n, 0.0);
  std::vector<bool> seen(n, false);
  bool any_region = false;
  for (const RawCaseRecord& r : records) {
    if (r.region != region) continue;
    any_region = true;
    const long d = iso_to_days(r.date);
    if (d < d0 || d > d1) continue;
    const std::size_t k = static_cast<std::size_t>(d - d0);
    cases[k] = r.new_cases;
    deaths[k] = r.new_deaths;
    seen[k] = true;
  }
  if (!any_region)
    throw InputError("build_dataset: no records for region '" + region + "'");
  for (std::size_t k = 0; k < n; ++k)
    if (!seen[k])
      throw ValidationError("build_dataset: region '" + region +
                            "' has no record for " + days_to_iso(d0 + (long)k));

  RegionDataset ds;
  ds.region_name = region;
  ds.N = N;
  // the start day's reported cases are the initial infectious pool; zero the
  // slot so the queue does not count them as a second day-0 arrival
  const double i0 = cases[0];
  cases[0] = 0.0;
  ds.series = recovery_queue(cases, deaths, recovery_days, N, i0, warnings);
  for (long d = d0; d <= d1; ++d) ds.dates.push_back(days_to_iso(d));
  ds.validate();
  return ds;
}

std::string dataset_to_json(const RegionDataset& ds) {
  nlohmann::json j;
  j["region"] = ds.region_name;
  j["N"] = ds.N;
  j["dates"] = ds.dates;
  j["S"] = ds.series.S;
  j["I"] = ds.series.I;
  j["R"] = ds.series.R;
  if (ds.vaccination_pct) j["vaccination_pct"] = *ds.vaccination_pct;
  if (ds.alpha_exp) j["alpha_exp"] = *ds.alpha_exp;
  return j.dump(2);
}

RegionDataset dataset_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dataset JSON: ") + e.what());
  }
  RegionDataset ds;
  try {
    ds.region_name = j.at("region").get<std::string>();
    ds.N = j.at("N").get<double>();
    ds.dates = j.at("dates").get<std::vector<std::string>>();
    ds.series.S = j.at("S").get<std::vector<double>>();
    ds.series.I = j.at("I").get<std::vector<double>>();
    ds.series.R = j.at("R").get<std::vector<double>>();
    if (j.contains("vaccination_pct"))
      ds.vaccination_pct = j["vaccination_pct"].get<double>();
    if (j.contains("alpha_exp")) ds.alpha_exp = j["alpha_exp"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dataset JSON: ") + e.what());
  }
  ds.series.N = ds.N;
  for (std::size_t k = 0; k < ds.dates.size(); ++k)
    ds.series.t.push_back(static_cast<double>(k));
  ds.validate();
  return ds;
}

RegionDataset load_dataset_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return dataset_from_json(ss.str());
}

void save_dataset_json(const RegionDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write dataset '" + path + "'");
  out << dataset_to_json(ds) << '\n';
  if (!out) throw IoError("failed writing dataset '" + path + "'");
}

}  // namespace sirpinn
