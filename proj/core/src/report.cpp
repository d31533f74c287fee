// Copyright 2026 The mesolead Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mesolead/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mesolead {

namespace {

using nlohmann::json;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
  auto out = open(path);
  out << j.dump(2) << '\n';
}

json finite(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json config_json(const ExperimentConfig& c) {
  json j;
  j["system"] = {{"epsilon", c.epsilon}};
  j["lead"] = {{"T", c.lead.temperature},      {"mu", c.lead.mu},
               {"omega_max", c.lead.omega_max}, {"Gamma", c.lead.gamma},
               {"L", c.lead.modes},             {"Lambda_plus", c.lead.lambda_plus},
               {"Lambda_minus", c.lead.lambda_minus}};
  j["protocol"] = {{"tau", c.tau}, {"tau_eq", c.tau_eq}};
  if (c.epsilon_tau) j["protocol"]["epsilon_tau"] = *c.epsilon_tau;
  j["run"] = {{"rtol", c.rtol}, {"atol", c.atol}};
  return j;
}

json run_json(const RunOptions& o) {
  return {{"seed", o.seed}, {"trajectories", o.trajectories}, {"rtol", o.ode.rtol}, {"atol", o.ode.atol}};
}

json series_json(const SampleSeries& s, std::size_t bins) {
  const RunningStats& st = s.stats();
  const Histogram h = make_histogram(s.values(), bins);
  json j{{"count", st.count()},
         {"mean", st.mean()},
         {"variance", st.variance()},
         {"se", st.standard_error()},
         {"min", st.min()},
         {"max", st.max()},
         {"histogram", {{"bins", h.counts.size()}, {"width", h.edges.size() > 1 ? h.edges[1] - h.edges[0] : 0.0}}}};
  return j;
}

json ift_json(const IftEstimator& e) {
  return {{"count", e.count()}, {"mean_exp", e.mean_exp()}, {"se_exp", finite(e.se_exp())},
          {"mean", e.mean()},   {"se", finite(e.se())}};
}

void write_series_files(const std::filesystem::path& out, const std::string& name, const SampleSeries& s,
                        std::size_t bins, bool exponential) {
  write_histogram_csv(out / ("hist_" + name + ".csv"), make_histogram(s.values(), bins));
  write_convergence_csv(out / ("convergence_" + name + ".csv"), convergence_trace(s.values(), exponential));
}

}  // namespace

std::vector<ConvergencePoint> convergence_trace(const std::vector<double>& values, bool exponential,
                                                std::size_t points) {
  std::vector<ConvergencePoint> trace;
  if (values.empty()) return trace;
  const std::size_t stride = std::max<std::size_t>(1, values.size() / std::max<std::size_t>(points, 1));
  RunningStats stats;
  for (std::size_t i = 0; i < values.size(); ++i) {
    stats.add(exponential ? std::exp(-values[i]) : values[i]);
    if ((i + 1) % stride == 0 || i + 1 == values.size()) {
      trace.push_back({stats.count(), stats.mean(), stats.standard_error()});
    }
  }
  return trace;
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& h) {
  auto out = open(path);
  out << "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out << num(h.edges[i]) << ',' << num(h.edges[i + 1]) << ',' << h.counts[i] << '\n';
  }
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergencePoint>& trace) {
  auto out = open(path);
  out << "n,estimator,se\n";
  for (const auto& p : trace) out << p.n << ',' << num(p.estimator) << ',' << num(p.se) << '\n';
}

void write_events_csv(const std::filesystem::path& path, const MeasurementRecord& record) {
  auto out = open(path);
  out << "t,k,sigma\n";
  for (const auto& e : record) out << num(e.time) << ',' << e.mode << ',' << symbol(e.direction) << '\n';
}

void write_report(const SteadyFtResult& r, const std::filesystem::path& out, std::size_t bins) {
  std::filesystem::create_directories(out);
  json j;
  j["experiment"] = "steady-ft";
  j["parameters"] = config_json(r.config);
  j["run"] = run_json(r.options);
  j["trajectories"] = r.stats.trajectories;
  j["floored"] = r.stats.floored;
  j["jumps"] = r.stats.jumps;
  j["steady_state"] = {{"dot_occupation", r.steady_covariance(0, 0).real()},
                       {"measurement_energy_rate", r.measurement_energy_rate}};
  for (const auto& [name, series] : r.stats.quantities) {
    j["quantities"][name] = series_json(series, bins);
    const bool entropy = r.ift.contains(name);
    if (entropy) j["quantities"][name]["ift"] = ift_json(r.ift.at(name));
    write_series_files(out, name, series, bins, entropy);
  }
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    write_events_csv(out / ("events_" + std::to_string(i) + ".csv"), r.records[i]);
  }
  write_json(out / "summary.json", j);
}

void write_report(const ErasureResult& r, const std::filesystem::path& out, std::size_t bins) {
  std::filesystem::create_directories(out);
  json j;
  j["experiment"] = "erasure";
  j["parameters"] = config_json(r.config);
  j["run"] = run_json(r.options);
  j["landauer_bound"] = r.landauer_bound;
  j["points"] = json::array();
  for (std::size_t p = 0; p < r.points.size(); ++p) {
    const ErasurePoint& pt = r.points[p];
    const std::string tag = "tau" + std::to_string(p);
    json jp{{"tau", pt.protocol.tau},
            {"gamma_max_tau", pt.protocol.gamma_max() * pt.protocol.tau},
            {"tau_eq", pt.protocol.tau_eq},
            {"fidelity", pt.fidelity},
            {"unconditional_heat", pt.external_heat},
            {"internal_heat", pt.internal_heat},
            {"heat_mismatch", pt.heat_mismatch()},
            {"trajectories", pt.stats.trajectories},
            {"jumps", pt.stats.jumps}};
    for (const auto& [name, series] : pt.stats.quantities) {
      jp["quantities"][name] = series_json(series, bins);
      write_series_files(out, name + "_" + tag, series, bins, false);
    }
    for (std::size_t i = 0; i < pt.records.size(); ++i) {
      write_events_csv(out / ("events_" + tag + "_" + std::to_string(i) + ".csv"), pt.records[i]);
    }
    j["points"].push_back(jp);
  }
  write_json(out / "summary.json", j);
}

void write_report(const ExperimentConfig& config, const SteadyStateSummary& s, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  json j;
  j["experiment"] = "unconditional";
  j["parameters"] = config_json(config);
  j["dot_occupation"] = s.dot_occupation;
  j["finite_band_occupation"] = s.finite_band_occupation;
  j["wide_band_occupation"] = s.wide_band_occupation;
  j["leads"] = json::array();
  for (const auto& l : s.leads) {
    j["leads"].push_back({{"particle_current", l.particle},
                          {"energy_current", l.energy},
                          {"measurement_energy_current", l.measurement_energy},
                          {"internal_particle_current", l.internal_particle},
                          {"internal_energy_current", l.internal_energy}});
  }
  json occ = json::array();
  for (Index i = 0; i < s.covariance.rows(); ++i) occ.push_back(s.covariance(i, i).real());
  j["occupations"] = occ;
  write_json(out / "summary.json", j);
}

void write_report(const ExperimentConfig& config, const std::vector<ErasurePoint>& points,
                  const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  json j;
  j["experiment"] = "unconditional";
  j["parameters"] = config_json(config);
  j["landauer_bound"] = config.lead.temperature * std::log(2.0);
  j["points"] = json::array();
  for (const auto& p : points) {
    j["points"].push_back({{"tau", p.protocol.tau},
                           {"fidelity", p.fidelity},
                           {"heat", p.external_heat},
                           {"internal_heat", p.internal_heat},
                           {"heat_mismatch", p.heat_mismatch()}});
  }
  write_json(out / "summary.json", j);
}

void write_report(const OracleCheckResult& r, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  json j{{"experiment", "oracle-check"},
         {"modes", r.modes},
         {"seeds", r.seeds},
         {"record_mismatches", r.record_mismatches},
         {"first_divergence_time", r.first_divergence_time},
         {"jumps", r.total_jumps},
         {"max_covariance_error", r.max_covariance_error},
         {"max_wick_residual", r.max_wick_residual},
         {"max_purity_residual", r.max_purity_residual},
         {"max_unconditional_error", r.max_unconditional_error}};
  write_json(out / "summary.json", j);
}

}  // namespace mesolead
