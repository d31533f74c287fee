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

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mesolead/config.hpp"
#include "mesolead/errors.hpp"
#include "mesolead/experiments.hpp"
#include "mesolead/report.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trajectories;
  std::optional<unsigned> workers;
  std::string out = "out";
  bool emit_events = false;
  std::string bins = "";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "experiment config file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--trajectories", f.trajectories, "number of trajectories");
  cmd->add_option("--workers", f.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_flag("--emit-events", f.emit_events, "write one events_<index>.csv per trajectory");
  cmd->add_option("--bins", f.bins, "histogram bins: a count or 'auto'");
}

std::size_t parse_bins(const std::string& text, std::size_t fallback) {
  if (text.empty()) return fallback;
  if (text == "auto") return 0;
  std::size_t pos = 0;
  const unsigned long value = std::stoul(text, &pos);
  if (pos != text.size() || value == 0) throw CLI::ValidationError("--bins", "expected a positive count or 'auto'");
  return value;
}

mesolead::ExperimentConfig load(const CommonFlags& f) {
  mesolead::ExperimentConfig c = mesolead::load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.trajectories) c.trajectories = *f.trajectories;
  if (f.workers) c.workers = *f.workers;
  return c;
}

mesolead::RunOptions options(const mesolead::ExperimentConfig& c, const CommonFlags& f) {
  mesolead::RunOptions o = mesolead::run_options(c);
  o.keep_records = f.emit_events;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-jump trajectories of fermionic systems with mesoscopic leads"};
  app.require_subcommand(1);

  CommonFlags ft_flags;
  CommonFlags erasure_flags;
  CommonFlags unc_flags;
  CommonFlags oracle_flags;
  auto* ft = app.add_subcommand("steady-ft", "fluctuation theorems in the steady state");
  auto* erasure = app.add_subcommand("erasure", "finite-time bit erasure heat statistics");
  auto* unconditional = app.add_subcommand("unconditional", "ensemble-averaged dynamics only");
  auto* oracle_check = app.add_subcommand("oracle-check", "compare against the dense many-body reference");
  add_common(ft, ft_flags);
  add_common(erasure, erasure_flags);
  add_common(unconditional, unc_flags);
  add_common(oracle_check, oracle_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ft->parsed()) {
      const auto c = load(ft_flags);
      const auto result = mesolead::run_steady_ft(c, options(c, ft_flags));
      mesolead::write_report(result, ft_flags.out, parse_bins(ft_flags.bins, c.bins));
      const auto& unc = result.ift.at("S_unc");
      std::cout << "trajectories " << result.stats.trajectories << ", <exp(-S_unc)> = " << unc.mean_exp() << " +- "
                << unc.se_exp() << '\n';
    } else if (erasure->parsed()) {
      const auto c = load(erasure_flags);
      if (!c.is_erasure()) throw mesolead::ConfigError("erasure needs [protocol] epsilon_tau");
      const auto result = mesolead::run_erasure(c, options(c, erasure_flags));
      mesolead::write_report(result, erasure_flags.out, parse_bins(erasure_flags.bins, c.bins));
      for (const auto& p : result.points) {
        const auto& q = p.stats.quantities.at("dissipated_heat").stats();
        std::cout << "tau " << p.protocol.tau << ": <-dQ> = " << q.mean() << " +- " << q.standard_error()
                  << ", fidelity " << p.fidelity << '\n';
      }
    } else if (unconditional->parsed()) {
      const auto c = load(unc_flags);
      if (c.is_erasure()) {
        mesolead::write_report(c, mesolead::unconditional_erasure(c), unc_flags.out);
      } else {
        mesolead::write_report(c, mesolead::steady_state_summary(c), unc_flags.out);
      }
    } else if (oracle_check->parsed()) {
      const auto c = load(oracle_flags);
      auto o = options(c, oracle_flags);
      o.ode = mesolead::OdeOptions{1e-10, 1e-12};
      const auto result = mesolead::run_oracle_check(c, o, c.tau.front());
      mesolead::write_report(result, oracle_flags.out);
      std::cout << "modes " << result.modes << ", record mismatches " << result.record_mismatches
                << ", max covariance error " << result.max_covariance_error << ", max Wick residual "
                << result.max_wick_residual << '\n';
      return result.record_mismatches == 0 ? 0 : 2;
    }
  } catch (const mesolead::TrajectoryError& e) {
    std::cerr << "error: " << e.what() << " (seed index " << e.seed_index() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
