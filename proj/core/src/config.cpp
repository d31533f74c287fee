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

#include "mesolead/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace mesolead {

namespace {

namespace pt = boost::property_tree;

const std::set<std::string> kKnownKeys{
    "system.epsilon",      "lead.T",           "lead.mu",           "lead.omega_max",   "lead.Gamma",
    "lead.L",              "lead.Lambda_plus", "lead.Lambda_minus", "protocol.tau",     "protocol.tau_eq",
    "protocol.epsilon_tau", "run.trajectories", "run.seed",          "run.workers",      "run.bins",
    "run.rtol",            "run.atol",
};

template <class T>
void read(const pt::ptree& tree, const std::string& key, T& target) {
  if (auto value = tree.get_optional<std::string>(key)) {
    try {
      target = boost::lexical_cast<T>(boost::trim_copy(*value));
    } catch (const boost::bad_lexical_cast&) {
      throw ConfigError("config key '" + key + "': cannot parse '" + *value + "'");
    }
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  std::vector<double> out;
  for (auto& part : parts) {
    boost::trim(part);
    if (part.empty()) continue;
    try {
      out.push_back(boost::lexical_cast<double>(part));
    } catch (const boost::bad_lexical_cast&) {
      throw ConfigError("config key '" + key + "': cannot parse '" + part + "'");
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' is empty");
  return out;
}

}  // namespace

ErasureProtocol ExperimentConfig::erasure(std::size_t tau_index) const {
  if (!epsilon_tau) throw ConfigError("config has no [protocol] epsilon_tau");
  ErasureProtocol p;
  p.tau = tau.at(tau_index);
  p.epsilon_tau = *epsilon_tau;
  p.mu = lead.mu;
  p.tau_eq = tau_eq;
  return p;
}

void ExperimentConfig::validate() const {
  if (!(lead.temperature > 0.0)) throw ConfigError("T must be positive");
  if (!(lead.omega_max > 0.0)) throw ConfigError("omega_max must be positive");
  if (lead.gamma < 0.0) throw ConfigError("Gamma must be nonnegative");
  if (lead.modes < 1) throw ConfigError("L must be at least 1");
  for (double l : {lead.lambda_plus, lead.lambda_minus})
    if (l < 0.0 || l > 1.0) throw ConfigError("Lambda_plus and Lambda_minus must lie in [0, 1]");
  for (double t : tau)
    if (!(t > 0.0)) throw ConfigError("tau must be positive");
  if (tau_eq < 0.0) throw ConfigError("tau_eq must be nonnegative");
  if (epsilon_tau && !(*epsilon_tau > 0.0)) throw ConfigError("epsilon_tau must be positive");
  if (!is_erasure() && tau.size() != 1) throw ConfigError("tau lists are only meaningful with epsilon_tau");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("rtol and atol must be positive");
  if (workers == 0) throw ConfigError("workers must be at least 1");
}

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError("config key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      (void)value;
      if (!kKnownKeys.contains(section + "." + key)) throw ConfigError("unknown config key '" + section + "." + key + "'");
    }
  }

  ExperimentConfig c;
  read(tree, "system.epsilon", c.epsilon);
  read(tree, "lead.T", c.lead.temperature);
  read(tree, "lead.mu", c.lead.mu);
  read(tree, "lead.omega_max", c.lead.omega_max);
  read(tree, "lead.Gamma", c.lead.gamma);
  read(tree, "lead.L", c.lead.modes);
  read(tree, "lead.Lambda_plus", c.lead.lambda_plus);
  read(tree, "lead.Lambda_minus", c.lead.lambda_minus);
  if (auto tau = tree.get_optional<std::string>("protocol.tau")) c.tau = parse_list("protocol.tau", *tau);
  read(tree, "protocol.tau_eq", c.tau_eq);
  if (tree.get_optional<std::string>("protocol.epsilon_tau")) {
    double e = 0.0;
    read(tree, "protocol.epsilon_tau", e);
    c.epsilon_tau = e;
  }
  read(tree, "run.trajectories", c.trajectories);
  read(tree, "run.seed", c.seed);
  read(tree, "run.workers", c.workers);
  if (auto bins = tree.get_optional<std::string>("run.bins"); bins && boost::trim_copy(*bins) != "auto") {
    read(tree, "run.bins", c.bins);
  }
  read(tree, "run.rtol", c.rtol);
  read(tree, "run.atol", c.atol);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace mesolead
