// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The locbeam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "locbeam/experiment.hpp"

namespace locbeam {

namespace {

using nlohmann::json;

constexpr std::pair<Scheme, std::string_view> kSchemeNames[] = {
    {Scheme::kCoordinated, "coordinated"},
    {Scheme::kCoordinatedNoWindow, "coordinated-no-window"},
    {Scheme::kExhaustive, "exhaustive"},
    {Scheme::kOptimalOracle, "optimal-oracle"},
    {Scheme::kPositionOnly, "position-only"},
};

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  if (!obj.is_object()) {
    throw ConfigError(std::string(where) + ": expected a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown field '" + key + "'");
    }
  }
}

double get_number(const json& j, std::string_view field) {
  if (!j.is_number()) {
    throw ConfigError(std::string(field) + ": expected a number");
  }
  return j.get<double>();
}

std::size_t get_count(const json& j, std::string_view field) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ConfigError(std::string(field) + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::vector<double> get_numbers(const json& j, std::string_view field) {
  if (!j.is_array()) {
    throw ConfigError(std::string(field) + ": expected an array of numbers");
  }
  std::vector<double> out;
  for (const auto& e : j) {
    out.push_back(get_number(e, field));
  }
  return out;
}

Point2 get_point(const json& j, std::string_view field) {
  const auto v = get_numbers(j, field);
  if (v.size() != 2) {
    throw ConfigError(std::string(field) + ": expected [x, y]");
  }
  return {v[0], v[1]};
}

Scenario parse_scenario(const json& j) {
  reject_unknown(j, {"bs", "ue", "reflectors", "r_bs", "r_ue", "r_ue_self"}, "scenario");
  Scenario s = Scenario::reference();
  if (j.contains("bs")) s.bs = get_point(j["bs"], "scenario.bs");
  if (j.contains("ue")) s.ue = get_point(j["ue"], "scenario.ue");
  if (j.contains("reflectors")) {
    if (!j["reflectors"].is_array()) {
      throw ConfigError("scenario.reflectors: expected an array of [x, y]");
    }
    s.reflectors.clear();
    for (const auto& p : j["reflectors"]) {
      s.reflectors.push_back(get_point(p, "scenario.reflectors"));
    }
  }
  if (j.contains("r_bs")) s.r_bs = get_numbers(j["r_bs"], "scenario.r_bs");
  if (j.contains("r_ue")) s.r_ue = get_numbers(j["r_ue"], "scenario.r_ue");
  if (j.contains("r_ue_self")) s.r_ue_self = get_number(j["r_ue_self"], "scenario.r_ue_self");
  return s;
}

json point_json(const Point2& p) { return json::array({p.x(), p.y()}); }

}  // namespace

std::string_view scheme_name(Scheme scheme) noexcept {
  for (const auto& [s, name] : kSchemeNames) {
    if (s == scheme) return name;
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(std::string_view name) noexcept {
  for (const auto& [s, n] : kSchemeNames) {
    if (n == name) return s;
  }
  return std::nullopt;
}

std::vector<Scheme> all_schemes() {
  std::vector<Scheme> out;
  for (const auto& [s, name] : kSchemeNames) out.push_back(s);
  return out;
}

std::string_view crb_mode_name(CrbMode mode) noexcept {
  switch (mode) {
    case CrbMode::kOff: return "off";
    case CrbMode::kAnalytic: return "analytic";
    case CrbMode::kSampled: return "sampled";
  }
  return "off";
}

void ExperimentConfig::validate() const {
  try {
    scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (n_tx < 2 || n_rx < 2) throw ConfigError("n_tx and n_rx must be >= 2");
  if (snr_grid_db.empty()) throw ConfigError("snr_grid_db must not be empty");
  if (std::any_of(snr_grid_db.begin(), snr_grid_db.end(), [](double x) { return !std::isfinite(x); })) {
    throw ConfigError("snr_grid_db entries must be finite");
  }
  if (n_blocks < 1) throw ConfigError("n_blocks must be >= 1");
  if (n_slots < 1) throw ConfigError("n_slots must be >= 1");
  if (beams_per_slot < 1) throw ConfigError("beams_per_slot must be >= 1");
  if (!(target_value >= 0.0)) throw ConfigError("target_rate_mode.value must be >= 0");
  if (schemes.empty()) throw ConfigError("schemes must not be empty");
  if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size()) {
    throw ConfigError("schemes must not repeat");
  }
  if (gain_variances.size() != scenario.n_paths()) {
    throw ConfigError("gain_variances needs one entry per path (" +
                      std::to_string(scenario.n_paths()) + ")");
  }
  if (std::any_of(gain_variances.begin(), gain_variances.end(),
                  [](double v) { return !(v >= 0.0) || !std::isfinite(v); })) {
    throw ConfigError("gain_variances must be finite and >= 0");
  }
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j,
                 {"scenario", "n_tx", "n_rx", "snr_grid_db", "n_blocks", "n_slots",
                  "beams_per_slot", "target_rate_mode", "schemes", "crb_mode", "gain_variances",
                  "master_seed"},
                 "config");
  ExperimentConfig c;
  if (j.contains("scenario")) c.scenario = parse_scenario(j["scenario"]);
  if (j.contains("n_tx")) c.n_tx = get_count(j["n_tx"], "n_tx");
  if (j.contains("n_rx")) c.n_rx = get_count(j["n_rx"], "n_rx");
  if (j.contains("snr_grid_db")) c.snr_grid_db = get_numbers(j["snr_grid_db"], "snr_grid_db");
  if (j.contains("n_blocks")) c.n_blocks = get_count(j["n_blocks"], "n_blocks");
  if (j.contains("n_slots")) c.n_slots = get_count(j["n_slots"], "n_slots");
  if (j.contains("beams_per_slot")) c.beams_per_slot = get_count(j["beams_per_slot"], "beams_per_slot");
  if (j.contains("target_rate_mode")) {
    const json& t = j["target_rate_mode"];
    reject_unknown(t, {"kind", "value"}, "target_rate_mode");
    if (t.contains("kind")) {
      if (!t["kind"].is_string()) throw ConfigError("target_rate_mode.kind: expected a string");
      const auto kind = t["kind"].get<std::string>();
      if (kind == "absolute") {
        c.target_mode = TargetMode::kAbsolute;
      } else if (kind == "fraction-of-optimal") {
        c.target_mode = TargetMode::kFractionOfOptimal;
      } else {
        throw ConfigError("target_rate_mode.kind: expected 'absolute' or 'fraction-of-optimal'");
      }
    }
    if (t.contains("value")) c.target_value = get_number(t["value"], "target_rate_mode.value");
  }
  if (j.contains("schemes")) {
    if (!j["schemes"].is_array()) throw ConfigError("schemes: expected an array of names");
    c.schemes.clear();
    for (const auto& s : j["schemes"]) {
      if (!s.is_string()) throw ConfigError("schemes: expected strings");
      const auto parsed = parse_scheme(s.get<std::string>());
      if (!parsed) throw ConfigError("schemes: unknown scheme '" + s.get<std::string>() + "'");
      c.schemes.push_back(*parsed);
    }
  }
  if (j.contains("crb_mode")) {
    const json& m = j["crb_mode"];
    const std::string mode = m.is_string() ? m.get<std::string>() : std::string();
    if (mode == "off") c.crb_mode = CrbMode::kOff;
    else if (mode == "analytic") c.crb_mode = CrbMode::kAnalytic;
    else if (mode == "sampled") c.crb_mode = CrbMode::kSampled;
    else throw ConfigError("crb_mode: expected 'off', 'analytic' or 'sampled'");
  }
  if (j.contains("gain_variances")) {
    c.gain_variances = get_numbers(j["gain_variances"], "gain_variances");
  } else {
    c.gain_variances = default_gain_variances(c.scenario.n_paths());
  }
  if (j.contains("master_seed")) {
    if (!j["master_seed"].is_number_unsigned()) {
      throw ConfigError("master_seed: expected a non-negative integer");
    }
    c.master_seed = j["master_seed"].get<std::uint64_t>();
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const ExperimentConfig& c) {
  json reflectors = json::array();
  for (const auto& r : c.scenario.reflectors) reflectors.push_back(point_json(r));
  json schemes = json::array();
  for (const Scheme s : c.schemes) schemes.push_back(std::string(scheme_name(s)));
  const json j = {
      {"scenario",
       {{"bs", point_json(c.scenario.bs)},
        {"ue", point_json(c.scenario.ue)},
        {"reflectors", reflectors},
        {"r_bs", c.scenario.r_bs},
        {"r_ue", c.scenario.r_ue},
        {"r_ue_self", c.scenario.r_ue_self}}},
      {"n_tx", c.n_tx},
      {"n_rx", c.n_rx},
      {"snr_grid_db", c.snr_grid_db},
      {"n_blocks", c.n_blocks},
      {"n_slots", c.n_slots},
      {"beams_per_slot", c.beams_per_slot},
      {"target_rate_mode",
       {{"kind", c.target_mode == TargetMode::kAbsolute ? "absolute" : "fraction-of-optimal"},
        {"value", c.target_value}}},
      {"schemes", schemes},
      {"crb_mode", std::string(crb_mode_name(c.crb_mode))},
      {"gain_variances", c.gain_variances},
      {"master_seed", c.master_seed},
  };
  return j.dump(2);
}

}  // namespace locbeam
