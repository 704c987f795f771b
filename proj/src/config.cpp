// Copyright 2026 The VoteCut Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "votecut/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

#include "votecut/core.hpp"

namespace votecut {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::argument, what);
}

bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::argument, "setting " + key + ": not a number: '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorKind::argument, "setting " + key + ": not an integer: '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw Error(ErrorKind::argument, "setting " + key + ": expected on/off, got '" + text + "'");
}

}  // namespace

void validate(const CrfParams& p) {
  require(p.iterations >= 0, "crf iterations must be >= 0");
  require(p.unary_fg > 0.0 && p.unary_fg < 1.0, "crf unary_fg must lie in (0,1)");
  require(p.theta_alpha > 0 && p.theta_beta > 0 && p.theta_gamma > 0,
          "crf bandwidths must be positive");
  require(p.w_app >= 0 && p.w_sm >= 0, "crf kernel weights must be non-negative");
  require(p.max_side >= 1, "crf max_side must be >= 1");
}

void validate(const PipelineConfig& cfg) {
  require(unit_interval(cfg.tau_ncut), "tau_ncut must lie in [0,1]");
  require(unit_interval(cfg.tau_c), "tau_c must lie in [0,1]");
  require(unit_interval(cfg.tau_m), "tau_m must lie in [0,1]");
  require(unit_interval(cfg.tau_iou), "tau_iou must lie in [0,1]");
  require(unit_interval(cfg.min_keep_score), "min_keep_score must lie in [0,1]");
  require(cfg.k_max >= 2, "k_max must be >= 2");
  require(cfg.max_instances >= 1, "max_instances must be >= 1");
  require(cfg.vote_side >= 1, "vote_side must be >= 1");
  require(cfg.spectral_tol > 0, "spectral_tol must be positive");
  require(cfg.plateau_tol >= 0, "plateau_tol must be non-negative");
  validate(cfg.crf_params);
}

void apply_setting(PipelineConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  using Setter = std::function<void(PipelineConfig&, const std::string&)>;
  auto dbl = [](double PipelineConfig::*field, const char* name) -> Setter {
    return [field, name](PipelineConfig& c, const std::string& v) { c.*field = parse_double(name, v); };
  };
  auto crf_dbl = [](double CrfParams::*field, const char* name) -> Setter {
    return [field, name](PipelineConfig& c, const std::string& v) {
      c.crf_params.*field = parse_double(name, v);
    };
  };
  static const std::map<std::string, Setter> setters = {
      {"tau_ncut", dbl(&PipelineConfig::tau_ncut, "tau_ncut")},
      {"tau_c", dbl(&PipelineConfig::tau_c, "tau_c")},
      {"tau_m", dbl(&PipelineConfig::tau_m, "tau_m")},
      {"tau_iou", dbl(&PipelineConfig::tau_iou, "tau_iou")},
      {"min_keep_score", dbl(&PipelineConfig::min_keep_score, "min_keep_score")},
      {"spectral_tol", dbl(&PipelineConfig::spectral_tol, "spectral_tol")},
      {"plateau_tol", dbl(&PipelineConfig::plateau_tol, "plateau_tol")},
      {"k_max", [](PipelineConfig& c, const std::string& v) { c.k_max = parse_int("k_max", v); }},
      {"max_instances",
       [](PipelineConfig& c, const std::string& v) { c.max_instances = parse_int("max_instances", v); }},
      {"vote_side",
       [](PipelineConfig& c, const std::string& v) { c.vote_side = parse_int("vote_side", v); }},
      {"crf", [](PipelineConfig& c, const std::string& v) { c.crf_enabled = parse_bool("crf", v); }},
      {"crf_iterations",
       [](PipelineConfig& c, const std::string& v) {
         c.crf_params.iterations = parse_int("crf_iterations", v);
       }},
      {"crf_max_side",
       [](PipelineConfig& c, const std::string& v) {
         c.crf_params.max_side = parse_int("crf_max_side", v);
       }},
      {"crf_w_app", crf_dbl(&CrfParams::w_app, "crf_w_app")},
      {"crf_theta_alpha", crf_dbl(&CrfParams::theta_alpha, "crf_theta_alpha")},
      {"crf_theta_beta", crf_dbl(&CrfParams::theta_beta, "crf_theta_beta")},
      {"crf_w_sm", crf_dbl(&CrfParams::w_sm, "crf_w_sm")},
      {"crf_theta_gamma", crf_dbl(&CrfParams::theta_gamma, "crf_theta_gamma")},
      {"crf_unary_fg", crf_dbl(&CrfParams::unary_fg, "crf_unary_fg")},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw Error(ErrorKind::argument, "unknown setting '" + key + "'");
  it->second(cfg, value);
}

double setting_value(const PipelineConfig& cfg, const std::string& key) {
  const CrfParams& p = cfg.crf_params;
  const std::map<std::string, double> values = {
      {"tau_ncut", cfg.tau_ncut},
      {"tau_c", cfg.tau_c},
      {"tau_m", cfg.tau_m},
      {"tau_iou", cfg.tau_iou},
      {"min_keep_score", cfg.min_keep_score},
      {"spectral_tol", cfg.spectral_tol},
      {"plateau_tol", cfg.plateau_tol},
      {"k_max", cfg.k_max},
      {"max_instances", cfg.max_instances},
      {"vote_side", cfg.vote_side},
      {"crf", cfg.crf_enabled ? 1.0 : 0.0},
      {"crf_iterations", p.iterations},
      {"crf_max_side", p.max_side},
      {"crf_w_app", p.w_app},
      {"crf_theta_alpha", p.theta_alpha},
      {"crf_theta_beta", p.theta_beta},
      {"crf_w_sm", p.w_sm},
      {"crf_theta_gamma", p.theta_gamma},
      {"crf_unary_fg", p.unary_fg},
  };
  const auto it = values.find(trim(key));
  if (it == values.end()) throw Error(ErrorKind::argument, "unknown setting '" + key + "'");
  return it->second;
}

void load_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::format,
                  path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

}  // namespace votecut
