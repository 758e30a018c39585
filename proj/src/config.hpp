#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace liokam {

// Flat key = value configuration. Every key below is recognized; anything
// else is a ConfigError naming the key.
struct RunConfig {
  std::string alpha = "golden";
  int alpha_depth = 200;
  unsigned alpha_bits = 256;
  std::string weight_family = "analytic";
  double weight_param = 0.0;
  std::string preset = "a";
  double epsilon = 1e-8;
  double gamma = 0.05;
  double tau = 2.0;
  double s = 0.5;
  double r = 0.1;
  int d_max = 6;
  long K_cap = 256;
  int K_support = 512;
  int lambda_points = 257;
  int N_max = 4;
  int substeps_cap = 64;
  double A = 19.0;
  double c = 1.0;
  double T = 0.0;
  int n0 = -1;
  bool lambda_derivative = true;
  int oracle_stride = 64;  // every n-th active lambda row; 0 disables
  int residual_theta = 4096;
  bool force = false;
  std::uint64_t seed = 1;
  bool timing = false;
};

const std::vector<std::string>& config_keys();

// Applies one assignment; throws ConfigError for unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Lines "key = value"; '#' starts a comment; blank lines ignored.
RunConfig parse_config(std::istream& is, const std::string& origin, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Canonical text form, one key per line, in config_keys() order.
std::string to_string(const RunConfig& cfg);

}  // namespace liokam
