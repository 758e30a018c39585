#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace liokam {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int x = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

std::string num(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "alpha",        "alpha.depth",  "alpha.bits",       "weight.family",     "weight.param",
      "model.preset", "epsilon",      "gamma",            "tau",               "s",
      "r",            "d_max",        "K.cap",            "K.support",         "lambda.points",
      "N_max",        "substeps.cap", "schedule.A",       "schedule.c",        "schedule.T",
      "schedule.n0",  "norm.lambda_derivative", "oracle.lambda_stride", "residual.theta_points",
      "force",        "seed",         "timing"};
  return keys;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  const std::string& v = value;
  if (key == "alpha") c.alpha = v;
  else if (key == "alpha.depth") c.alpha_depth = to_int<int>(key, v);
  else if (key == "alpha.bits") c.alpha_bits = to_int<unsigned>(key, v);
  else if (key == "weight.family") c.weight_family = v;
  else if (key == "weight.param") c.weight_param = to_double(key, v);
  else if (key == "model.preset") c.preset = v;
  else if (key == "epsilon") c.epsilon = to_double(key, v);
  else if (key == "gamma") c.gamma = to_double(key, v);
  else if (key == "tau") c.tau = to_double(key, v);
  else if (key == "s") c.s = to_double(key, v);
  else if (key == "r") c.r = to_double(key, v);
  else if (key == "d_max") c.d_max = to_int<int>(key, v);
  else if (key == "K.cap") c.K_cap = to_int<long>(key, v);
  else if (key == "K.support") c.K_support = to_int<int>(key, v);
  else if (key == "lambda.points") c.lambda_points = to_int<int>(key, v);
  else if (key == "N_max") c.N_max = to_int<int>(key, v);
  else if (key == "substeps.cap") c.substeps_cap = to_int<int>(key, v);
  else if (key == "schedule.A") c.A = to_double(key, v);
  else if (key == "schedule.c") c.c = to_double(key, v);
  else if (key == "schedule.T") c.T = to_double(key, v);
  else if (key == "schedule.n0") c.n0 = to_int<int>(key, v);
  else if (key == "norm.lambda_derivative") c.lambda_derivative = to_bool(key, v);
  else if (key == "oracle.lambda_stride") c.oracle_stride = to_int<int>(key, v);
  else if (key == "residual.theta_points") c.residual_theta = to_int<int>(key, v);
  else if (key == "force") c.force = to_bool(key, v);
  else if (key == "seed") c.seed = to_int<std::uint64_t>(key, v);
  else if (key == "timing") c.timing = to_bool(key, v);
  else throw ConfigError("unknown configuration key '" + key + "'");

  if (c.alpha_depth < 1) throw ConfigError("alpha.depth must be positive");
  if (c.d_max < 2 || c.d_max > 12) throw ConfigError("d_max must lie in [2, 12]");
  if (c.K_cap < 1) throw ConfigError("K.cap must be positive");
  if (c.K_support < 8) throw ConfigError("K.support must be at least 8");
  if (c.K_cap >= c.K_support) throw ConfigError("K.cap must stay below K.support");
  if (c.lambda_points < 2) throw ConfigError("lambda.points must be at least 2");
  if (c.substeps_cap < 1) throw ConfigError("substeps.cap must be positive");
  if (c.oracle_stride < 0) throw ConfigError("oracle.lambda_stride must be >= 0");
  if (c.residual_theta < 16) throw ConfigError("residual.theta_points must be at least 16");
}

RunConfig parse_config(std::istream& is, const std::string& origin, RunConfig base) {
  std::string line;
  std::size_t no = 0;
  while (std::getline(is, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ":" + std::to_string(no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(origin + ":" + std::to_string(no) + ": empty key or value");
    try {
      apply_setting(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(no) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path, std::move(base));
}

std::string to_string(const RunConfig& c) {
  std::ostringstream os;
  os << "alpha = " << c.alpha << "\n"
     << "alpha.depth = " << c.alpha_depth << "\n"
     << "alpha.bits = " << c.alpha_bits << "\n"
     << "weight.family = " << c.weight_family << "\n"
     << "weight.param = " << num(c.weight_param) << "\n"
     << "model.preset = " << c.preset << "\n"
     << "epsilon = " << num(c.epsilon) << "\n"
     << "gamma = " << num(c.gamma) << "\n"
     << "tau = " << num(c.tau) << "\n"
     << "s = " << num(c.s) << "\n"
     << "r = " << num(c.r) << "\n"
     << "d_max = " << c.d_max << "\n"
     << "K.cap = " << c.K_cap << "\n"
     << "K.support = " << c.K_support << "\n"
     << "lambda.points = " << c.lambda_points << "\n"
     << "N_max = " << c.N_max << "\n"
     << "substeps.cap = " << c.substeps_cap << "\n"
     << "schedule.A = " << num(c.A) << "\n"
     << "schedule.c = " << num(c.c) << "\n"
     << "schedule.T = " << num(c.T) << "\n"
     << "schedule.n0 = " << c.n0 << "\n"
     << "norm.lambda_derivative = " << (c.lambda_derivative ? "true" : "false") << "\n"
     << "oracle.lambda_stride = " << c.oracle_stride << "\n"
     << "residual.theta_points = " << c.residual_theta << "\n"
     << "force = " << (c.force ? "true" : "false") << "\n"
     << "seed = " << c.seed << "\n"
     << "timing = " << (c.timing ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace liokam
