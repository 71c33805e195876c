#include "frmsm/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>

#include "frmsm/error.hpp"

namespace frmsm {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

std::string canonical_key(std::string_view key) {
  std::string k(trim(key));
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* expected) {
  throw Error(ErrorCode::InvalidConfig,
              "config key '" + key + "': expected " + expected + ", got '" + std::string(value) + "'");
}

int to_int(const std::string& key, std::string_view v) {
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    bad_value(key, v, "an integer");
  }
  return out;
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    bad_value(key, v, "a number");
  }
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "threshold",     "auto_threshold", "margin",    "trace_len",
      "valley_window", "max_iterations", "r_tol",     "phi_tol",
      "theta_tol",     "require_same_type", "decision_threshold",
  };
  return keys;
}

void apply_setting(AppConfig& cfg, std::string_view raw_key, std::string_view raw_value) {
  const std::string key = canonical_key(raw_key);
  std::string_view v = trim(raw_value);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);

  if (key == "threshold") cfg.pipeline.binarize.threshold = to_int(key, v);
  else if (key == "auto_threshold") cfg.pipeline.auto_threshold = to_bool(key, v);
  else if (key == "margin") cfg.pipeline.margin = to_int(key, v);
  else if (key == "trace_len") cfg.pipeline.trace_len = to_int(key, v);
  else if (key == "valley_window") cfg.pipeline.valley_window = to_int(key, v);
  else if (key == "max_iterations") cfg.pipeline.max_iterations = to_int(key, v);
  else if (key == "r_tol") cfg.match.r_tol = to_double(key, v);
  else if (key == "phi_tol") cfg.match.phi_tol = to_double(key, v);
  else if (key == "theta_tol") cfg.match.theta_tol = to_double(key, v);
  else if (key == "require_same_type") cfg.match.require_same_type = to_bool(key, v);
  else if (key == "decision_threshold") cfg.match.decision_threshold = to_double(key, v);
  else throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
}

double config_value(const AppConfig& cfg, std::string_view raw_key) {
  const std::string key = canonical_key(raw_key);
  if (key == "threshold") return cfg.pipeline.binarize.threshold;
  if (key == "auto_threshold") return cfg.pipeline.auto_threshold ? 1.0 : 0.0;
  if (key == "margin") return cfg.pipeline.margin;
  if (key == "trace_len") return cfg.pipeline.trace_len;
  if (key == "valley_window") return cfg.pipeline.valley_window;
  if (key == "max_iterations") return cfg.pipeline.max_iterations.value_or(0);
  if (key == "r_tol") return cfg.match.r_tol;
  if (key == "phi_tol") return cfg.match.phi_tol;
  if (key == "theta_tol") return cfg.match.theta_tol;
  if (key == "require_same_type") return cfg.match.require_same_type ? 1.0 : 0.0;
  if (key == "decision_threshold") return cfg.match.decision_threshold;
  throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
}

void apply_config_text(AppConfig& cfg, std::string_view text, const std::string& source_name) {
  int line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig,
                  source_name + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(e.code(), source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void load_config_file(AppConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string() + ": cannot open config file");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  apply_config_text(cfg, text, path.string());
}

void validate(const AppConfig& cfg) {
  validate(cfg.pipeline);
  validate(cfg.match);
}

}  // namespace frmsm
