#include "reel/server/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace reel::server {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_uint(const std::string& v, std::size_t line, const std::string& key,
                         std::uint64_t min, std::uint64_t max) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(line, key + ": expected a non-negative integer, got '" + v + "'");
  if (out < min || out > max)
    throw ConfigError(line, key + ": " + v + " is outside [" + std::to_string(min) + ", " +
                                std::to_string(max) + "]");
  return out;
}

std::uint64_t parse_ms(const std::string& v, std::size_t line, const std::string& key) {
  char* end = nullptr;
  const double s = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(s) || s < 0.001 || s > 86400)
    throw ConfigError(line, key + ": expected seconds in [0.001, 86400], got '" + v + "'");
  return static_cast<std::uint64_t>(std::llround(s * 1000));
}

bool parse_bool(const std::string& v, std::size_t line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, key + ": expected true or false, got '" + v + "'");
}

using Setter = std::function<void(ServerConfig&, const std::string& value, std::size_t line,
                                  const std::string& key)>;

template <class T>
Setter uint_field(T ServerConfig::*field, std::uint64_t min, std::uint64_t max) {
  return [=](ServerConfig& c, const std::string& v, std::size_t l, const std::string& k) {
    c.*field = static_cast<T>(parse_uint(v, l, k, min, max));
  };
}

template <class T, class Sub>
Setter nested_uint(Sub ServerConfig::*sub, T Sub::*field, std::uint64_t min, std::uint64_t max) {
  return [=](ServerConfig& c, const std::string& v, std::size_t l, const std::string& k) {
    (c.*sub).*field = static_cast<T>(parse_uint(v, l, k, min, max));
  };
}

Setter string_field(std::string ServerConfig::*field, bool allow_empty) {
  return [=](ServerConfig& c, const std::string& v, std::size_t l, const std::string& k) {
    if (v.empty() && !allow_empty) throw ConfigError(l, k + " must not be empty");
    c.*field = v;
  };
}

Setter megabytes(std::uint64_t ServerConfig::*field) {
  return [=](ServerConfig& c, const std::string& v, std::size_t l, const std::string& k) {
    c.*field = parse_uint(v, l, k, 0, 1ull << 30) << 20;
  };
}

const std::map<std::string, Setter>& setters() {
  constexpr std::uint64_t u32 = 0xffffffffu;
  static const std::map<std::string, Setter> table = {
      {"bind", string_field(&ServerConfig::bind, false)},
      {"port", uint_field(&ServerConfig::port, 0, 65535)},
      {"data_dir", string_field(&ServerConfig::data_dir, false)},
      {"media_dir", string_field(&ServerConfig::media_dir, true)},
      {"segment_duration",
       [](ServerConfig& c, const std::string& v, std::size_t l, const std::string& k) {
         c.segment_duration_ms = parse_ms(v, l, k);
       }},
      {"segment_gop", uint_field(&ServerConfig::segment_gop, 1, u32)},
      {"segment_cache_mb", megabytes(&ServerConfig::segment_cache_bytes)},
      {"block_cache_mb", megabytes(&ServerConfig::block_cache_bytes)},
      {"http_threads", uint_field(&ServerConfig::http_threads, 1, 1024)},
      {"decode_workers", nested_uint(&ServerConfig::engine, &EngineConfig::decode_workers, 1, 1024)},
      {"filter_workers", nested_uint(&ServerConfig::engine, &EngineConfig::filter_workers, 1, 1024)},
      {"pool_capacity", nested_uint(&ServerConfig::engine, &EngineConfig::pool_capacity, 1, u32)},
      {"prefetch_window", nested_uint(&ServerConfig::engine, &EngineConfig::prefetch_window, 1, u32)},
      {"reorder_capacity", nested_uint(&ServerConfig::engine, &EngineConfig::reorder_capacity, 0, u32)},
      {"simulate",
       [](ServerConfig& c, const std::string& v, std::size_t l, const std::string& k) {
         c.engine.simulate = parse_bool(v, l, k);
       }},
      {"max_intermediate_width",
       nested_uint(&ServerConfig::policy, &SecurityPolicy::max_intermediate_width, 1, u32)},
      {"max_intermediate_height",
       nested_uint(&ServerConfig::policy, &SecurityPolicy::max_intermediate_height, 1, u32)},
      {"max_value_bytes", nested_uint(&ServerConfig::policy, &SecurityPolicy::max_value_bytes, 1, u32)},
      {"max_expr_depth", nested_uint(&ServerConfig::policy, &SecurityPolicy::max_expr_depth, 1, u32)},
  };
  return table;
}

}  // namespace

void ServerConfig::validate() const {
  if (data_dir.empty()) throw ConfigError(0, "data_dir must not be empty");
  if (segment_gop == 0) throw ConfigError(0, "segment_gop must be positive");
  if (http_threads == 0) throw ConfigError(0, "http_threads must be positive");
  try {
    engine.validate();
    policy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
}

ServerConfig parse_config(const std::string& text) {
  ServerConfig cfg;
  std::map<std::string, std::size_t> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string content = trim(raw);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "missing key before '='");
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(line, "unknown key '" + key + "'");
    if (auto [prev, fresh] = seen.emplace(key, line); !fresh)
      throw ConfigError(line, "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(prev->second) + ")");
    it->second(cfg, value, line, key);
  }
  cfg.validate();
  return cfg;
}

ServerConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(0, "cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void apply_env_overrides(ServerConfig& config, const std::map<std::string, std::string>& env) {
  if (auto it = env.find("REEL_PORT"); it != env.end() && !it->second.empty()) {
    try {
      config.port = static_cast<std::uint16_t>(parse_uint(it->second, 0, "REEL_PORT", 0, 65535));
    } catch (const ConfigError& e) {
      throw ConfigError(0, std::string("environment: ") + e.what());
    }
  }
  if (auto it = env.find("REEL_DATA_DIR"); it != env.end() && !it->second.empty())
    config.data_dir = it->second;
}

void apply_env_overrides(ServerConfig& config) {
  std::map<std::string, std::string> env;
  for (const char* name : {"REEL_PORT", "REEL_DATA_DIR"})
    if (const char* v = std::getenv(name)) env[name] = v;
  apply_env_overrides(config, env);
}

}  // namespace reel::server
