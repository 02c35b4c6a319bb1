#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "reel/engine/config.hpp"
#include "reel/ir/policy.hpp"

namespace reel::server {

/// Server settings. File format: one `key = value` per line, `#` starts a
/// comment, blank lines are ignored. Keys are listed in docs/config.md.
struct ServerConfig {
  std::string bind = "127.0.0.1";
  std::uint16_t port = 8080;
  std::string data_dir = "reel-data";
  /// Relative source paths in create requests resolve against this
  /// directory; empty means the working directory.
  std::string media_dir;
  std::uint64_t segment_duration_ms = 2000;
  /// GOP size of rendered segments; 1 makes every frame an I-frame.
  std::uint32_t segment_gop = 1;
  std::uint64_t segment_cache_bytes = 256ull << 20;
  std::uint64_t block_cache_bytes = 64ull << 20;
  std::uint32_t http_threads = 8;
  EngineConfig engine;
  SecurityPolicy policy;

  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  /// 1-based line of the offending entry, 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

ServerConfig parse_config(const std::string& text);
ServerConfig load_config(const std::string& path);
/// REEL_PORT and REEL_DATA_DIR replace the file values when set.
void apply_env_overrides(ServerConfig& config);
void apply_env_overrides(ServerConfig& config, const std::map<std::string, std::string>& env);

}  // namespace reel::server
