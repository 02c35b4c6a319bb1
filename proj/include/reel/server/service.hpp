#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "reel/engine/render.hpp"
#include "reel/ir/policy.hpp"
#include "reel/ir/typecheck.hpp"
#include "reel/server/block_cache.hpp"
#include "reel/server/config.hpp"
#include "reel/server/playlist.hpp"
#include "reel/server/segment_cache.hpp"
#include "reel/server/spec_store.hpp"

namespace reel::server {

/// A request failure with its HTTP status. `body` always has "error" (the
/// error class) and "detail"; push rejections add "frame" and, for policy
/// violations, "limit".
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, nlohmann::json body);
  int status() const { return status_; }
  const nlohmann::json& body() const { return body_; }

 private:
  int status_;
  nlohmann::json body_;
};

struct CreateResult {
  std::string spec_id;
  std::string playlist_url;
};

struct PushResult {
  std::uint64_t accepted = 0;
  std::uint64_t frames_written = 0;
  bool terminated = false;
  std::uint64_t segments = 0;
};

struct SegmentResult {
  SegmentBytes bytes;
  bool cache_hit = false;
  /// Engine counters when this call rendered the segment.
  std::optional<RenderStats> stats;
};

struct ServiceCounters {
  std::uint64_t specs = 0;
  std::uint64_t engine_renders = 0;
  SegmentCacheStats segment_cache;
  BlockCacheStats block_cache;
  nlohmann::json to_json() const;
};

/// The VOD service without its transport: spec registry, push checks,
/// playlists and just-in-time segment rendering.
///
/// Create request body:
///   {"fps": [num, den], "output_type": {"width", "height", "pixfmt"},
///    "sources": {"<source_id>": "<path>"},
///    "policy": {...optional, may only tighten the server limits},
///    "segment_duration": optional seconds}
///
/// Push part body:
///   {"nodes": [<canonical node>...], "frames": [<index into nodes>...],
///    "terminal": bool, "start": optional expected frames_written}
///
/// Node references inside a part are indices into that part's own "nodes".
class VodService {
 public:
  /// Replays every spec log under `<data_dir>/specs`.
  explicit VodService(ServerConfig config);
  ~VodService();

  CreateResult create_spec(const nlohmann::json& request);
  PushResult push_part(const std::string& spec_id, const nlohmann::json& part);
  std::string playlist(const std::string& spec_id) const;
  SegmentResult segment(const std::string& spec_id, std::uint64_t n);
  void delete_spec(const std::string& spec_id);
  nlohmann::json status(const std::string& spec_id) const;
  ServiceCounters counters() const;

  const ServerConfig& config() const { return config_; }
  /// Spec ids dropped at startup because their sources no longer probe.
  const std::vector<std::string>& skipped_on_replay() const { return skipped_; }

 private:
  struct Entry;

  std::shared_ptr<Entry> find(const std::string& spec_id) const;
  std::shared_ptr<Entry> build_entry(const std::string& spec_id, const nlohmann::json& create);
  PushResult apply_part(Entry& e, const nlohmann::json& part, bool persist);
  std::string fresh_id();

  ServerConfig config_;
  std::shared_ptr<BlockCache> blocks_;
  SegmentCache segments_;
  SpecStore store_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> specs_;
  std::atomic<std::uint64_t> engine_renders_{0};
  std::uint64_t id_counter_ = 0;
  std::vector<std::string> skipped_;
};

}  // namespace reel::server
