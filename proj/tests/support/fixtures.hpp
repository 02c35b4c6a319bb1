#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "reel/codec/tvc.hpp"
#include "reel/engine/render.hpp"

#include <nlohmann/json.hpp>

namespace reel::testing {

/// Synthetic TVC stream of `frames` frames.
std::vector<std::uint8_t> synthetic_stream(FrameType type, std::uint32_t frames,
                                           std::uint32_t gop_size, bool b_frames,
                                           std::uint32_t seed = 0);

std::shared_ptr<const MemorySource> synthetic_source(FrameType type, std::uint32_t frames,
                                                     std::uint32_t gop_size, bool b_frames,
                                                     std::uint32_t seed = 0);

/// Binary mask k: a moving box, 255 inside, 0 elsewhere.
Raster box_mask(std::uint32_t width, std::uint32_t height, std::uint32_t k);

std::shared_ptr<const MemorySource> mask_source(std::uint32_t width, std::uint32_t height,
                                                std::uint32_t frames, std::uint32_t gop_size);

/// Spec whose frame g is SourceRef(source, order[g]).
VideoSpec identity_spec(const std::string& source, FrameType type,
                        const std::vector<std::uint32_t>& order);

std::vector<std::uint32_t> sequential_order(std::uint32_t n);
std::vector<std::uint32_t> reverse_order(std::uint32_t n);
std::vector<std::uint32_t> shuffled_order(std::uint32_t n, std::uint64_t seed);
/// Frames 0, s, 2s, ... below `source_frames`, `count` of them, wrapping.
std::vector<std::uint32_t> stride_order(std::uint32_t count, std::uint32_t stride,
                                        std::uint32_t source_frames);

/// Fresh directory under the system temp dir, removed with its contents.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

/// Push-part body carrying `frames` (roots in `table`) with the whole table
/// as its node list.
nlohmann::json make_part(const NodeTable& table, const std::vector<NodeId>& frames, bool terminal);

/// Create-request body for the server.
nlohmann::json make_create(FrameType output, const std::map<std::string, std::string>& sources,
                           std::uint32_t fps_num = 30, std::uint32_t fps_den = 1);

std::vector<Raster> render_frames(const VideoSpec& spec, const SourceMap& sources,
                                  const EngineConfig& config, RenderStats* stats = nullptr);
std::vector<Raster> reference_frames(const VideoSpec& spec, const SourceMap& sources,
                                     RenderStats* stats = nullptr);

}  // namespace reel::testing
