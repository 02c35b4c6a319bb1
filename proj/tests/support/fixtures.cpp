#include "fixtures.hpp"

#include <stdlib.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <stdexcept>

#include "reel/codec/synthetic.hpp"
#include "reel/ir/spec_json.hpp"

namespace reel::testing {

std::vector<std::uint8_t> synthetic_stream(FrameType type, std::uint32_t frames,
                                           std::uint32_t gop_size, bool b_frames,
                                           std::uint32_t seed) {
  return reel::synthetic_stream(type, frames, EncoderParams{30, 1, gop_size, b_frames}, seed);
}

std::shared_ptr<const MemorySource> synthetic_source(FrameType type, std::uint32_t frames,
                                                     std::uint32_t gop_size, bool b_frames,
                                                     std::uint32_t seed) {
  return std::make_shared<MemorySource>(synthetic_stream(type, frames, gop_size, b_frames, seed));
}

Raster box_mask(std::uint32_t width, std::uint32_t height, std::uint32_t k) {
  Raster m(FrameType{width, height, PixelFormat::Gray8});
  const std::uint32_t bw = std::max(1u, width / 3), bh = std::max(1u, height / 3);
  const std::uint32_t x0 = (k * 5) % width, y0 = (k * 3) % height;
  for (std::uint32_t y = y0; y < std::min(height, y0 + bh); ++y)
    for (std::uint32_t x = x0; x < std::min(width, x0 + bw); ++x) m.data[std::size_t{y} * width + x] = 255;
  return m;
}

std::shared_ptr<const MemorySource> mask_source(std::uint32_t width, std::uint32_t height,
                                                std::uint32_t frames, std::uint32_t gop_size) {
  std::vector<Raster> masks;
  for (std::uint32_t k = 0; k < frames; ++k) masks.push_back(box_mask(width, height, k));
  MaskPackOptions opts;
  opts.gop_size = gop_size;
  return std::make_shared<MemorySource>(pack_masks(masks, opts));
}

VideoSpec identity_spec(const std::string& source, FrameType type,
                        const std::vector<std::uint32_t>& order) {
  VideoSpec spec;
  spec.spec_id = "identity";
  spec.output_type = type;
  for (const auto f : order) spec.append_frame(spec.nodes.source(source, f));
  spec.terminate();
  return spec;
}

std::vector<std::uint32_t> sequential_order(std::uint32_t n) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

std::vector<std::uint32_t> reverse_order(std::uint32_t n) {
  auto v = sequential_order(n);
  std::reverse(v.begin(), v.end());
  return v;
}

std::vector<std::uint32_t> shuffled_order(std::uint32_t n, std::uint64_t seed) {
  auto v = sequential_order(n);
  std::mt19937_64 rng(seed);
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

std::vector<std::uint32_t> stride_order(std::uint32_t count, std::uint32_t stride,
                                        std::uint32_t source_frames) {
  std::vector<std::uint32_t> v;
  v.reserve(count);
  std::uint64_t f = 0;
  for (std::uint32_t i = 0; i < count; ++i) {
    v.push_back(static_cast<std::uint32_t>(f % source_frames));
    f += stride;
  }
  return v;
}

TempDir::TempDir() {
  std::string tmpl = (std::filesystem::temp_directory_path() / "reel-test-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

nlohmann::json make_part(const NodeTable& table, const std::vector<NodeId>& frames, bool terminal) {
  nlohmann::json ids = nlohmann::json::array();
  for (const NodeId f : frames) ids.push_back(f.v);
  return {{"nodes", nodes_to_json(table)}, {"frames", ids}, {"terminal", terminal}};
}

nlohmann::json make_create(FrameType output, const std::map<std::string, std::string>& sources,
                           std::uint32_t fps_num, std::uint32_t fps_den) {
  return {{"fps", {fps_num, fps_den}}, {"output_type", frame_type_to_json(output)}, {"sources", sources}};
}

std::vector<Raster> render_frames(const VideoSpec& spec, const SourceMap& sources,
                                  const EngineConfig& config, RenderStats* stats) {
  CollectSink sink;
  auto st = render(spec, sources, config, sink);
  if (stats) *stats = std::move(st);
  return std::move(sink.frames);
}

std::vector<Raster> reference_frames(const VideoSpec& spec, const SourceMap& sources,
                                     RenderStats* stats) {
  CollectSink sink;
  auto st = reference_render(spec, sources, sink);
  if (stats) *stats = std::move(st);
  return std::move(sink.frames);
}

}  // namespace reel::testing
