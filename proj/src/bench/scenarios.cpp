#include "reel/bench/scenarios.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <random>

#include "reel/codec/synthetic.hpp"

namespace reel::bench {

namespace {

class NullSink final : public FrameSink {
 public:
  void consume(std::uint64_t, const Raster&) override {}
};

Pattern pattern_or(const BenchParams& p, Pattern fallback) {
  if (p.pattern.empty()) return fallback;
  const auto parsed = parse_pattern(p.pattern);
  if (!parsed) throw ScenarioError("unknown access pattern '" + p.pattern + "'");
  return *parsed;
}

std::vector<std::uint64_t> values_or(const BenchParams& p, std::vector<std::uint64_t> fallback) {
  return p.values.empty() ? fallback : p.values;
}

SourceMap make_sources(const BenchParams& p, const FrameType& type, std::uint32_t source_frames) {
  EncoderParams enc;
  enc.gop_size = p.gop;
  enc.b_frames = p.b_frames;
  return {{"v", std::make_shared<MemorySource>(
                    synthetic_stream(type, source_frames, enc, static_cast<std::uint32_t>(p.seed)))}};
}

Row run_once(const std::string& scenario, Pattern pattern, std::uint64_t param, const VideoSpec& spec,
             const SourceMap& sources, EngineConfig config) {
  // The engine refuses a pool smaller than one frame's inputs; none of
  // these specs read more than one source frame per output frame.
  config.pool_capacity = std::max<std::size_t>(config.pool_capacity, 1);
  NullSink sink;
  const RenderStats st = render(spec, sources, config, sink);
  return Row{scenario, std::string(pattern_name(pattern)), param, st.wall_ms,
             st.frames_decoded, st.evictions, st.abandonments};
}

EngineConfig base_config(const BenchParams& p) {
  EngineConfig c;
  c.decode_workers = p.decoders;
  c.filter_workers = p.filters;
  c.pool_capacity = p.pool;
  c.prefetch_window = p.window;
  return c;
}

}  // namespace

std::string_view pattern_name(Pattern p) {
  switch (p) {
    case Pattern::Sequential: return "sequential";
    case Pattern::Reverse: return "reverse";
    case Pattern::Shuffle: return "shuffle";
    case Pattern::Stride: return "stride";
  }
  return "?";
}

std::optional<Pattern> parse_pattern(std::string_view name) {
  for (auto p : {Pattern::Sequential, Pattern::Reverse, Pattern::Shuffle, Pattern::Stride})
    if (pattern_name(p) == name) return p;
  return std::nullopt;
}

std::vector<std::uint32_t> access_order(Pattern pattern, std::uint32_t count, std::uint32_t source_frames,
                                        std::uint32_t stride, std::uint64_t seed) {
  if (source_frames == 0) throw ScenarioError("source has no frames");
  std::vector<std::uint32_t> v(count);
  switch (pattern) {
    case Pattern::Sequential:
      for (std::uint32_t i = 0; i < count; ++i) v[i] = i % source_frames;
      break;
    case Pattern::Reverse:
      for (std::uint32_t i = 0; i < count; ++i) v[i] = (count - 1 - i) % source_frames;
      break;
    case Pattern::Shuffle: {
      for (std::uint32_t i = 0; i < count; ++i) v[i] = i % source_frames;
      std::mt19937_64 rng(seed);
      std::shuffle(v.begin(), v.end(), rng);
      break;
    }
    case Pattern::Stride: {
      if (stride == 0) throw ScenarioError("stride must be positive");
      std::uint64_t f = 0;
      for (std::uint32_t i = 0; i < count; ++i, f += stride) v[i] = static_cast<std::uint32_t>(f % source_frames);
      break;
    }
  }
  return v;
}

VideoSpec access_spec(const FrameType& type, const std::vector<std::uint32_t>& order, bool annotate) {
  VideoSpec spec;
  spec.spec_id = "bench";
  spec.output_type = type;
  const auto w = static_cast<std::int64_t>(type.width), h = static_cast<std::int64_t>(type.height);
  for (std::size_t g = 0; g < order.size(); ++g) {
    NodeId id = spec.nodes.source("v", order[g]);
    if (annotate) {
      id = spec.nodes.call("draw_rectangle", {id, Value(IntPair{w / 8, h / 8}), Value(IntPair{w - w / 8, h - h / 8}),
                                              Value(Color{{255, 0, 0}}), Value(std::int64_t{2})});
      id = spec.nodes.call("draw_text", {id, Value(std::to_string(order[g])), Value(IntPair{2, 9}),
                                         Value(std::int64_t{1}), Value(Color{{255, 255, 255}})});
    }
    spec.append_frame(id);
  }
  spec.terminate();
  return spec;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"threads", "pool-size", "stride", "access-pattern"};
  return names;
}

std::vector<Row> run_scenario(const std::string& scenario, const BenchParams& p) {
  const FrameType type{p.width, p.height, PixelFormat::Rgb8};
  std::vector<Row> rows;

  if (scenario == "threads") {
    const Pattern pat = pattern_or(p, Pattern::Sequential);
    const std::uint32_t frames = p.frames ? p.frames : 300;
    const std::uint32_t src_frames = p.source_frames ? p.source_frames : frames;
    const auto sources = make_sources(p, type, src_frames);
    const auto spec = access_spec(type, access_order(pat, frames, src_frames, p.stride, p.seed), true);
    for (const auto v : values_or(p, {1, 2, 4, 8})) {
      auto cfg = base_config(p);
      cfg.decode_workers = cfg.filter_workers = static_cast<std::uint32_t>(v);
      rows.push_back(run_once(scenario, pat, v, spec, sources, cfg));
    }
  } else if (scenario == "pool-size") {
    const Pattern pat = pattern_or(p, Pattern::Shuffle);
    const std::uint32_t frames = p.frames ? p.frames : 500;
    const std::uint32_t src_frames = p.source_frames ? p.source_frames : frames;
    const auto sources = make_sources(p, type, src_frames);
    const auto spec = access_spec(type, access_order(pat, frames, src_frames, p.stride, p.seed), false);
    for (const auto v : values_or(p, {10, 20, 30, 40, 50, 60, 70, 80, 90, 100})) {
      auto cfg = base_config(p);
      cfg.decode_workers = 1;
      cfg.pool_capacity = v;
      rows.push_back(run_once(scenario, pat, v, spec, sources, cfg));
    }
  } else if (scenario == "stride") {
    const Pattern pat = pattern_or(p, Pattern::Stride);
    const std::uint32_t src_frames = p.source_frames ? p.source_frames : 50000;
    const std::uint32_t frames = p.frames ? p.frames : std::max(1u, src_frames / std::max(1u, p.stride));
    const auto sources = make_sources(p, type, src_frames);
    const auto spec = access_spec(type, access_order(pat, frames, src_frames, p.stride, p.seed), false);
    for (const auto v : values_or(p, {1, 2, 4, 8})) {
      auto cfg = base_config(p);
      cfg.decode_workers = static_cast<std::uint32_t>(v);
      cfg.filter_workers = std::max<std::uint32_t>(p.filters, static_cast<std::uint32_t>(v));
      rows.push_back(run_once(scenario, pat, v, spec, sources, cfg));
    }
  } else if (scenario == "access-pattern") {
    if (!p.pattern.empty()) pattern_or(p, Pattern::Sequential);  // validates the name
    const std::uint32_t frames = p.frames ? p.frames : 500;
    const std::uint32_t src_frames = p.source_frames ? p.source_frames : frames;
    const auto sources = make_sources(p, type, src_frames);
    std::vector<Pattern> patterns{Pattern::Sequential, Pattern::Reverse, Pattern::Shuffle, Pattern::Stride};
    if (!p.pattern.empty()) patterns = {pattern_or(p, Pattern::Sequential)};
    for (const Pattern pat : patterns) {
      const auto spec = access_spec(type, access_order(pat, frames, src_frames, p.stride, p.seed), false);
      for (const auto v : values_or(p, {p.pool})) {
        auto cfg = base_config(p);
        cfg.pool_capacity = v;
        rows.push_back(run_once(scenario, pat, v, spec, sources, cfg));
      }
    }
  } else {
    throw ScenarioError("unknown scenario '" + scenario + "'; expected threads, pool-size, stride or access-pattern");
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<Row>& rows, bool header) {
  if (header) out << kCsvHeader << '\n';
  for (const auto& r : rows)
    out << r.scenario << ',' << r.pattern << ',' << r.param << ',' << std::fixed << std::setprecision(3)
        << r.wall_ms << ',' << r.frames_decoded << ',' << r.evictions << ',' << r.abandonments << '\n';
}

}  // namespace reel::bench
