#pragma once

// Experiment drivers shared by `reel bench`, the benchmark binary and the
// acceptance suite. Every scenario renders specs over in-memory synthetic
// sources and reports one row per swept parameter value.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reel/engine/render.hpp"

namespace reel::bench {

enum class Pattern { Sequential, Reverse, Shuffle, Stride };

std::string_view pattern_name(Pattern p);
std::optional<Pattern> parse_pattern(std::string_view name);

/// Source frame indices for `count` output frames over a source of
/// `source_frames`. Stride access wraps around the end of the source.
std::vector<std::uint32_t> access_order(Pattern pattern, std::uint32_t count, std::uint32_t source_frames,
                                        std::uint32_t stride, std::uint64_t seed);

/// Spec whose frame g shows source frame order[g] of source "v". With
/// `annotate`, each frame also gets a rectangle and a text label so filter
/// workers have something to do.
VideoSpec access_spec(const FrameType& type, const std::vector<std::uint32_t>& order, bool annotate);

class ScenarioError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BenchParams {
  /// Empty means the scenario's default pattern.
  std::string pattern;
  std::uint32_t width = 64;
  std::uint32_t height = 64;
  /// Output frames per run; 0 means the scenario default.
  std::uint32_t frames = 0;
  /// Source length; 0 means the scenario default.
  std::uint32_t source_frames = 0;
  std::uint32_t gop = 30;
  bool b_frames = false;
  std::uint64_t seed = 0;
  std::uint32_t decoders = 1;
  std::uint32_t filters = 1;
  std::size_t pool = 64;
  std::size_t window = 32;
  std::uint32_t stride = 128;
  /// Swept values; empty means the scenario default sweep.
  std::vector<std::uint64_t> values;
};

struct Row {
  std::string scenario;
  std::string pattern;
  std::uint64_t param = 0;
  double wall_ms = 0;
  std::uint64_t frames_decoded = 0;
  std::uint64_t evictions = 0;
  std::uint64_t abandonments = 0;
};

const std::vector<std::string>& scenario_names();

/// Runs `scenario` (threads, pool-size, stride or access-pattern). Throws
/// ScenarioError for an unknown scenario or pattern.
///
///   threads         decoders = filters = value, annotated frames
///   pool-size       one decoder, pool = value
///   stride          decoders = value, filters = max(value, --filters)
///   access-pattern  one row per pattern, pool = value
std::vector<Row> run_scenario(const std::string& scenario, const BenchParams& params);

inline constexpr std::string_view kCsvHeader =
    "scenario,pattern,param,wall_ms,frames_decoded,evictions,abandonments";

void write_csv(std::ostream& out, const std::vector<Row>& rows, bool header = true);

}  // namespace reel::bench
