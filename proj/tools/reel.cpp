#include <signal.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "reel/bench/scenarios.hpp"
#include "reel/codec/file_source.hpp"
#include "reel/codec/synthetic.hpp"
#include "reel/ir/schedule.hpp"
#include "reel/ir/spec_json.hpp"
#include "reel/server/config.hpp"
#include "reel/server/http.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace reel;

namespace {

// Exit codes: 1 for general failures, 2 when a spec names a source that
// cannot be found.
constexpr int kExitFailure = 1;
constexpr int kExitMissingSource = 2;

struct Failure {
  int code;
  std::string message;
};

struct EngineFlags {
  std::uint32_t threads = 0;
  std::uint32_t decoders = 0;
  std::uint32_t filters = 0;
  std::size_t pool = 0;
  std::size_t window = 0;
  bool simulate = false;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--threads", threads, "Decode and filter workers (sets both)")->check(CLI::PositiveNumber);
    cmd.add_option("--decoders", decoders, "Decode workers")->check(CLI::PositiveNumber);
    cmd.add_option("--filters", filters, "Filter workers")->check(CLI::PositiveNumber);
    cmd.add_option("--pool", pool, "Decoded frame pool capacity")->check(CLI::PositiveNumber);
    cmd.add_option("--window", window, "Prefetch window in output frames")->check(CLI::PositiveNumber);
    cmd.add_flag("--simulate", simulate, "Use the deterministic single-thread scheduler");
  }

  EngineConfig config() const {
    EngineConfig c;
    if (threads) c.decode_workers = c.filter_workers = threads;
    if (decoders) c.decode_workers = decoders;
    if (filters) c.filter_workers = filters;
    if (pool) c.pool_capacity = pool;
    if (window) c.prefetch_window = window;
    c.simulate = simulate;
    return c;
  }
};

VideoSpec read_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitFailure, "cannot open spec file '" + path + "'"};
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return deserialize_spec(text);
  } catch (const SpecFormatError& e) {
    throw Failure{kExitFailure, path + ": " + e.what()};
  }
}

/// Binds every source the spec reads to `<dir>/<id>.tvc`, or `<dir>/<id>`
/// when the id already carries an extension.
SourceMap bind_sources(const VideoSpec& spec, const fs::path& dir) {
  SourceMap out;
  std::set<std::string> seen;
  for (const auto& needs : extract_schedule(spec))
    for (const auto& ref : needs) {
      if (!seen.insert(ref.source_id).second) continue;
      fs::path p = dir / (ref.source_id + ".tvc");
      if (!fs::exists(p)) p = dir / ref.source_id;
      if (!fs::is_regular_file(p))
        throw Failure{kExitMissingSource, "source '" + ref.source_id + "' not found in " + dir.string()};
      try {
        out.emplace(ref.source_id, open_file_source(p.string()));
      } catch (const CodecError& e) {
        throw Failure{kExitFailure, "source '" + ref.source_id + "': " + e.what()};
      }
    }
  return out;
}

int cmd_render(const std::string& spec_path, const std::string& sources_dir, const std::string& out_path,
               const EngineFlags& flags, const EncoderParams& enc, bool stats) {
  const VideoSpec spec = read_spec(spec_path);
  if (spec.frames.empty()) throw Failure{kExitFailure, "spec has no frames; TVC cannot hold an empty stream"};
  const SourceMap sources = bind_sources(spec, sources_dir);

  EngineConfig config = flags.config();
  if (!flags.pool) {
    std::size_t widest = 0;
    for (const auto& needs : extract_schedule(spec)) widest = std::max(widest, needs.size());
    config.pool_capacity = std::max(config.pool_capacity, widest);
  }
  EncoderParams params = enc;
  params.fps_num = spec.fps_num;
  params.fps_den = spec.fps_den;
  TvcSink sink(params);
  const RenderStats st = render(spec, sources, config, sink);
  write_file(out_path, sink.bytes());
  if (stats) std::cout << st.to_json().dump(2) << '\n';
  return 0;
}

int cmd_make_synthetic(std::uint32_t width, std::uint32_t height, const std::string& pixfmt,
                       std::uint32_t frames, const EncoderParams& enc, std::uint32_t seed,
                       const std::string& out) {
  const auto fmt = parse_pixfmt(pixfmt);
  if (!fmt) throw Failure{kExitFailure, "unknown pixel format '" + pixfmt + "'"};
  const FrameType type{width, height, *fmt};
  if (!type.valid()) throw Failure{kExitFailure, "invalid frame type " + type.to_string()};
  if (frames == 0) throw Failure{kExitFailure, "--frames must be positive"};
  write_file(out, synthetic_stream(type, frames, enc, seed));
  return 0;
}

json info_to_json(const TvcInfo& info) {
  const auto& h = info.header;
  json gops = json::array();
  for (const auto& g : info.gops)
    gops.push_back({{"offset", g.byte_offset}, {"first_frame", g.first_presentation_index}, {"frames", g.frames_in_gop}});
  return {{"width", h.width},
          {"height", h.height},
          {"pixfmt", std::string(pixfmt_name(h.pixfmt))},
          {"fps", {h.fps_num, h.fps_den}},
          {"frame_count", h.frame_count},
          {"gop_count", h.gop_count},
          {"file_size", info.file_size},
          {"gops", gops}};
}

int cmd_probe(const std::string& path) {
  FileReader reader(path);
  std::cout << info_to_json(probe(reader)).dump(2) << '\n';
  return 0;
}

int cmd_bench(const std::string& scenario, const bench::BenchParams& params, const std::string& csv) {
  const auto rows = bench::run_scenario(scenario, params);
  if (csv.empty() || csv == "-") {
    bench::write_csv(std::cout, rows);
  } else {
    std::ofstream out(csv);
    if (!out) throw Failure{kExitFailure, "cannot write '" + csv + "'"};
    bench::write_csv(out, rows);
  }
  return 0;
}

int cmd_serve(const std::string& config_path) {
  server::ServerConfig config;
  try {
    if (!config_path.empty()) config = server::load_config(config_path);
    server::apply_env_overrides(config);
  } catch (const server::ConfigError& e) {
    throw Failure{kExitFailure, (config_path.empty() ? "environment" : config_path) + ": " + e.what()};
  }

  // Handle SIGINT/SIGTERM on this thread; block them before any worker
  // thread exists so the mask is inherited.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  server::VodService service(config);
  for (const auto& skipped : service.skipped_on_replay()) std::cerr << "skipped on replay: " << skipped << '\n';
  server::HttpServer http(service, config.bind, config.port, config.http_threads);
  http.start();
  std::cerr << "serving on " << config.bind << ':' << http.port() << " (data in " << config.data_dir << ")\n";
  int sig = 0;
  sigwait(&signals, &sig);
  std::cerr << "shutting down\n";
  http.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reel: declarative video rendering and on-demand streaming"};
  app.require_subcommand(1);

  EngineFlags engine;
  EncoderParams enc;
  bool stats = false;
  std::string spec_path, sources_dir = ".", out_path;
  auto* render_cmd = app.add_subcommand("render", "Render a spec file into a TVC container");
  render_cmd->add_option("spec", spec_path, "Spec JSON file")->required();
  render_cmd->add_option("-s,--sources", sources_dir, "Directory holding <source_id>.tvc files");
  render_cmd->add_option("-o,--out", out_path, "Output container")->required();
  render_cmd->add_option("--gop", enc.gop_size, "Output GOP size")->check(CLI::PositiveNumber);
  render_cmd->add_flag("--b-frames", enc.b_frames, "Encode the output with B-frames");
  render_cmd->add_flag("--stats", stats, "Print the instrumentation report as JSON");
  engine.add_to(*render_cmd);

  std::uint32_t width = 64, height = 64, frames = 300, seed = 0;
  std::string pixfmt = "rgb8", synth_out;
  EncoderParams synth_enc;
  auto* synth_cmd = app.add_subcommand("make-synthetic", "Write a deterministic synthetic TVC file");
  synth_cmd->add_option("--width", width)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--height", height)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--pixfmt", pixfmt, "gray8, rgb8, bgr8 or yuv420p");
  synth_cmd->add_option("--frames", frames);
  synth_cmd->add_option("--gop", synth_enc.gop_size)->check(CLI::PositiveNumber);
  synth_cmd->add_flag("--b-frames", synth_enc.b_frames);
  synth_cmd->add_option("--seed", seed);
  synth_cmd->add_option("--fps-num", synth_enc.fps_num)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--fps-den", synth_enc.fps_den)->check(CLI::PositiveNumber);
  synth_cmd->add_option("-o,--out", synth_out)->required();

  std::string probe_path;
  auto* probe_cmd = app.add_subcommand("probe", "Print a container's header and GOP table as JSON");
  probe_cmd->add_option("path", probe_path)->required();

  std::string scenario, csv;
  bench::BenchParams bp;
  std::uint32_t bench_threads = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment scenario and emit CSV rows");
  bench_cmd->add_option("scenario", scenario, "threads, pool-size, stride or access-pattern")->required();
  bench_cmd->add_option("--pattern", bp.pattern, "sequential, reverse, shuffle or stride");
  bench_cmd->add_option("--frames", bp.frames, "Output frames per run");
  bench_cmd->add_option("--source-frames", bp.source_frames, "Synthetic source length");
  bench_cmd->add_option("--width", bp.width)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--height", bp.height)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--gop", bp.gop)->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--b-frames", bp.b_frames);
  bench_cmd->add_option("--seed", bp.seed);
  bench_cmd->add_option("--threads", bench_threads, "Sets --decoders and --filters")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--decoders", bp.decoders)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--filters", bp.filters)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--pool", bp.pool)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--window", bp.window)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--stride", bp.stride)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--values", bp.values, "Override the swept parameter values")->delimiter(',');
  bench_cmd->add_option("--csv", csv, "Output CSV path (default stdout)");

  std::string config_path;
  auto* serve_cmd = app.add_subcommand("serve", "Run the streaming server");
  serve_cmd->add_option("config", config_path, "Configuration file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*render_cmd) return cmd_render(spec_path, sources_dir, out_path, engine, enc, stats);
    if (*synth_cmd) return cmd_make_synthetic(width, height, pixfmt, frames, synth_enc, seed, synth_out);
    if (*probe_cmd) return cmd_probe(probe_path);
    if (*bench_cmd) {
      if (bench_threads && !bench_cmd->count("--decoders")) bp.decoders = bench_threads;
      if (bench_threads && !bench_cmd->count("--filters")) bp.filters = bench_threads;
      return cmd_bench(scenario, bp, csv);
    }
    if (*serve_cmd) return cmd_serve(config_path);
  } catch (const Failure& f) {
    std::cerr << "reel: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "reel: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
