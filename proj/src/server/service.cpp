#include "reel/server/service.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <random>

#include "reel/codec/file_source.hpp"
#include "reel/filters/registry.hpp"
#include "reel/ir/schedule.hpp"
#include "reel/ir/spec_json.hpp"

namespace reel::server {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(int status, const std::string& kind, const std::string& detail, json extra = {}) {
  json body = {{"error", kind}, {"detail", detail}};
  if (extra.is_object())
    for (auto& [k, v] : extra.items()) body[k] = v;
  throw ServiceError(status, std::move(body));
}

[[noreturn]] void unknown_spec(const std::string& id) { fail(404, "UnknownSpec", "no spec '" + id + "'"); }

json policy_to_json(const SecurityPolicy& p) {
  return {{"max_intermediate_width", p.max_intermediate_width},
          {"max_intermediate_height", p.max_intermediate_height},
          {"max_value_bytes", p.max_value_bytes},
          {"max_expr_depth", p.max_expr_depth}};
}

/// Request limits may only tighten the server's.
SecurityPolicy merge_policy(const SecurityPolicy& base, const json& req) {
  SecurityPolicy p = base;
  if (req.is_null()) return p;
  if (!req.is_object()) fail(400, "BadRequest", "'policy' must be an object");
  auto tighten = [&](const char* key, auto& field) {
    auto it = req.find(key);
    if (it == req.end()) return;
    const auto n = json_count(*it);
    if (!n || *n == 0)
      fail(400, "BadRequest", std::string("policy.") + key + " must be a positive integer");
    const auto v = *n;
    if (v < field) field = static_cast<std::remove_reference_t<decltype(field)>>(v);
  };
  tighten("max_intermediate_width", p.max_intermediate_width);
  tighten("max_intermediate_height", p.max_intermediate_height);
  tighten("max_value_bytes", p.max_value_bytes);
  tighten("max_expr_depth", p.max_expr_depth);
  for (auto& [k, v] : req.items())
    if (!policy_to_json(base).contains(k)) fail(400, "BadRequest", "unknown policy key '" + k + "'");
  return p;
}

}  // namespace

ServiceError::ServiceError(int status, json body)
    : std::runtime_error(body.value("error", std::string("Error")) + ": " +
                         body.value("detail", std::string())),
      status_(status),
      body_(std::move(body)) {}

json ServiceCounters::to_json() const {
  return {{"specs", specs},
          {"engine_renders", engine_renders},
          {"segment_cache",
           {{"hits", segment_cache.hits},
            {"misses", segment_cache.misses},
            {"renders", segment_cache.renders},
            {"coalesced", segment_cache.coalesced},
            {"evictions", segment_cache.evictions},
            {"resident_bytes", segment_cache.resident_bytes}}},
          {"block_cache",
           {{"hits", block_cache.hits},
            {"misses", block_cache.misses},
            {"backend_reads", block_cache.backend_reads},
            {"evictions", block_cache.evictions},
            {"resident_bytes", block_cache.resident_bytes}}}};
}

struct VodService::Entry {
  std::string id;
  json create_record;
  std::map<std::string, std::string> bindings;
  SourceMap sources;
  SourceTypes source_types;
  std::map<std::string, std::uint32_t> source_frames;
  SecurityPolicy policy;
  SegmentLayout layout;

  mutable std::mutex mu;  // guards spec
  VideoSpec spec;
  std::atomic<bool> deleted{false};
};

VodService::VodService(ServerConfig config)
    : config_(std::move(config)),
      blocks_(std::make_shared<BlockCache>(config_.block_cache_bytes)),
      segments_(config_.segment_cache_bytes),
      store_((fs::path(config_.data_dir) / "specs").string()) {
  config_.validate();
  for (auto& log : store_.load_all()) {
    if (log.records.empty() || log.records[0].value("op", "") != "create") {
      skipped_.push_back(log.spec_id);
      continue;
    }
    std::shared_ptr<Entry> e;
    try {
      e = build_entry(log.spec_id, log.records[0]);
      for (std::size_t i = 1; i < log.records.size(); ++i) apply_part(*e, log.records[i], false);
    } catch (const std::exception& ex) {
      std::cerr << "reel: skipping spec " << log.spec_id << ": " << ex.what() << "\n";
      skipped_.push_back(log.spec_id);
      continue;
    }
    specs_.emplace(log.spec_id, std::move(e));
  }
}

VodService::~VodService() = default;

std::string VodService::fresh_id() {
  static thread_local std::mt19937_64 rng(std::random_device{}());
  for (;;) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%012llx",
                  static_cast<unsigned long long>((rng() ^ ++id_counter_) & 0xffffffffffffULL));
    std::string id = buf;
    if (!specs_.count(id) && !store_.exists(id)) return id;
  }
}

std::shared_ptr<VodService::Entry> VodService::build_entry(const std::string& spec_id, const json& req) {
  if (!req.is_object()) fail(400, "BadRequest", "request must be a JSON object");
  auto e = std::make_shared<Entry>();
  e->id = spec_id;
  e->spec.spec_id = spec_id;

  const auto fps = req.find("fps");
  auto fps_term = [&](std::size_t i) {
    const auto n = json_count((*fps)[i]);
    return n && *n > 0 && *n <= 0xffffffffu;
  };
  if (fps == req.end() || !fps->is_array() || fps->size() != 2 || !fps_term(0) || !fps_term(1))
    fail(400, "BadRequest", "'fps' must be [numerator, denominator] with positive integers");
  e->spec.fps_num = (*fps)[0].get<std::uint32_t>();
  e->spec.fps_den = (*fps)[1].get<std::uint32_t>();

  const auto ot = req.find("output_type");
  if (ot == req.end()) fail(400, "BadRequest", "missing 'output_type'");
  try {
    e->spec.output_type = frame_type_from_json(*ot);
    require_valid(e->spec.output_type);
  } catch (const std::exception& ex) {
    fail(400, "BadRequest", std::string("output_type: ") + ex.what());
  }

  std::uint64_t duration_ms = config_.segment_duration_ms;
  if (auto d = req.find("segment_duration"); d != req.end() && !d->is_null()) {
    if (!d->is_number() || d->get<double>() < 0.001 || d->get<double>() > 86400)
      fail(400, "BadRequest", "'segment_duration' must be seconds in [0.001, 86400]");
    duration_ms = static_cast<std::uint64_t>(std::llround(d->get<double>() * 1000));
  }
  e->layout = SegmentLayout::make(e->spec.fps_num, e->spec.fps_den, duration_ms);
  e->policy = merge_policy(config_.policy, req.value("policy", json()));

  const auto srcs = req.find("sources");
  if (srcs == req.end() || !srcs->is_object()) fail(400, "BadRequest", "'sources' must be an object");
  for (auto& [id, path_json] : srcs->items()) {
    if (!path_json.is_string()) fail(400, "BadRequest", "source '" + id + "' path must be a string");
    std::string path = path_json.get<std::string>();
    fs::path p(path);
    if (p.is_relative() && !config_.media_dir.empty()) p = fs::path(config_.media_dir) / p;
    VideoSourcePtr src;
    try {
      src = std::make_shared<ReaderSource>(std::make_shared<CachedReader>(blocks_, p.string()));
    } catch (const std::exception& ex) {
      fail(400, "SourceError", "source '" + id + "' (" + p.string() + "): " + ex.what(), {{"source", id}});
    }
    e->bindings[id] = path;
    e->source_types[id] = FrameType{src->info().header.width, src->info().header.height,
                                    src->info().header.pixfmt};
    e->source_frames[id] = src->info().header.frame_count;
    e->sources[id] = std::move(src);
  }

  e->create_record = {{"op", "create"},
                      {"fps", {e->spec.fps_num, e->spec.fps_den}},
                      {"output_type", frame_type_to_json(e->spec.output_type)},
                      {"sources", e->bindings},
                      {"policy", policy_to_json(e->policy)},
                      {"segment_duration", static_cast<double>(duration_ms) / 1000.0}};
  return e;
}

CreateResult VodService::create_spec(const json& request) {
  std::string id;
  {
    std::lock_guard lock(mu_);
    id = fresh_id();
    // Reserve the id so a concurrent create cannot pick it.
    specs_.emplace(id, nullptr);
  }
  std::shared_ptr<Entry> e;
  try {
    e = build_entry(id, request);
    store_.create(id, e->create_record);
  } catch (...) {
    std::lock_guard lock(mu_);
    specs_.erase(id);
    throw;
  }
  {
    std::lock_guard lock(mu_);
    specs_[id] = e;
  }
  return CreateResult{id, "/vod/" + id + "/playlist.m3u8"};
}

std::shared_ptr<VodService::Entry> VodService::find(const std::string& spec_id) const {
  std::lock_guard lock(mu_);
  auto it = specs_.find(spec_id);
  if (it == specs_.end() || !it->second) return nullptr;
  return it->second;
}

PushResult VodService::apply_part(Entry& e, const json& part, bool persist) {
  std::lock_guard lock(e.mu);
  if (e.deleted) unknown_spec(e.id);
  VideoSpec& spec = e.spec;
  if (spec.terminated) fail(409, "SpecTerminated", "spec '" + e.id + "' is terminated");
  if (!part.is_object()) fail(400, "BadRequest", "part must be a JSON object");
  if (auto s = part.find("start"); s != part.end()) {
    if (json_count(*s) != std::optional<std::uint64_t>(spec.frames.size()))
      fail(409, "StartMismatch",
           "part expects frames_written " + s->dump() + " but the spec has " +
               std::to_string(spec.frames.size()),
           {{"frames_written", spec.frames.size()}});
  }
  bool terminal = false;
  if (auto t = part.find("terminal"); t != part.end()) {
    if (!t->is_boolean()) fail(400, "BadRequest", "'terminal' must be a boolean");
    terminal = t->get<bool>();
  }
  const auto frames_json = part.find("frames");
  if (frames_json == part.end() || !frames_json->is_array())
    fail(400, "BadRequest", "'frames' must be an array of node indices");
  const json nodes_json = part.value("nodes", json::array());

  const std::size_t table_before = spec.nodes.size();
  const std::uint64_t base = spec.frames.size();
  std::vector<NodeId> roots;
  try {
    const auto local = intern_json_nodes(nodes_json, spec.nodes);
    TypeChecker checker(spec.nodes, e.source_types, filters::signature_table());
    for (std::size_t i = 0; i < frames_json->size(); ++i) {
      const json& f = (*frames_json)[i];
      const std::uint64_t frame = base + i;
      if (!json_count(f) || *json_count(f) >= local.size())
        fail(400, "BadRequest", "frames[" + std::to_string(i) + "] is not an index into 'nodes'",
             {{"frame", frame}});
      const NodeId root = local[f.get<std::size_t>()];
      FrameType t;
      try {
        t = checker.check(root);
      } catch (const TypeError& te) {
        fail(422, "TypeError", te.what(), {{"frame", frame}, {"kind", type_error_name(te.kind())}});
      }
      if (t != spec.output_type)
        fail(422, "TypeError",
             "frame has type " + t.to_string() + " but the spec outputs " + spec.output_type.to_string(),
             {{"frame", frame}, {"kind", type_error_name(TypeErrorKind::FrameTypeMismatch)}});
      for (const auto& r : source_refs(spec.nodes, root))
        if (r.frame_index >= e.source_frames.at(r.source_id))
          fail(422, "TypeError",
               "source '" + r.source_id + "' has no frame " + std::to_string(r.frame_index),
               {{"frame", frame}, {"kind", type_error_name(TypeErrorKind::InvalidArgument)}});
      if (auto v = check_policy(spec.nodes, root, e.source_types, filters::signature_table(), e.policy))
        fail(422, "PolicyViolation", v->detail, {{"frame", frame}, {"limit", policy_limit_name(v->limit)}});
      roots.push_back(root);
    }
    if (persist)
      store_.append(e.id, {{"op", "part"}, {"nodes", nodes_json}, {"frames", *frames_json}, {"terminal", terminal}});
  } catch (const ServiceError&) {
    spec.nodes.truncate(table_before);
    throw;
  } catch (const SpecFormatError& ex) {
    spec.nodes.truncate(table_before);
    fail(400, "BadRequest", ex.what());
  } catch (const ExprError& ex) {
    spec.nodes.truncate(table_before);
    fail(400, "BadRequest", ex.what());
  } catch (const std::exception& ex) {
    spec.nodes.truncate(table_before);
    fail(500, "StorageError", ex.what());
  }
  for (const NodeId r : roots) spec.append_frame(r);
  if (terminal) spec.terminate();
  return PushResult{roots.size(), spec.frames.size(), spec.terminated,
                    e.layout.listed_segments(spec.frames.size(), spec.terminated)};
}

PushResult VodService::push_part(const std::string& spec_id, const json& part) {
  auto e = find(spec_id);
  if (!e) unknown_spec(spec_id);
  return apply_part(*e, part, true);
}

std::string VodService::playlist(const std::string& spec_id) const {
  auto e = find(spec_id);
  if (!e) unknown_spec(spec_id);
  std::lock_guard lock(e->mu);
  return render_playlist(e->layout, e->spec.frames.size(), e->spec.terminated);
}

SegmentResult VodService::segment(const std::string& spec_id, std::uint64_t n) {
  auto e = find(spec_id);
  if (!e) unknown_spec(spec_id);
  if (auto hit = segments_.peek({spec_id, n})) return SegmentResult{*hit, true, std::nullopt};

  std::uint64_t first = 0, count = 0;
  {
    std::lock_guard lock(e->mu);
    count = e->layout.frames_in(n, e->spec.frames.size(), e->spec.terminated);
    first = e->layout.first_frame(n);
  }
  if (count == 0)
    fail(404, "SegmentNotAvailable", "segment " + std::to_string(n) + " is not covered yet",
         {{"retry_after", 1}});

  std::optional<RenderStats> stats;
  const auto bytes = segments_.get_or_render(
      {spec_id, n},
      [&]() -> SegmentBytes {
        VideoSpec slice;
        {
          std::lock_guard lock(e->mu);
          slice = slice_spec(e->spec, first, first + count);
        }
        EngineConfig cfg = config_.engine;
        // A segment must render whatever its frames read, so the pool grows
        // to the widest frame when the configured size is too small.
        for (const auto& needs : extract_schedule(slice))
          cfg.pool_capacity = std::max(cfg.pool_capacity, needs.size());
        TvcSink sink(EncoderParams{slice.fps_num, slice.fps_den, config_.segment_gop, false});
        try {
          stats = render(slice, e->sources, cfg, sink);
        } catch (const RenderError& re) {
          fail(500, "RenderError", "gen " + std::to_string(first + re.gen()) + ": " + re.detail(),
               {{"gen", first + re.gen()}});
        } catch (const std::exception& ex) {
          fail(500, "RenderError", ex.what());
        }
        ++engine_renders_;
        return std::make_shared<const std::vector<std::uint8_t>>(sink.bytes());
      },
      [&] { return !e->deleted.load(); });
  return SegmentResult{bytes, !stats.has_value(), stats};
}

void VodService::delete_spec(const std::string& spec_id) {
  std::shared_ptr<Entry> e;
  {
    std::lock_guard lock(mu_);
    auto it = specs_.find(spec_id);
    if (it == specs_.end() || !it->second) unknown_spec(spec_id);
    e = it->second;
    specs_.erase(it);
  }
  {
    std::lock_guard lock(e->mu);
    e->deleted = true;
  }
  segments_.erase_spec(spec_id);
  store_.remove(spec_id);
}

json VodService::status(const std::string& spec_id) const {
  auto e = find(spec_id);
  if (!e) unknown_spec(spec_id);
  std::lock_guard lock(e->mu);
  const auto written = e->spec.frames.size();
  return {{"spec_id", e->id},
          {"fps", {e->spec.fps_num, e->spec.fps_den}},
          {"output_type", frame_type_to_json(e->spec.output_type)},
          {"sources", e->bindings},
          {"policy", policy_to_json(e->policy)},
          {"frames_written", written},
          {"terminated", e->spec.terminated},
          {"frames_per_segment", e->layout.frames_per_segment},
          {"segments", e->layout.listed_segments(written, e->spec.terminated)},
          {"playlist", "/vod/" + e->id + "/playlist.m3u8"}};
}

ServiceCounters VodService::counters() const {
  ServiceCounters c;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, e] : specs_) c.specs += e ? 1 : 0;
  }
  c.engine_renders = engine_renders_.load();
  c.segment_cache = segments_.stats();
  c.block_cache = blocks_->stats();
  return c;
}

}  // namespace reel::server
