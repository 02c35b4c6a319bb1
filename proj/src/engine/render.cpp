#include "reel/engine/render.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "reel/engine/core.hpp"
#include "reel/engine/evaluate.hpp"
#include "reel/filters/registry.hpp"
#include "reel/ir/schedule.hpp"
#include "reel/ir/typecheck.hpp"

namespace reel {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::pair<std::size_t, std::size_t> clamp_range(const VideoSpec& spec, RenderRange range) {
  const std::size_t last = std::min(range.last, spec.frames.size());
  if (range.first > last)
    throw std::invalid_argument("render range starts at " + std::to_string(range.first) +
                                " past the end (" + std::to_string(last) + ")");
  return {range.first, last};
}

/// Everything a render needs besides the core: source ordinals, the keyed
/// schedule and GOP layout.
struct Job {
  const VideoSpec* spec = nullptr;
  std::size_t first = 0;
  std::size_t last = 0;
  std::vector<std::string> names;
  std::map<std::string, std::uint32_t, std::less<>> ordinal;
  std::vector<VideoSourcePtr> sources;
  std::vector<std::vector<FrameKey>> schedule;
  GopLayout layout;

  FrameKey key_of(const SourceRef& r) const { return make_key(ordinal.at(r.source_id), r.frame_index); }
  SourceRef ref_of(FrameKey k) const { return SourceRef{names[key_source(k)], key_frame(k)}; }
};

Job make_job(const VideoSpec& spec, const SourceMap& sources, RenderRange range) {
  Job job;
  job.spec = &spec;
  std::tie(job.first, job.last) = clamp_range(spec, range);
  const auto needs = extract_schedule(spec, job.first, job.last);
  std::set<std::string> used;
  for (std::size_t g = 0; g < needs.size(); ++g)
    for (const auto& r : needs[g]) {
      auto it = sources.find(r.source_id);
      if (it == sources.end())
        throw RenderError(job.first + g, "unknown source '" + r.source_id + "'");
      if (r.frame_index >= it->second->info().header.frame_count)
        throw RenderError(job.first + g, "source '" + r.source_id + "' has no frame " +
                                             std::to_string(r.frame_index));
      used.insert(r.source_id);
    }
  std::vector<std::vector<GopEntry>> gops;
  for (const auto& id : used) {
    job.ordinal.emplace(id, static_cast<std::uint32_t>(job.names.size()));
    job.names.push_back(id);
    job.sources.push_back(sources.find(id)->second);
    gops.push_back(job.sources.back()->info().gops);
  }
  job.layout = GopLayout(std::move(gops));
  job.schedule.reserve(needs.size());
  for (const auto& list : needs) {
    std::vector<FrameKey> keys;
    keys.reserve(list.size());
    for (const auto& r : list) keys.push_back(job.key_of(r));
    job.schedule.push_back(std::move(keys));
  }
  return job;
}

RasterPtr evaluate_gen(const Job& job, std::uint32_t g,
                       const std::vector<std::pair<FrameKey, RasterPtr>>& inputs,
                       std::vector<std::pair<std::uint64_t, SourceRef>>* log) {
  const std::uint64_t abs = job.first + g;
  try {
    return evaluate(job.spec->nodes, job.spec->frames[job.first + g], [&](const SourceRef& r) {
      const FrameKey k = job.key_of(r);
      auto it = std::lower_bound(inputs.begin(), inputs.end(), k,
                                 [](const auto& p, FrameKey key) { return p.first < key; });
      if (it == inputs.end() || it->first != k || !it->second)
        throw std::logic_error("input frame not pooled");
      if (log) log->emplace_back(abs, r);
      return it->second;
    });
  } catch (const RenderError&) {
    throw;
  } catch (const std::exception& e) {
    throw RenderError(abs, e.what());
  }
}

void fill_stats(RenderStats& st, const RenderCore& core) {
  const auto& c = core.counters();
  st.gens = core.gen_count();
  st.frames_decoded = c.frames_decoded;
  st.frames_evaluated = c.frames_evaluated;
  st.evictions = c.evictions;
  st.abandonments = c.abandonments;
  st.stalls = c.stalls;
  st.pool_inserts = c.pool_inserts;
  st.pool_drops = c.pool_drops;
  st.gop_assignments = c.gop_assignments;
  st.max_pool_size = c.max_pool_size;
  st.max_need_set = c.max_need_set;
  st.max_reorder = c.max_reorder;
}

/// One decoder per slot, reopened whenever the slot's assignment changes.
struct DecoderHandle {
  std::unique_ptr<GopDecoder> dec;
  std::uint64_t epoch = 0;
};

DecodedFrame step_slot(const Job& job, GopRef gop, std::uint64_t epoch, DecoderHandle& h) {
  if (!h.dec || h.epoch != epoch) {
    h.dec = std::make_unique<GopDecoder>(job.sources[gop.source]->open_gop(gop.gop));
    h.epoch = epoch;
  }
  return h.dec->step();
}

RenderError decode_failure(const Job& job, const RenderCore& core, const GopRef& gop,
                           std::uint32_t slot, const std::exception& e) {
  std::uint64_t gen = core.soonest_needed(slot);
  if (gen == kNever) gen = core.done_upto();
  return RenderError(job.first + gen, "decoding source '" + job.names[gop.source] + "' gop " +
                                          std::to_string(gop.gop) + ": " + e.what());
}

CoreLimits limits_of(const EngineConfig& config) {
  return CoreLimits{config.pool_capacity, config.prefetch_window,
                    config.effective_reorder_capacity(), config.decode_workers};
}

/// Deterministic round-robin: each decoder, then each filter worker, then the
/// sink takes one action per round. A round in which nobody moves is a
/// scheduler deadlock and throws.
void run_sim(const Job& job, RenderCore& core, const EngineConfig& config, FrameSink& sink,
             RenderStats& st) {
  std::vector<DecoderHandle> handles(config.decode_workers);
  std::vector<std::pair<std::uint64_t, SourceRef>>* log = config.record_access ? &st.access_log : nullptr;
  core.plan();
  while (!core.finished()) {
    bool progress = false;
    for (std::uint32_t i = 0; i < config.decode_workers; ++i) {
      auto act = core.decide_decoder(i);
      if (act == DecoderAction::Idle && !core.assign_decoders().empty()) {
        progress = true;
        act = core.decide_decoder(i);
      }
      if (act == DecoderAction::Finished || act == DecoderAction::Abandoned) progress = true;
      if (act != DecoderAction::Step) continue;
      const auto t0 = Clock::now();
      const DecoderSlot& slot = core.slot(i);
      DecodedFrame f;
      try {
        f = step_slot(job, slot.gop, slot.epoch, handles[i]);
      } catch (const std::exception& e) {
        throw decode_failure(job, core, slot.gop, i, e);
      }
      st.decoder_busy_ms[i] += ms_since(t0);
      if (config.record_access)
        st.decode_log.push_back(SourceRef{job.names[slot.gop.source], f.presentation_index});
      core.commit_decoded(i, f.presentation_index, std::move(f.raster));
      progress = true;
    }
    for (std::uint32_t w = 0; w < config.filter_workers; ++w) {
      const auto g = core.take_ready();
      if (!g) break;
      const auto t0 = Clock::now();
      auto out = evaluate_gen(job, *g, core.inputs(*g), log);
      st.filter_busy_ms[w] += ms_since(t0);
      core.commit_result(*g, std::move(out));
      progress = true;
    }
    if (auto out = core.take_output()) {
      const std::uint64_t abs = job.first + core.done_upto();
      try {
        sink.consume(abs, **out);
      } catch (const std::exception& e) {
        throw RenderError(abs, std::string("sink: ") + e.what());
      }
      core.complete_output();
      progress = true;
    }
    if (!progress)
      throw std::logic_error("engine stalled at gen " + std::to_string(job.first + core.done_upto()));
  }
}

class ThreadedRunner {
 public:
  ThreadedRunner(const Job& job, RenderCore& core, const EngineConfig& config, FrameSink& sink,
                 RenderStats& st)
      : job_(job), core_(core), config_(config), sink_(sink), st_(st),
        handles_(config.decode_workers) {}

  void run() {
    {
      std::lock_guard lk(mu_);
      core_.plan();
    }
    std::vector<std::thread> threads;
    for (std::uint32_t i = 0; i < config_.decode_workers; ++i)
      threads.emplace_back([this, i] { guarded([&] { decoder_loop(i); }); });
    for (std::uint32_t w = 0; w < config_.filter_workers; ++w)
      threads.emplace_back([this, w] { guarded([&] { filter_loop(w); }); });
    guarded([&] { sink_loop(); });
    for (auto& t : threads) t.join();
    if (error_) std::rethrow_exception(error_);
  }

 private:
  bool stop() const { return error_ || core_.finished(); }

  template <class F>
  void guarded(F&& body) {
    try {
      body();
    } catch (...) {
      std::lock_guard lk(mu_);
      if (!error_) error_ = std::current_exception();
      wake_everyone();
    }
  }

  // Each role sleeps on its own condition variable and is woken only by
  // events that can unblock it. One shared variable made every decoded frame
  // wake every filter worker and the sink.
  void wake_everyone() {
    decoders_cv_.notify_all();
    filters_cv_.notify_all();
    sink_cv_.notify_all();
  }

  /// One filter worker per runnable gen, at most all of them.
  void wake_filters(std::size_t gens) {
    if (gens >= config_.filter_workers) {
      filters_cv_.notify_all();
      return;
    }
    while (gens-- > 0) filters_cv_.notify_one();
  }

  void decoder_loop(std::uint32_t i) {
    std::unique_lock lk(mu_);
    const bool peers = config_.decode_workers > 1;
    while (!stop()) {
      auto act = core_.decide_decoder(i);
      if (act == DecoderAction::Idle) {
        if (core_.assign_decoders().empty())
          decoders_cv_.wait(lk);
        else if (peers)
          decoders_cv_.notify_all();
        continue;
      }
      if (act == DecoderAction::Finished || act == DecoderAction::Abandoned) {
        // A released GOP can change what a stalled peer should do.
        if (peers) decoders_cv_.notify_all();
        continue;
      }
      if (act == DecoderAction::Stalled) {
        decoders_cv_.wait(lk);
        continue;
      }
      const GopRef gop = core_.slot(i).gop;
      const std::uint64_t epoch = core_.slot(i).epoch;
      lk.unlock();
      const auto t0 = Clock::now();
      DecodedFrame f;
      std::exception_ptr failed;
      try {
        f = step_slot(job_, gop, epoch, handles_[i]);
      } catch (...) {
        failed = std::current_exception();
      }
      const double busy = ms_since(t0);
      lk.lock();
      if (failed) {
        try {
          std::rethrow_exception(failed);
        } catch (const std::exception& e) {
          throw decode_failure(job_, core_, gop, i, e);
        }
      }
      st_.decoder_busy_ms[i] += busy;
      if (config_.record_access)
        st_.decode_log.push_back(SourceRef{job_.names[gop.source], f.presentation_index});
      const std::size_t ready_before = core_.ready_count();
      core_.commit_decoded(i, f.presentation_index, std::move(f.raster));
      wake_filters(core_.ready_count() - std::min(ready_before, core_.ready_count()));
      if (peers) decoders_cv_.notify_all();
    }
  }

  void filter_loop(std::uint32_t w) {
    std::unique_lock lk(mu_);
    std::vector<std::pair<std::uint64_t, SourceRef>> log;
    while (!stop()) {
      const auto g = core_.take_ready();
      if (!g) {
        filters_cv_.wait(lk);
        continue;
      }
      auto inputs = core_.inputs(*g);
      lk.unlock();
      const auto t0 = Clock::now();
      log.clear();
      auto out = evaluate_gen(job_, *g, inputs, config_.record_access ? &log : nullptr);
      const double busy = ms_since(t0);
      lk.lock();
      st_.filter_busy_ms[w] += busy;
      st_.access_log.insert(st_.access_log.end(), log.begin(), log.end());
      core_.commit_result(*g, std::move(out));
      if (*g == core_.done_upto()) sink_cv_.notify_one();
    }
  }

  void sink_loop() {
    std::unique_lock lk(mu_);
    while (!stop()) {
      auto out = core_.take_output();
      if (!out) {
        sink_cv_.wait(lk);
        continue;
      }
      const std::uint64_t abs = job_.first + core_.done_upto();
      lk.unlock();
      try {
        sink_.consume(abs, **out);
      } catch (const std::exception& e) {
        throw RenderError(abs, std::string("sink: ") + e.what());
      }
      lk.lock();
      // Completing a gen shrinks the NeedSet, frees reorder room and lets
      // the planner admit more gens.
      core_.complete_output();
      decoders_cv_.notify_all();
      wake_filters(core_.ready_count());
    }
    wake_everyone();
  }

  const Job& job_;
  RenderCore& core_;
  const EngineConfig& config_;
  FrameSink& sink_;
  RenderStats& st_;
  std::vector<DecoderHandle> handles_;
  std::mutex mu_;
  std::condition_variable decoders_cv_;
  std::condition_variable filters_cv_;
  std::condition_variable sink_cv_;
  std::exception_ptr error_;
};

}  // namespace

void validate_render(const VideoSpec& spec, const SourceMap& sources, RenderRange range) {
  const auto [first, last] = clamp_range(spec, range);
  SourceTypes types;
  for (const auto& [id, src] : sources) types.emplace(id, src->info().header.frame_type());
  TypeChecker checker(spec.nodes, types, filters::signature_table());
  for (std::size_t g = first; g < last; ++g) {
    FrameType t;
    try {
      t = checker.check(spec.frames[g]);
    } catch (const TypeError& e) {
      throw RenderError(g, e.what());
    }
    if (!(t == spec.output_type))
      throw RenderError(g, "frame type " + t.to_string() + " differs from output type " +
                               spec.output_type.to_string());
    for (const auto& r : source_refs(spec.nodes, spec.frames[g])) {
      const auto& info = sources.find(r.source_id)->second->info();
      if (r.frame_index >= info.header.frame_count)
        throw RenderError(g, "source '" + r.source_id + "' has no frame " +
                                 std::to_string(r.frame_index));
    }
  }
}

RenderStats render(const VideoSpec& spec, const SourceMap& sources, const EngineConfig& config,
                   FrameSink& sink, RenderRange range) {
  config.validate();
  if (config.check_types) validate_render(spec, sources, range);
  const auto t0 = Clock::now();
  Job job = make_job(spec, sources, range);
  RenderCore core(job.schedule, job.layout, limits_of(config));
  RenderStats st;
  st.decoder_busy_ms.assign(config.decode_workers, 0.0);
  st.filter_busy_ms.assign(config.filter_workers, 0.0);
  const bool sim = config.simulate || (config.decode_workers == 1 && config.filter_workers == 1);
  st.mode = sim ? "sim" : "threaded";
  sink.begin(spec.output_type);
  if (sim) {
    run_sim(job, core, config, sink, st);
  } else {
    ThreadedRunner runner(job, core, config, sink, st);
    runner.run();
  }
  sink.end();
  fill_stats(st, core);
  st.wall_ms = ms_since(t0);
  return st;
}

RenderStats reference_render(const VideoSpec& spec, const SourceMap& sources, FrameSink& sink,
                             RenderRange range) {
  validate_render(spec, sources, range);
  const auto t0 = Clock::now();
  const auto [first, last] = clamp_range(spec, range);
  RenderStats st;
  st.mode = "reference";
  st.gens = last - first;
  sink.begin(spec.output_type);
  for (std::size_t g = first; g < last; ++g) {
    RasterPtr out;
    try {
      out = evaluate(spec.nodes, spec.frames[g], [&](const SourceRef& r) {
        return decode_frame(*sources.find(r.source_id)->second, r.frame_index, &st.frames_decoded);
      });
    } catch (const std::exception& e) {
      throw RenderError(g, e.what());
    }
    ++st.frames_evaluated;
    sink.consume(g, *out);
  }
  sink.end();
  st.wall_ms = ms_since(t0);
  return st;
}

}  // namespace reel
