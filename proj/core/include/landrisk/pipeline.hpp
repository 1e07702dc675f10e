#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "landrisk/class_table.hpp"
#include "landrisk/morphology.hpp"
#include "landrisk/render.hpp"
#include "landrisk/types.hpp"

namespace landrisk {

/// Run parameters shared by the CLI commands. File-based so that class
/// tables, palettes and dilation radii stay data, not compiled-in numbers.
struct RunConfig {
    std::string classes_path;
    std::string colormap_path;
    DilationPolicy dilation{};      // identity unless configured
    RiskLevel slz_threshold = 1;
    int slz_k = 5;
    double alpha = 0.5;
    double budget_fps = 14.0;

    /// Reads a JSON config; `classes`/`colormap` paths resolve relative to
    /// the config file's directory. Unknown keys are rejected.
    static RunConfig from_file(const std::string& path);
    static RunConfig from_json(const nlohmann::json& doc, const std::string& base_dir);
};

struct PipelineStats {
    std::uint64_t frames = 0;
    std::map<std::string, std::uint64_t> per_stage_nanos;  // summed busy time per stage
    std::uint64_t wall_nanos = 0;
    double min_fps = 0;   // 1 / slowest per-frame latency
    double mean_fps = 0;  // frames / summed per-frame latency
    double budget_fps = 0;

    bool budget_met() const { return frames > 0 && min_fps >= budget_fps; }
    nlohmann::json to_json() const;
};

/// Produces the next raw label record; returns false at a clean end of
/// input, throws on malformed framing.
using FrameSource = std::function<bool(std::vector<std::uint8_t>&)>;

/// Receives encoded raw risk records strictly in input order, always on
/// the caller's thread.
using FrameSink = std::function<void(std::uint64_t index, const std::vector<std::uint8_t>& rkm)>;

struct StreamResult {
    PipelineStats stats;
    std::optional<std::string> error;  // set when a malformed frame aborted the stream

    bool ok() const { return !error.has_value(); }
};

/// Streaming pipeline: raw decode → class→risk map → dilation → raw
/// encode, frame by frame. Frames are decoded in arrival order on the
/// calling thread; mapping, dilation and encoding fan out to `threads`
/// workers; the sink sees results in input order, bit-identical to the
/// sequential run. A malformed frame stops the stream after every earlier
/// frame has been emitted, with stats covering the emitted frames.
StreamResult run_stream(const FrameSource& source, const ClassTable& table,
                        const DilationPolicy& policy, const FrameSink& sink, int threads);

/// Worker count: `requested` if positive else hardware concurrency, then
/// capped by the LANDRISK_THREADS environment variable when set.
int resolve_thread_count(int requested = 0);

}  // namespace landrisk
