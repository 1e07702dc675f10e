#include "landrisk/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "landrisk/image_io.hpp"

namespace landrisk {

namespace {

std::uint64_t now_nanos() {
    return std::uint64_t(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now().time_since_epoch())
            .count());
}

DilationPolicy policy_from_json(const nlohmann::json& arr) {
    if (!arr.is_array() || arr.size() != std::size_t(kRiskLevels))
        throw Error("config: dilation_radii must list " + std::to_string(kRiskLevels) + " radii");
    DilationPolicy policy;
    for (int i = 0; i < kRiskLevels; ++i) {
        const auto r = arr[std::size_t(i)].get<std::int64_t>();
        if (r < 0 || r > 1 << 20)
            throw Error("config: dilation radius for level " + std::to_string(i) + " out of range");
        policy.radius_per_level[std::size_t(i)] = int(r);
    }
    return policy;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& doc, const std::string& base_dir) {
    if (!doc.is_object())
        throw Error("config: expected a JSON object");

    static const char* known[] = {"classes",       "colormap", "dilation_radii", "slz_threshold",
                                  "slz_k",         "alpha",    "budget_fps"};
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw Error("config: unknown key \"" + key + "\"");
    }

    auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        if (path.is_absolute() || base_dir.empty())
            return path.string();
        return (std::filesystem::path(base_dir) / path).string();
    };

    RunConfig cfg;
    if (doc.contains("classes"))
        cfg.classes_path = resolve(doc["classes"].get<std::string>());
    if (doc.contains("colormap"))
        cfg.colormap_path = resolve(doc["colormap"].get<std::string>());
    if (doc.contains("dilation_radii"))
        cfg.dilation = policy_from_json(doc["dilation_radii"]);
    if (doc.contains("slz_threshold")) {
        const auto t = doc["slz_threshold"].get<std::int64_t>();
        if (t < 0 || t >= kRiskLevels)
            throw Error("config: slz_threshold outside [0,5]");
        cfg.slz_threshold = RiskLevel(t);
    }
    if (doc.contains("slz_k")) {
        const auto k = doc["slz_k"].get<std::int64_t>();
        if (k < 1)
            throw Error("config: slz_k must be at least 1");
        cfg.slz_k = int(k);
    }
    if (doc.contains("alpha")) {
        cfg.alpha = doc["alpha"].get<double>();
        if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0))
            throw Error("config: alpha must be in [0,1]");
    }
    if (doc.contains("budget_fps")) {
        cfg.budget_fps = doc["budget_fps"].get<double>();
        if (!(cfg.budget_fps > 0))
            throw Error("config: budget_fps must be positive");
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("config: cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("config: invalid JSON in " + path + ": " + e.what());
    }
    return from_json(doc, std::filesystem::path(path).parent_path().string());
}

nlohmann::json PipelineStats::to_json() const {
    nlohmann::json stages = nlohmann::json::object();
    for (const auto& [stage, nanos] : per_stage_nanos)
        stages[stage] = nanos;
    return nlohmann::json{
        {"schema", 1},
        {"measures", "post-inference pipeline only (raw decode, risk mapping, dilation, raw encode); "
                     "segmentation inference is outside this process"},
        {"frames", frames},
        {"per_stage_nanos", stages},
        {"wall_nanos", wall_nanos},
        {"min_fps", min_fps},
        {"mean_fps", mean_fps},
        {"budget_fps", budget_fps},
        {"budget_met", budget_met()}};
}

int resolve_thread_count(int requested) {
    int threads = requested > 0 ? requested : int(std::thread::hardware_concurrency());
    if (threads < 1)
        threads = 1;
    if (const char* cap_env = std::getenv("LANDRISK_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(cap_env, &end, 10);
        if (end == cap_env || (end && *end != '\0') || cap < 1)
            throw Error("LANDRISK_THREADS must be a positive integer, got \"" + std::string(cap_env) +
                        "\"");
        threads = std::min(threads, int(std::min(cap, long(1024))));
    }
    return threads;
}

namespace {

struct FrameJob {
    std::uint64_t index = 0;
    LabelMap labels;
    std::uint64_t decode_nanos = 0;
};

struct FrameDone {
    std::vector<std::uint8_t> rkm;
    std::uint64_t map_nanos = 0;
    std::uint64_t dilate_nanos = 0;
    std::uint64_t encode_nanos = 0;
    std::uint64_t decode_nanos = 0;
};

FrameDone process_frame(FrameJob&& job, const ClassTable& table, const DilationPolicy& policy) {
    FrameDone done;
    done.decode_nanos = job.decode_nanos;

    std::uint64_t t0 = now_nanos();
    const RiskMap mapped = map_class_to_risk(job.labels, table);
    std::uint64_t t1 = now_nanos();
    const RiskMap dilated = dilate_risk(mapped, policy);
    std::uint64_t t2 = now_nanos();
    done.rkm = encode_raw(dilated);
    std::uint64_t t3 = now_nanos();

    done.map_nanos = t1 - t0;
    done.dilate_nanos = t2 - t1;
    done.encode_nanos = t3 - t2;
    return done;
}

void accumulate(PipelineStats& stats, const FrameDone& done, std::uint64_t& worst_latency,
                std::uint64_t& total_latency) {
    stats.per_stage_nanos["decode"] += done.decode_nanos;
    stats.per_stage_nanos["map"] += done.map_nanos;
    stats.per_stage_nanos["dilate"] += done.dilate_nanos;
    stats.per_stage_nanos["encode"] += done.encode_nanos;
    const std::uint64_t latency =
        done.decode_nanos + done.map_nanos + done.dilate_nanos + done.encode_nanos;
    worst_latency = std::max(worst_latency, latency);
    total_latency += latency;
    ++stats.frames;
}

void finish_stats(PipelineStats& stats, std::uint64_t worst_latency, std::uint64_t total_latency,
                  std::uint64_t wall_start) {
    stats.wall_nanos = now_nanos() - wall_start;
    if (stats.frames > 0 && worst_latency > 0)
        stats.min_fps = 1e9 / double(worst_latency);
    if (stats.frames > 0 && total_latency > 0)
        stats.mean_fps = 1e9 * double(stats.frames) / double(total_latency);
}

}  // namespace

StreamResult run_stream(const FrameSource& source, const ClassTable& table,
                        const DilationPolicy& policy, const FrameSink& sink, int threads) {
    for (const int r : policy.radius_per_level)
        if (r < 0)
            throw Error("run_stream: negative dilation radius");

    StreamResult result;
    PipelineStats& stats = result.stats;
    std::uint64_t worst_latency = 0;
    std::uint64_t total_latency = 0;
    const std::uint64_t wall_start = now_nanos();
    threads = std::max(1, threads);

    if (threads == 1) {
        std::vector<std::uint8_t> record;
        std::uint64_t index = 0;
        while (true) {
            FrameJob job;
            job.index = index;
            try {
                const std::uint64_t t0 = now_nanos();
                if (!source(record))
                    break;
                job.labels = decode_raw_labels(record, table);
                job.decode_nanos = now_nanos() - t0;
            } catch (const Error& e) {
                result.error = "frame " + std::to_string(index) + ": " + e.what();
                break;
            }
            const FrameDone done = process_frame(std::move(job), table, policy);
            accumulate(stats, done, worst_latency, total_latency);
            sink(index, done.rkm);
            ++index;
        }
        finish_stats(stats, worst_latency, total_latency, wall_start);
        if (!result.error && stats.frames == 0)
            result.error = "no frames";
        return result;
    }

    // Reader (this thread) decodes sequentially and feeds a bounded queue;
    // workers map/dilate/encode; this thread emits strictly in index order.
    std::mutex mu;
    std::condition_variable cv_task;   // workers: a job arrived or the queue closed
    std::condition_variable cv_space;  // reader: the queue has room again
    std::condition_variable cv_done;   // reader: a result landed
    std::deque<FrameJob> queue;
    std::map<std::uint64_t, FrameDone> completed;
    bool closed = false;
    const std::size_t queue_cap = std::size_t(threads) * 4;

    std::vector<std::thread> workers;
    workers.reserve(std::size_t(threads));
    for (int t = 0; t < threads; ++t) {
        workers.emplace_back([&] {
            while (true) {
                FrameJob job;
                {
                    std::unique_lock lock(mu);
                    cv_task.wait(lock, [&] { return closed || !queue.empty(); });
                    if (queue.empty())
                        return;
                    job = std::move(queue.front());
                    queue.pop_front();
                }
                cv_space.notify_one();
                const std::uint64_t index = job.index;
                FrameDone done = process_frame(std::move(job), table, policy);
                {
                    std::lock_guard lock(mu);
                    completed.emplace(index, std::move(done));
                }
                cv_done.notify_all();
            }
        });
    }

    // Shut the pool down on every exit path, including a throwing sink:
    // an unwinding frame must never abandon joinable workers.
    auto shutdown = [&] {
        {
            std::lock_guard lock(mu);
            closed = true;
            queue.clear();
        }
        cv_task.notify_all();
        for (auto& w : workers)
            if (w.joinable())
                w.join();
    };

    std::uint64_t next_in = 0;
    std::uint64_t next_out = 0;
    std::vector<std::uint8_t> record;

    // Emits completed frames in index order; with `block` set, waits until
    // everything dispatched so far has been emitted.
    auto drain_ready = [&](bool block) {
        std::unique_lock lock(mu);
        while (next_out < next_in) {
            if (block)
                cv_done.wait(lock, [&] { return completed.count(next_out) > 0; });
            auto it = completed.find(next_out);
            if (it == completed.end())
                break;
            FrameDone done = std::move(it->second);
            completed.erase(it);
            lock.unlock();
            accumulate(stats, done, worst_latency, total_latency);
            sink(next_out, done.rkm);
            ++next_out;
            lock.lock();
        }
    };

    try {
        while (true) {
            FrameJob job;
            job.index = next_in;
            try {
                const std::uint64_t t0 = now_nanos();
                if (!source(record))
                    break;
                job.labels = decode_raw_labels(record, table);
                job.decode_nanos = now_nanos() - t0;
            } catch (const Error& e) {
                result.error = "frame " + std::to_string(next_in) + ": " + e.what();
                break;
            }
            {
                std::unique_lock lock(mu);
                cv_space.wait(lock, [&] { return queue.size() < queue_cap; });
                queue.push_back(std::move(job));
            }
            cv_task.notify_one();
            ++next_in;
            drain_ready(false);
        }
        drain_ready(true);
    } catch (...) {
        shutdown();
        throw;
    }
    shutdown();

    finish_stats(stats, worst_latency, total_latency, wall_start);
    if (!result.error && stats.frames == 0)
        result.error = "no frames";
    return result;
}

}  // namespace landrisk
