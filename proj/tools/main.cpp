#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "landrisk/class_table.hpp"
#include "landrisk/image_io.hpp"
#include "landrisk/metrics.hpp"
#include "landrisk/pipeline.hpp"
#include "landrisk/render.hpp"
#include "landrisk/slz.hpp"
#include "landrisk/sora.hpp"

namespace fs = std::filesystem;
using namespace landrisk;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string classes_path;
    std::string colormap_path;
    std::string out_dir;
    std::optional<double> alpha;
    std::optional<int> threshold;
    std::optional<int> k;
    std::optional<double> budget_fps;
    std::optional<std::vector<int>> dilation;
    int threads = 0;
    bool json = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool with_out = true) {
    cmd->add_option("--config", opts.config_path, "JSON run config (paths, radii, thresholds)");
    cmd->add_option("--classes", opts.classes_path, "class table JSON (overrides --config)");
    cmd->add_option("--colormap", opts.colormap_path, "risk colormap JSON (overrides --config)");
    if (with_out)
        cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_flag("--json", opts.json, "machine-readable output");
}

RunConfig resolve_config(const CommonOpts& opts) {
    RunConfig cfg;
    if (!opts.config_path.empty())
        cfg = RunConfig::from_file(opts.config_path);
    if (!opts.classes_path.empty())
        cfg.classes_path = opts.classes_path;
    if (!opts.colormap_path.empty())
        cfg.colormap_path = opts.colormap_path;
    if (opts.alpha) {
        if (!(*opts.alpha >= 0.0 && *opts.alpha <= 1.0))
            throw Error("--alpha must be in [0,1]");
        cfg.alpha = *opts.alpha;
    }
    if (opts.threshold) {
        if (*opts.threshold < 0 || *opts.threshold >= kRiskLevels)
            throw Error("--threshold must be in [0,5]");
        cfg.slz_threshold = RiskLevel(*opts.threshold);
    }
    if (opts.k) {
        if (*opts.k < 1)
            throw Error("--k must be at least 1");
        cfg.slz_k = *opts.k;
    }
    if (opts.budget_fps) {
        if (!(*opts.budget_fps > 0))
            throw Error("--budget-fps must be positive");
        cfg.budget_fps = *opts.budget_fps;
    }
    if (opts.dilation) {
        if (opts.dilation->size() != std::size_t(kRiskLevels))
            throw Error("--dilate needs exactly 6 radii");
        for (int i = 0; i < kRiskLevels; ++i) {
            if ((*opts.dilation)[std::size_t(i)] < 0)
                throw Error("--dilate radii must be nonnegative");
            cfg.dilation.radius_per_level[std::size_t(i)] = (*opts.dilation)[std::size_t(i)];
        }
    }
    return cfg;
}

ClassTable require_table(const RunConfig& cfg) {
    if (cfg.classes_path.empty())
        throw Error("no class table configured; pass --classes or a --config that names one");
    return ClassTable::from_file(cfg.classes_path);
}

RiskColormap require_colormap(const RunConfig& cfg) {
    if (cfg.colormap_path.empty())
        throw Error("no colormap configured; pass --colormap or a --config that names one");
    return RiskColormap::from_file(cfg.colormap_path);
}

void ensure_out_dir(const std::string& dir) {
    if (dir.empty())
        throw Error("this command writes files; pass --out <dir>");
    fs::create_directories(dir);
}

LabelMap load_labels(const fs::path& path, const ClassTable& table) {
    const auto bytes = read_file(path.string());
    const std::string ext = path.extension().string();
    if (ext == ".rlm")
        return decode_raw_labels(bytes, table);
    if (ext == ".png")
        return decode_label_image(bytes, table);
    throw Error("unsupported label input \"" + path.string() + "\" (expected .png or .rlm)");
}

std::vector<fs::path> list_inputs(const fs::path& dir, const std::set<std::string>& extensions) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && extensions.count(entry.path().extension().string()))
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    return files;
}

// ---- landrisk risk ----

int cmd_risk(const CommonOpts& opts, const std::vector<std::string>& inputs,
             const std::string& images_dir) {
    const RunConfig cfg = resolve_config(opts);
    const ClassTable table = require_table(cfg);
    const RiskColormap cmap = require_colormap(cfg);
    ensure_out_dir(opts.out_dir);

    std::vector<std::string> failures;
    std::uint64_t written = 0;
    for (const std::string& input : inputs) {
        try {
            const fs::path in_path(input);
            const LabelMap labels = load_labels(in_path, table);
            const RiskMap risk = dilate_risk(map_class_to_risk(labels, table), cfg.dilation);

            const std::string stem = in_path.stem().string();
            const fs::path out_rkm = fs::path(opts.out_dir) / (stem + ".rkm");
            const fs::path out_png = fs::path(opts.out_dir) / (stem + "_risk.png");
            write_file(out_rkm.string(), encode_raw(risk));
            write_file(out_png.string(), encode_png(render_risk(risk, cmap)));

            if (!images_dir.empty()) {
                const fs::path base_path = fs::path(images_dir) / (stem + ".png");
                if (fs::exists(base_path)) {
                    const RgbImage base = decode_png(read_file(base_path.string()));
                    const RgbImage blended = overlay(base, risk, cmap, cfg.alpha);
                    const fs::path out_overlay = fs::path(opts.out_dir) / (stem + "_overlay.png");
                    write_file(out_overlay.string(), encode_png(blended));
                }
            }
            ++written;
        } catch (const Error& e) {
            failures.push_back(input + ": " + e.what());
        }
    }

    if (opts.json) {
        nlohmann::json report{{"schema", 1}, {"processed", written}, {"failures", failures}};
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "processed " << written << "/" << inputs.size() << " frame(s) into " << opts.out_dir
                  << "\n";
        for (const std::string& f : failures)
            std::cerr << "failed: " << f << "\n";
    }
    return failures.empty() ? 0 : 1;
}

// ---- landrisk eval ----

int cmd_eval(const CommonOpts& opts, const std::string& pred_dir, const std::string& gt_dir) {
    const RunConfig cfg = resolve_config(opts);
    const ClassTable table = require_table(cfg);
    const auto grouping = table.risk_grouping();

    const std::set<std::string> exts{".png", ".rlm"};
    std::map<std::string, fs::path> pred_files, gt_files;
    for (const auto& p : list_inputs(pred_dir, exts))
        pred_files[p.filename().string()] = p;
    for (const auto& p : list_inputs(gt_dir, exts))
        gt_files[p.filename().string()] = p;

    std::vector<std::string> failures;
    for (const auto& [name, path] : pred_files)
        if (!gt_files.count(name))
            failures.push_back(name + ": missing from ground-truth directory");
    for (const auto& [name, path] : gt_files)
        if (!pred_files.count(name))
            failures.push_back(name + ": missing from prediction directory");

    ConfusionMatrix class_cm(table.size());
    std::uint64_t pairs = 0;
    for (const auto& [name, pred_path] : pred_files) {
        const auto gt_it = gt_files.find(name);
        if (gt_it == gt_files.end())
            continue;
        try {
            const LabelMap pred = load_labels(pred_path, table);
            const LabelMap gt = load_labels(gt_it->second, table);
            class_cm.merge(ConfusionMatrix::from_maps(pred, gt, table.size(),
                                                      resolve_thread_count(opts.threads)));
            ++pairs;
        } catch (const Error& e) {
            failures.push_back(name + ": " + e.what());
        }
    }
    if (pairs == 0)
        throw Error("eval: no evaluable prediction/ground-truth pairs");

    const ConfusionMatrix risk_cm = coarsen(class_cm, grouping);
    const MetricsReport class_report = MetricsReport::from(class_cm);
    const MetricsReport risk_report = MetricsReport::from(risk_cm);

    nlohmann::json class_json = class_report.to_json();
    class_json["row_normalized"] = row_normalize(class_cm);
    nlohmann::json risk_json = risk_report.to_json();
    risk_json["row_normalized"] = row_normalize(risk_cm);

    nlohmann::json report{{"schema", 1},
                          {"accuracy_definition", "micro pixel accuracy: trace(confusion)/total"},
                          {"pairs", pairs},
                          {"failures", failures},
                          {"class_level", class_json},
                          {"risk_level", risk_json}};

    if (!opts.out_dir.empty()) {
        ensure_out_dir(opts.out_dir);
        const std::string text = report.dump(2);
        write_file((fs::path(opts.out_dir) / "eval_report.json").string(),
                   std::vector<std::uint8_t>(text.begin(), text.end()));
    }
    if (opts.json) {
        std::cout << report.dump(2) << "\n";
    } else {
        auto line = [](const char* name, const MetricsReport& r) {
            std::printf("%-18s acc %.4f  mIoU %.4f  F1 %.4f  balAcc %.4f\n", name, r.pixel_accuracy,
                        r.mean_iou, r.mean_f1, r.balanced_accuracy);
        };
        std::cout << "pairs evaluated: " << pairs << "\n";
        line("class level:", class_report);
        line("risk level:", risk_report);
        for (const std::string& f : failures)
            std::cerr << "failed: " << f << "\n";
    }
    return failures.empty() ? 0 : 1;
}

// ---- landrisk stream ----

int cmd_stream(const CommonOpts& opts, const std::string& input) {
    const RunConfig cfg = resolve_config(opts);
    const ClassTable table = require_table(cfg);
    if (!opts.out_dir.empty())
        ensure_out_dir(opts.out_dir);

    std::ifstream file_stream;
    std::unique_ptr<RawLabelStreamReader> reader;
    std::vector<fs::path> sequence;
    std::size_t sequence_pos = 0;

    FrameSource source;
    if (input == "-") {
        reader = std::make_unique<RawLabelStreamReader>(std::cin);
        source = [&](std::vector<std::uint8_t>& record) { return reader->next(record); };
    } else if (fs::is_directory(input)) {
        sequence = list_inputs(input, {".rlm"});
        source = [&](std::vector<std::uint8_t>& record) {
            if (sequence_pos >= sequence.size())
                return false;
            record = read_file(sequence[sequence_pos++].string());
            return true;
        };
    } else {
        file_stream.open(input, std::ios::binary);
        if (!file_stream)
            throw Error("cannot open " + input);
        reader = std::make_unique<RawLabelStreamReader>(file_stream);
        source = [&](std::vector<std::uint8_t>& record) { return reader->next(record); };
    }

    FrameSink sink = [&](std::uint64_t index, const std::vector<std::uint8_t>& rkm) {
        if (opts.out_dir.empty())
            return;
        std::string name;
        if (!sequence.empty()) {
            name = sequence[std::size_t(index)].stem().string() + ".rkm";
        } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "frame_%06llu.rkm", static_cast<unsigned long long>(index));
            name = buf;
        }
        write_file((fs::path(opts.out_dir) / name).string(), rkm);
    };

    const StreamResult result =
        run_stream(source, table, cfg.dilation, sink, resolve_thread_count(opts.threads));
    PipelineStats stats = result.stats;
    stats.budget_fps = cfg.budget_fps;

    if (opts.json) {
        nlohmann::json j = stats.to_json();
        if (result.error)
            j["error"] = *result.error;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "frames: " << stats.frames << "\n";
        if (stats.frames > 0) {
            std::printf("min fps: %.2f  mean fps: %.2f  budget: %.2f  -> %s\n", stats.min_fps,
                        stats.mean_fps, stats.budget_fps, stats.budget_met() ? "PASS" : "FAIL");
        }
        if (result.error)
            std::cerr << "stream aborted: " << *result.error << "\n";
    }
    return result.ok() ? 0 : 1;
}

// ---- landrisk slz ----

int cmd_slz(const CommonOpts& opts, const std::string& input, bool from_labels) {
    const RunConfig cfg = resolve_config(opts);
    const RiskColormap cmap = require_colormap(cfg);

    const fs::path in_path(input);
    const std::string ext = in_path.extension().string();
    RiskMap risk;
    if (from_labels) {
        const ClassTable table = require_table(cfg);
        risk = dilate_risk(map_class_to_risk(load_labels(in_path, table), table), cfg.dilation);
    } else if (ext == ".rkm") {
        risk = decode_raw_risk(read_file(input));
    } else if (ext == ".png") {
        risk = decode_risk_image(decode_png(read_file(input)), cmap);
    } else {
        throw Error("unsupported risk input \"" + input + "\" (expected .rkm or .png, or --from-labels)");
    }

    const auto candidates = select_slz(risk, cfg.slz_threshold, cfg.slz_k);
    const nlohmann::json j = slz_to_json(candidates, cfg.slz_threshold, cfg.slz_k, cfg.dilation);

    if (!opts.out_dir.empty()) {
        ensure_out_dir(opts.out_dir);
        const std::string stem = in_path.stem().string();
        const std::string text = j.dump(2);
        write_file((fs::path(opts.out_dir) / (stem + "_slz.json")).string(),
                   std::vector<std::uint8_t>(text.begin(), text.end()));

        RgbImage annotated = render_risk(risk, cmap);
        for (const SlzCandidate& c : candidates)
            draw_circle_marker(annotated, c.center_x, c.center_y, int(c.clearance_radius),
                               Rgb{255, 255, 255});
        write_file((fs::path(opts.out_dir) / (stem + "_slz.png")).string(),
                   encode_png(annotated));
    }

    if (opts.json || opts.out_dir.empty())
        std::cout << j.dump(2) << "\n";
    if (candidates.empty())
        std::cerr << "warning: no safe landing zone at or below threshold "
                  << int(cfg.slz_threshold) << "\n";
    return 0;
}

// ---- landrisk grc ----

int cmd_grc(const CommonOpts& opts, const std::string& visibility, const std::string& environment,
            bool levels) {
    if (levels) {
        if (opts.json) {
            nlohmann::json defs = nlohmann::json::array();
            for (int level = 0; level < kRiskLevels; ++level)
                defs.push_back(std::string(sora::risk_level_description(RiskLevel(level))));
            std::cout << nlohmann::json{{"schema", 1}, {"risk_levels", defs}}.dump(2) << "\n";
        } else {
            for (int level = 0; level < kRiskLevels; ++level)
                std::cout << level << ": " << sora::risk_level_description(RiskLevel(level)) << "\n";
        }
        return 0;
    }

    const sora::OperationalScenario scenario{sora::visibility_from_string(visibility),
                                             sora::environment_from_string(environment)};
    const sora::GroundRiskClass grc = sora::grc_lookup(scenario);
    if (opts.json) {
        std::cout << nlohmann::json{{"schema", 1},
                                    {"visibility", sora::to_string(scenario.visibility)},
                                    {"environment", sora::to_string(scenario.environment)},
                                    {"grc", grc.value}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << sora::scenario_description(scenario) << ": ground risk class " << grc.value
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"landrisk: risk maps, metrics and safe-landing-zone extraction for aerial scenes"};
    app.require_subcommand(1);

    CommonOpts opts;

    // risk
    std::vector<std::string> risk_inputs;
    std::string images_dir;
    CLI::App* risk = app.add_subcommand("risk", "convert label rasters to risk rasters and renderings");
    add_common_flags(risk, opts);
    risk->add_option("--alpha", opts.alpha, "overlay opacity in [0,1]");
    risk->add_option("--dilate", opts.dilation, "dilation radii per level (6 values)")->expected(6);
    risk->add_option("--images", images_dir, "directory of original RGB frames for overlays");
    risk->add_option("inputs", risk_inputs, "label rasters (.png color-coded or .rlm)")->required();

    // eval
    std::string pred_dir, gt_dir;
    CLI::App* eval = app.add_subcommand("eval", "score predictions against ground truth");
    add_common_flags(eval, opts);
    eval->add_option("--threads", opts.threads, "worker threads (0 = auto)");
    eval->add_option("--pred", pred_dir, "prediction directory")->required();
    eval->add_option("--gt", gt_dir, "ground-truth directory")->required();

    // stream
    std::string stream_input;
    CLI::App* stream = app.add_subcommand("stream", "process a frame stream with throughput accounting");
    add_common_flags(stream, opts);
    stream->add_option("--budget-fps", opts.budget_fps, "frame-rate budget to check against");
    stream->add_option("--dilate", opts.dilation, "dilation radii per level (6 values)")->expected(6);
    stream->add_option("--threads", opts.threads, "worker threads (0 = auto)");
    stream->add_option("input", stream_input, "directory of .rlm frames, a concatenated record file, or - for stdin")
        ->required();

    // slz
    std::string slz_input;
    bool from_labels = false;
    CLI::App* slz = app.add_subcommand("slz", "extract ranked safe landing zones from a risk raster");
    add_common_flags(slz, opts);
    slz->add_option("--threshold", opts.threshold, "maximum acceptable risk level (0-5)");
    slz->add_option("--k", opts.k, "maximum number of candidates");
    slz->add_option("--dilate", opts.dilation, "dilation radii per level (6 values)")->expected(6);
    slz->add_flag("--from-labels", from_labels, "input is a label raster; map and dilate it first");
    slz->add_option("input", slz_input, "risk raster (.rkm or colormap .png)")->required();

    // grc
    std::string visibility, environment;
    bool show_levels = false;
    CLI::App* grc = app.add_subcommand("grc", "SORA intrinsic ground risk class lookup");
    add_common_flags(grc, opts, /*with_out=*/false);
    grc->add_option("--visibility", visibility, "vlos or bvlos");
    grc->add_option("--environment", environment,
                    "controlled_ground, sparsely_populated, populated or gathering_of_people");
    grc->add_flag("--levels", show_levels, "print the six risk level definitions instead");

    CLI11_PARSE(app, argc, argv);

    try {
        if (risk->parsed())
            return cmd_risk(opts, risk_inputs, images_dir);
        if (eval->parsed())
            return cmd_eval(opts, pred_dir, gt_dir);
        if (stream->parsed())
            return cmd_stream(opts, stream_input);
        if (slz->parsed())
            return cmd_slz(opts, slz_input, from_labels);
        if (grc->parsed()) {
            if (!show_levels && (visibility.empty() || environment.empty()))
                throw Error("grc needs --visibility and --environment (or --levels)");
            return cmd_grc(opts, visibility, environment, show_levels);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
