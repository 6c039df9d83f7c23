// Command-line surface: build / build-val / enhance / eval / validate /
// stats / make-toy. Exit codes: 0 success, 1 I/O failure, 2 domain error.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "pasteup/config.hpp"
#include "pasteup/enhance.hpp"
#include "pasteup/error.hpp"
#include "pasteup/filtering.hpp"
#include "pasteup/metrics.hpp"
#include "pasteup/pipeline.hpp"
#include "pasteup/png_io.hpp"
#include "pasteup/rng.hpp"
#include "pasteup/toy.hpp"

namespace {

using namespace pasteup;

constexpr const char* kConfigEnvVar = "PASTEUP_CONFIG";

struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> iou_threshold;
    std::optional<std::string> iou_mode;
    std::optional<int> band;
};

PipelineConfig effective_config(const std::string& config_path, const ConfigOverrides& ov) {
    std::string path = config_path;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnvVar)) path = env;
    }
    PipelineConfig cfg = path.empty() ? PipelineConfig{} : load_config(path);
    if (ov.seed) cfg.global_seed = *ov.seed;
    if (ov.iou_threshold) cfg.iou_threshold = *ov.iou_threshold;
    if (ov.iou_mode) cfg.iou_mode = iou_mode_from_name(*ov.iou_mode);
    if (ov.band) cfg.trimap_band_px = *ov.band;
    cfg.validate();
    return cfg;
}

void add_config_flags(CLI::App* cmd, std::string& config_path, ConfigOverrides& ov) {
    cmd->add_option("--config", config_path,
                    "Config file (TOML subset); defaults to $" + std::string(kConfigEnvVar));
    cmd->add_option("--seed", ov.seed, "Override the global seed");
    cmd->add_option("--iou-threshold", ov.iou_threshold, "Override the placement IoU threshold");
    cmd->add_option("--iou-mode", ov.iou_mode, "Override the IoU mode (bbox|mask)")
        ->check(CLI::IsMember({"bbox", "mask"}));
    cmd->add_option("--band", ov.band, "Override the trimap band width in pixels");
}

int run_build(const std::string& config_path, const ConfigOverrides& ov,
              const std::string& instances_path, const std::string& backgrounds_path,
              const std::string& out, int count, int workers, bool val_mode, int dilate_px) {
    const PipelineConfig cfg = effective_config(config_path, ov);
    const InstanceCorpus instances = load_instance_corpus(instances_path);
    const BackgroundCorpus backgrounds = load_background_corpus(backgrounds_path);

    const auto start = std::chrono::steady_clock::now();
    BuildManifest manifest;
    if (val_mode) {
        manifest = build_val_split(cfg, instances, backgrounds, count, out, dilate_px, workers);
    } else {
        BuildOptions options;
        options.workers = workers;
        manifest = build_dataset(cfg, instances, backgrounds, count, out, options);
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    std::cout << "emitted " << manifest.emitted << " skipped " << manifest.skipped << " in "
              << elapsed.count() << " s";
    if (elapsed.count() > 0) {
        std::cout << " (" << manifest.emitted / elapsed.count() << " triplets/s)";
    }
    std::cout << "\n";
    return 0;
}

int run_enhance(const std::string& type_name, const EnhancementParams& params,
                std::uint64_t seed, const std::string& in_path, const std::string& out_path) {
    EnhancementSpec spec;
    spec.type = enhancement_type_from_name(type_name);
    spec.params = params;
    Rng rng(seed);
    const BinaryMask mask = read_mask_png(in_path);
    write_mask_png(out_path, enhance_mask(mask, spec, rng));
    return 0;
}

int run_eval(const std::string& results, const std::string& gts, const std::string& masks,
             const std::string& out, const std::string& format_name) {
    const ReportFormat format =
        format_name == "csv" ? ReportFormat::Csv : ReportFormat::Jsonl;
    const MetricReport report = evaluate_directory(results, gts, masks);
    if (out.empty()) {
        std::cout << render_metric_report(report, format);
    } else {
        write_metric_report(out, report, format);
        std::cout << "wrote " << report.rows.size() << " rows to " << out << "\n";
    }
    return 0;
}

int run_validate(const std::string& manifest_path, const std::string& out) {
    const ValidationReport report = validate_dataset(manifest_path);
    const std::string rendered = render_validation_report(report);
    if (out.empty()) {
        std::cout << rendered;
    } else {
        std::ofstream file(out, std::ios::binary);
        file << rendered;
        if (!file) throw Error(ErrorCode::WriteFailure, "cannot write " + out);
    }
    if (!report.ok()) {
        std::cerr << "validation failed: " << report.failures.size() << " issue(s)\n";
        return 2;
    }
    return 0;
}

int run_stats(const std::string& config_path, const ConfigOverrides& ov,
              const std::string& instances_path, const std::string& backgrounds_path,
              const std::string& out) {
    const PipelineConfig cfg = effective_config(config_path, ov);
    const InstanceCorpus instances = load_instance_corpus(instances_path);
    const InstanceFilterResult inst_filter = filter_instances(instances.records, cfg);
    BackgroundFilterResult bg_filter;
    if (!backgrounds_path.empty()) {
        const BackgroundCorpus backgrounds = load_background_corpus(backgrounds_path);
        bg_filter = filter_backgrounds(backgrounds.records, cfg);
    }
    const FilterReport report = make_filter_report(inst_filter, bg_filter);
    if (out.empty()) {
        std::cout << render_filter_report(report);
    } else {
        write_filter_report(out, report);
        std::cout << "wrote filter report to " << out << "\n";
    }
    return 0;
}

int run_make_toy(const std::string& out, const ToyCorpusSpec& spec) {
    const ToyCorpusPaths paths = write_toy_corpus(out, spec);
    std::cout << "corpus root  " << paths.root.string() << "\n"
              << "instances    " << paths.instances_json.string() << "\n"
              << "backgrounds  " << paths.backgrounds_json.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic copy-paste triplet synthesis for object removal training"};
    app.require_subcommand(1);

    std::string config_path;
    ConfigOverrides ov;
    std::string instances_path, backgrounds_path, out, in_file, out_file, manifest_path;
    std::string results_dir, gts_dir, masks_dir;
    std::string format_name = "jsonl";
    std::string type_name = "original";
    int count = 100;
    int workers = 1;
    int dilate_px = 0;
    EnhancementParams params;
    std::optional<double> frac;
    std::uint64_t enhance_seed = 0;
    ToyCorpusSpec toy;

    auto* build = app.add_subcommand("build", "Synthesize a training dataset");
    add_config_flags(build, config_path, ov);
    build->add_option("--instances", instances_path, "Instance annotation JSON")->required();
    build->add_option("--backgrounds", backgrounds_path, "Background annotation JSON")->required();
    build->add_option("--out", out, "Dataset output directory")->required();
    build->add_option("--count", count, "Number of triplets to request");
    build->add_option("--workers", workers, "Worker thread count")->check(CLI::PositiveNumber);

    auto* build_val = app.add_subcommand(
        "build-val", "Synthesize an evaluation split (plain masks, optional fixed dilation)");
    add_config_flags(build_val, config_path, ov);
    build_val->add_option("--instances", instances_path, "Instance annotation JSON")->required();
    build_val->add_option("--backgrounds", backgrounds_path, "Background annotation JSON")
        ->required();
    build_val->add_option("--out", out, "Dataset output directory")->required();
    build_val->add_option("--count", count, "Number of triplets to request");
    build_val->add_option("--workers", workers, "Worker thread count")->check(CLI::PositiveNumber);
    build_val->add_option("--dilate-px", dilate_px, "Dilate stored masks by this radius")
        ->check(CLI::NonNegativeNumber);

    auto* enhance = app.add_subcommand("enhance", "Deform a mask raster");
    enhance->add_option("--type", type_name, "original|eroded|dilated|convex_hull|ellipse|bbox_bezier");
    enhance->add_option("--frac", frac, "Shorthand for both erode and dilate fractions");
    enhance->add_option("--erode-frac", params.erode_frac, "Erosion radius as a bbox fraction");
    enhance->add_option("--dilate-frac", params.dilate_frac, "Dilation radius as a bbox fraction");
    enhance->add_option("--hull-expand-px", params.hull_expand_px, "Hull dilation in pixels");
    enhance->add_option("--ellipse-expand-factor", params.ellipse_expand_factor,
                        "Ellipse axis expansion factor");
    enhance->add_option("--bezier-jitter-frac", params.bezier_jitter_frac,
                        "Bezier control-point jitter as an edge fraction");
    enhance->add_option("--seed", enhance_seed, "Seed for stochastic deformations");
    enhance->add_option("input", in_file, "Input mask PNG")->required();
    enhance->add_option("output", out_file, "Output mask PNG")->required();

    auto* eval = app.add_subcommand("eval", "Score result images against ground truths");
    eval->add_option("--results", results_dir, "Directory of result PNGs")->required();
    eval->add_option("--gts", gts_dir, "Directory of ground-truth PNGs")->required();
    eval->add_option("--masks", masks_dir, "Directory of mask PNGs")->required();
    eval->add_option("--out", out, "Report path (stdout when omitted)");
    eval->add_option("--format", format_name, "Report format")
        ->check(CLI::IsMember({"jsonl", "csv"}));

    auto* validate = app.add_subcommand("validate", "Re-check every invariant of a built dataset");
    validate->add_option("manifest", manifest_path, "Path to manifest.jsonl")->required();
    validate->add_option("--out", out, "Write the report here instead of stdout");

    auto* stats = app.add_subcommand("stats", "Filter a corpus and report per-class statistics");
    add_config_flags(stats, config_path, ov);
    stats->add_option("--instances", instances_path, "Instance annotation JSON")->required();
    stats->add_option("--backgrounds", backgrounds_path, "Background annotation JSON (optional)");
    stats->add_option("--out", out, "Write the report here instead of stdout");

    auto* make_toy = app.add_subcommand("make-toy", "Write the bundled synthetic corpus");
    make_toy->add_option("--out", out, "Corpus root directory")->required();
    make_toy->add_option("--backgrounds", toy.backgrounds, "Background image count")
        ->check(CLI::PositiveNumber);
    make_toy->add_option("--sources", toy.sources, "Instance source image count")
        ->check(CLI::PositiveNumber);
    make_toy->add_option("--bg-size", toy.bg_size, "Background side length");
    make_toy->add_option("--src-size", toy.src_size, "Source image side length");
    make_toy->add_option("--seed", toy.seed, "Corpus texture seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (build->parsed()) {
            return run_build(config_path, ov, instances_path, backgrounds_path, out, count,
                             workers, false, 0);
        }
        if (build_val->parsed()) {
            return run_build(config_path, ov, instances_path, backgrounds_path, out, count,
                             workers, true, dilate_px);
        }
        if (enhance->parsed()) {
            if (frac) {
                params.erode_frac = *frac;
                params.dilate_frac = *frac;
            }
            return run_enhance(type_name, params, enhance_seed, in_file, out_file);
        }
        if (eval->parsed()) {
            return run_eval(results_dir, gts_dir, masks_dir, out, format_name);
        }
        if (validate->parsed()) {
            return run_validate(manifest_path, out);
        }
        if (stats->parsed()) {
            return run_stats(config_path, ov, instances_path, backgrounds_path, out);
        }
        if (make_toy->parsed()) {
            return run_make_toy(out, toy);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Error::is_io(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
