#include "pasteup/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

#include <nlohmann/json.hpp>

#include "pasteup/annotations.hpp"
#include "pasteup/compositor.hpp"
#include "pasteup/enhance.hpp"
#include "pasteup/filtering.hpp"
#include "pasteup/hash.hpp"
#include "pasteup/morphology.hpp"
#include "pasteup/placement.hpp"
#include "pasteup/png_io.hpp"
#include "pasteup/rng.hpp"

namespace pasteup {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kToolTag = "pasteup 0.1.0";

std::string sample_stem(int index) {
    std::string s = std::to_string(index);
    while (s.size() < 8) s.insert(s.begin(), '0');
    return s;
}

std::uint64_t image_fingerprint(const Image& image) {
    Fnv64 h;
    h.update_value(image.width);
    h.update_value(image.height);
    h.update_value(image.channels);
    h.update(image.data.data(), image.data.size());
    return h.digest();
}

ordered_json config_to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["seed"] = cfg.global_seed;
    j["iou_threshold"] = cfg.iou_threshold;
    j["iou_mode"] = iou_mode_name(cfg.iou_mode);
    j["trimap_band_px"] = cfg.trimap_band_px;
    j["upscale_cap"] = cfg.upscale_cap;
    j["retry_limit"] = cfg.retry_limit;
    j["score_source"] = score_source_name(cfg.score_source);
    j["score_params"] = {{"b", cfg.score_params.b}, {"d", cfg.score_params.d}};
    j["area_window"] = {{"min_ratio", cfg.area_window.min_ratio},
                        {"max_ratio", cfg.area_window.max_ratio}};
    j["background_rules"] = {{"min_side", cfg.background_rules.min_side},
                             {"max_aspect", cfg.background_rules.max_aspect},
                             {"max_coverage", cfg.background_rules.max_coverage}};
    j["enhancement"] = {{"erode_frac", cfg.enhancement.erode_frac},
                        {"dilate_frac", cfg.enhancement.dilate_frac},
                        {"hull_expand_px", cfg.enhancement.hull_expand_px},
                        {"ellipse_expand_factor", cfg.enhancement.ellipse_expand_factor},
                        {"bezier_jitter_frac", cfg.enhancement.bezier_jitter_frac},
                        {"weights", cfg.enhancement_weights}};
    return j;
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig cfg;
    cfg.global_seed = j.at("seed").get<std::uint64_t>();
    cfg.iou_threshold = j.at("iou_threshold").get<double>();
    cfg.iou_mode = iou_mode_from_name(j.at("iou_mode").get<std::string>());
    cfg.trimap_band_px = j.at("trimap_band_px").get<int>();
    cfg.upscale_cap = j.at("upscale_cap").get<double>();
    cfg.retry_limit = j.at("retry_limit").get<int>();
    cfg.score_source = score_source_from_name(j.at("score_source").get<std::string>());
    cfg.score_params.b = j.at("score_params").at("b").get<double>();
    cfg.score_params.d = j.at("score_params").at("d").get<double>();
    cfg.area_window.min_ratio = j.at("area_window").at("min_ratio").get<double>();
    cfg.area_window.max_ratio = j.at("area_window").at("max_ratio").get<double>();
    cfg.background_rules.min_side = j.at("background_rules").at("min_side").get<int>();
    cfg.background_rules.max_aspect = j.at("background_rules").at("max_aspect").get<double>();
    cfg.background_rules.max_coverage =
        j.at("background_rules").at("max_coverage").get<double>();
    const auto& e = j.at("enhancement");
    cfg.enhancement.erode_frac = e.at("erode_frac").get<double>();
    cfg.enhancement.dilate_frac = e.at("dilate_frac").get<double>();
    cfg.enhancement.hull_expand_px = e.at("hull_expand_px").get<int>();
    cfg.enhancement.ellipse_expand_factor = e.at("ellipse_expand_factor").get<double>();
    cfg.enhancement.bezier_jitter_frac = e.at("bezier_jitter_frac").get<double>();
    const auto weights = e.at("weights").get<std::vector<double>>();
    if (weights.size() != cfg.enhancement_weights.size()) {
        throw Error(ErrorCode::SchemaViolation, "enhancement weights must have 6 entries");
    }
    std::copy(weights.begin(), weights.end(), cfg.enhancement_weights.begin());
    return cfg;
}

struct SampleContext {
    const PipelineConfig& cfg;
    const std::vector<InstanceRecord>& instances;
    const std::vector<BackgroundRecord>& backgrounds;
    const std::map<std::string, ClassStats>& stats;
    const std::vector<std::uint64_t>& background_hashes;
    // Ground truth is the untouched background, so its file bytes repeat;
    // encode each background once and reuse the bytes for every triplet.
    const std::vector<std::vector<std::uint8_t>>& background_png;
    const BuildOptions& options;
    const std::filesystem::path& out_root;
};

/// Worst IoU against the background's existing instances at the chosen
/// placement, in the configured mode.
double placement_iou_max(const BackgroundRecord& bg, const BinaryMask& frame_mask,
                         const Box& paste, IouMode mode) {
    double worst = 0.0;
    const long long placed_area = mode == IouMode::Mask ? frame_mask.area() : 0;
    for (const auto& region : bg.instance_regions) {
        double overlap;
        if (mode == IouMode::Bbox) {
            overlap = iou(paste, region.box);
        } else {
            const Box window = box_intersection(paste, region.box);
            long long inter = 0;
            for (int y = window.top; y < window.bottom; ++y) {
                for (int x = window.left; x < window.right; ++x) {
                    if (frame_mask.get(x, y) &&
                        region.mask.get(x - region.box.left, y - region.box.top)) {
                        ++inter;
                    }
                }
            }
            const long long uni = placed_area + region.mask.area() - inter;
            overlap = uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
        }
        worst = std::max(worst, overlap);
    }
    return worst;
}

void require(bool condition, const std::string& what) {
    if (!condition) {
        throw Error(ErrorCode::SchemaViolation, "internal invariant violated: " + what);
    }
}

std::variant<TripletRecord, SkipRecord> generate_sample(const SampleContext& ctx, int index) {
    const PipelineConfig& cfg = ctx.cfg;
    const std::uint64_t seed = derive_sample_seed(cfg.global_seed, static_cast<std::uint64_t>(index));
    Rng rng(seed);

    std::string last_reason = "EmptyFeasibleRegion";
    for (int bg_attempt = 0; bg_attempt < cfg.retry_limit; ++bg_attempt) {
        const auto bg_idx = rng.uniform_index(ctx.backgrounds.size());
        const auto inst_idx = rng.uniform_index(ctx.instances.size());
        const BackgroundRecord& bg = ctx.backgrounds[bg_idx];
        const InstanceRecord& inst = ctx.instances[inst_idx];
        const ClassStats& stats = ctx.stats.at(inst.class_label);

        for (int scale_attempt = 0; scale_attempt < cfg.retry_limit; ++scale_attempt) {
            const double s = sample_scale(stats, cfg.area_window, cfg.retry_limit, rng);
            ResizedInstance resized;
            BinaryMask centers;
            try {
                resized = resize_instance(inst, s, bg.image.width, bg.image.height, cfg);
                centers = feasible_region(bg, resized.image.width, resized.image.height,
                                          resized.mask, cfg.iou_threshold, cfg.iou_mode);
            } catch (const Error& e) {
                last_reason = error_code_name(e.code());
                continue;
            }
            if (centers.empty_mask()) {
                last_reason = "EmptyFeasibleRegion";
                continue;
            }
            const PixelCoord center = pick_center(centers, rng);

            Placement placement;
            placement.scale = s;
            placement.width = resized.image.width;
            placement.height = resized.image.height;
            placement.cx = center.x;
            placement.cy = center.y;

            EnhancementSpec spec;
            spec.params = cfg.enhancement;
            if (!ctx.options.val_mode) {
                spec = pick_enhancement(rng, cfg.enhancement_weights, cfg.enhancement);
            }

            Triplet triplet = build_triplet(bg, resized, placement, spec, cfg, rng, inst.id,
                                            inst.class_label, seed);
            if (ctx.options.val_mode && ctx.options.val_dilate_px > 0) {
                triplet.enhanced_mask = dilate_disk(triplet.mask, ctx.options.val_dilate_px);
            }

            // Re-check the compositor guarantees before committing anything.
            const Box paste = placement.paste_box();
            const int frame_w = bg.image.width, frame_h = bg.image.height;
            require(placement.cx >= placement.margin_x() &&
                        placement.cx <= frame_w - placement.margin_x() &&
                        placement.cy >= placement.margin_y() &&
                        placement.cy <= frame_h - placement.margin_y(),
                    "margins");
            require(triplet.ground_truth == bg.image, "ground-truth purity");
            const Trimap& trimap = triplet.trimap;
            Fnv64 interior;
            const int ch = triplet.input.channels;
            for (int y = 0; y < frame_h; ++y) {
                const auto* labels = reinterpret_cast<const std::uint8_t*>(
                    trimap.labels.data() + static_cast<std::size_t>(y) * frame_w);
                const std::uint8_t* in_row =
                    triplet.input.data.data() + static_cast<std::size_t>(y) * frame_w * ch;
                const std::uint8_t* gt_row =
                    triplet.ground_truth.data.data() + static_cast<std::size_t>(y) * frame_w * ch;
                // All-background rows collapse to one block compare.
                if (std::memchr(labels, static_cast<int>(TriLabel::Foreground), frame_w) ==
                        nullptr &&
                    std::memchr(labels, static_cast<int>(TriLabel::Unknown), frame_w) == nullptr) {
                    require(std::memcmp(in_row, gt_row, static_cast<std::size_t>(frame_w) * ch) ==
                                0,
                            "support");
                    continue;
                }
                for (int x = 0; x < frame_w; ++x) {
                    const auto label = static_cast<TriLabel>(labels[x]);
                    if (label == TriLabel::Background) {
                        const std::uint8_t* a = in_row + static_cast<std::size_t>(x) * ch;
                        const std::uint8_t* b = gt_row + static_cast<std::size_t>(x) * ch;
                        for (int c = 0; c < ch; ++c) require(a[c] == b[c], "support");
                    } else if (label == TriLabel::Foreground) {
                        const std::uint8_t* a = in_row + static_cast<std::size_t>(x) * ch;
                        for (int c = 0; c < ch; ++c) {
                            require(a[c] == resized.image.at(x - paste.left, y - paste.top, c),
                                    "interior fidelity");
                            interior.update_value(a[c]);
                        }
                    }
                }
            }
            const double iou_max = placement_iou_max(bg, triplet.mask, paste, cfg.iou_mode);
            require(bg.instance_regions.empty() || iou_max < cfg.iou_threshold, "iou bound");

            const std::string stem = sample_stem(index) + ".png";
            TripletRecord record;
            record.sample_index = index;
            record.seed = seed;
            record.instance_id = inst.id;
            record.background_id = bg.id;
            record.class_label = inst.class_label;
            record.scale = s;
            record.cx = placement.cx;
            record.cy = placement.cy;
            record.placed_width = placement.width;
            record.placed_height = placement.height;
            record.iou_threshold = cfg.iou_threshold;
            record.iou_mode = cfg.iou_mode;
            record.iou_max = iou_max;
            for (const auto& region : bg.instance_regions) record.existing_boxes.push_back(region.box);
            record.enhancement = spec.type;
            record.enhancement_params = spec.params;
            record.band_px = cfg.trimap_band_px;
            record.background_hash = ctx.background_hashes[bg_idx];
            record.interior_hash = interior.digest();
            record.input_file = "inputs/" + stem;
            record.mask_file = "masks/" + stem;
            record.enhanced_mask_file = "enhanced_masks/" + stem;
            record.gt_file = "gts/" + stem;

            write_png(ctx.out_root / record.input_file, triplet.input);
            write_mask_png(ctx.out_root / record.mask_file, triplet.mask);
            write_mask_png(ctx.out_root / record.enhanced_mask_file, triplet.enhanced_mask);
            write_file(ctx.out_root / record.gt_file, ctx.background_png[bg_idx]);
            return record;
        }
    }
    return SkipRecord{index, seed, last_reason};
}

ordered_json box_to_json(const Box& box) {
    return ordered_json::array({box.left, box.top, box.right, box.bottom});
}

Box box_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) {
        throw Error(ErrorCode::SchemaViolation, "box must be [left, top, right, bottom]");
    }
    return Box{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

std::uint64_t hex_to_u64(const std::string& text) {
    return std::stoull(text, nullptr, 16);
}

}  // namespace

InstanceCorpus load_instance_corpus(const std::filesystem::path& annotations_json) {
    const AnnotationSet set = load_annotations(annotations_json);
    const std::filesystem::path base = annotations_json.parent_path();

    std::map<std::int64_t, Image> images;
    std::map<std::int64_t, int> ann_counters;
    for (const auto& entry : set.images) {
        images.emplace(entry.id, read_png(base / entry.file));
    }

    InstanceCorpus corpus;
    corpus.dropped = set.dropped;
    int degenerate = 0;
    for (std::size_t i = 0; i < set.annotations.size(); ++i) {
        const Annotation& ann = set.annotations[i];
        const Image& source = images.at(ann.image_id);
        const BinaryMask mask =
            decode_mask(ann.region, source.width, source.height, &degenerate);
        const int ordinal = ann_counters[ann.image_id]++;
        if (mask.empty_mask()) {
            ++corpus.dropped;
            continue;
        }
        const std::string id =
            "i" + std::to_string(ann.image_id) + "a" + std::to_string(ordinal);
        corpus.records.push_back(crop_instance(source, mask, id, ann.class_label, ann.score));
    }
    return corpus;
}

BackgroundCorpus load_background_corpus(const std::filesystem::path& annotations_json) {
    const AnnotationSet set = load_annotations(annotations_json);
    const std::filesystem::path base = annotations_json.parent_path();

    BackgroundCorpus corpus;
    corpus.dropped = set.dropped;
    int degenerate = 0;
    for (const auto& entry : set.images) {
        BackgroundRecord record;
        record.id = "b" + std::to_string(entry.id);
        record.image = read_png(base / entry.file);

        BinaryMask covered(record.image.width, record.image.height);
        for (const auto& ann : set.annotations) {
            if (ann.image_id != entry.id) continue;
            const BinaryMask mask =
                decode_mask(ann.region, record.image.width, record.image.height, &degenerate);
            const auto bbox = mask.tight_bbox();
            if (!bbox) {
                ++corpus.dropped;
                continue;
            }
            RegionRef region;
            region.box = *bbox;
            region.mask = BinaryMask(bbox->width(), bbox->height());
            for (int y = 0; y < bbox->height(); ++y) {
                for (int x = 0; x < bbox->width(); ++x) {
                    const bool bit = mask.get(bbox->left + x, bbox->top + y);
                    region.mask.set(x, y, bit);
                    if (bit) covered.set(bbox->left + x, bbox->top + y, true);
                }
            }
            record.instance_regions.push_back(std::move(region));
        }
        record.coverage_ratio =
            static_cast<double>(covered.area()) /
            (static_cast<double>(record.image.width) * record.image.height);
        corpus.records.push_back(std::move(record));
    }
    return corpus;
}

std::uint64_t corpus_fingerprint(const InstanceCorpus& corpus) {
    Fnv64 h;
    h.update_value(corpus.records.size());
    for (const auto& r : corpus.records) {
        h.update(r.id).update(r.class_label);
        h.update_value(image_fingerprint(r.image));
        h.update(r.mask.bits.data(), r.mask.bits.size());
        h.update_value(r.area_ratio);
        h.update_value(r.score);
    }
    return h.digest();
}

std::uint64_t corpus_fingerprint(const BackgroundCorpus& corpus) {
    Fnv64 h;
    h.update_value(corpus.records.size());
    for (const auto& r : corpus.records) {
        h.update(r.id);
        h.update_value(image_fingerprint(r.image));
        h.update_value(r.coverage_ratio);
        for (const auto& region : r.instance_regions) {
            h.update_value(region.box.left);
            h.update_value(region.box.top);
            h.update_value(region.box.right);
            h.update_value(region.box.bottom);
            h.update(region.mask.bits.data(), region.mask.bits.size());
        }
    }
    return h.digest();
}

BuildManifest build_dataset(const PipelineConfig& cfg, const InstanceCorpus& instances,
                            const BackgroundCorpus& backgrounds, int count,
                            const std::filesystem::path& out_root,
                            const BuildOptions& options) {
    cfg.validate();
    if (count < 0) {
        throw Error(ErrorCode::InvalidArgument, "triplet count must be >= 0");
    }

    auto instance_filter = filter_instances(instances.records, cfg);
    auto background_filter = filter_backgrounds(backgrounds.records, cfg);
    if (instance_filter.kept.empty()) {
        throw Error(ErrorCode::ExhaustedCorpus, "no instance survives filtering");
    }
    if (background_filter.kept.empty()) {
        throw Error(ErrorCode::ExhaustedCorpus, "no background survives filtering");
    }

    std::map<std::string, ClassStats> stats;
    for (auto& entry :
         compute_class_stats(instance_filter.kept, instance_filter.class_thresholds)) {
        stats.emplace(entry.class_label, std::move(entry));
    }

    std::vector<std::uint64_t> background_hashes;
    std::vector<std::vector<std::uint8_t>> background_png;
    background_hashes.reserve(background_filter.kept.size());
    background_png.reserve(background_filter.kept.size());
    for (const auto& bg : background_filter.kept) {
        background_hashes.push_back(image_fingerprint(bg.image));
        background_png.push_back(encode_png(bg.image));
    }

    namespace fs = std::filesystem;
    for (const char* sub : {"inputs", "masks", "enhanced_masks", "gts"}) {
        std::error_code ec;
        fs::create_directories(out_root / sub, ec);
        if (ec) {
            throw Error(ErrorCode::WriteFailure, "cannot create " + (out_root / sub).string());
        }
    }

    const SampleContext ctx{cfg,   instance_filter.kept, background_filter.kept,
                            stats, background_hashes,    background_png,
                            options, out_root};
    std::vector<std::optional<std::variant<TripletRecord, SkipRecord>>> slots(
        static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const int i = next.fetch_add(1);
            if (i >= count) break;
            try {
                slots[static_cast<std::size_t>(i)] = generate_sample(ctx, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed = true;
            }
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    BuildManifest manifest;
    manifest.tool = kToolTag;
    manifest.seed = cfg.global_seed;
    manifest.requested = count;
    manifest.val_mode = options.val_mode;
    manifest.val_dilate_px = options.val_mode ? options.val_dilate_px : 0;
    manifest.config = cfg;
    manifest.config_hash = cfg.content_hash();
    manifest.instances_fingerprint = corpus_fingerprint(instances);
    manifest.backgrounds_fingerprint = corpus_fingerprint(backgrounds);
    for (auto& slot : slots) {
        if (std::holds_alternative<TripletRecord>(*slot)) {
            manifest.triplets.push_back(std::get<TripletRecord>(std::move(*slot)));
        } else {
            manifest.skips.push_back(std::get<SkipRecord>(std::move(*slot)));
        }
    }
    manifest.emitted = static_cast<int>(manifest.triplets.size());
    manifest.skipped = static_cast<int>(manifest.skips.size());
    if (count > 0 && manifest.emitted == 0) {
        throw Error(ErrorCode::ExhaustedCorpus,
                    "no background admitted any instance within the retry budget");
    }

    write_manifest(out_root / "manifest.jsonl", manifest);
    return manifest;
}

BuildManifest build_val_split(const PipelineConfig& cfg, const InstanceCorpus& instances,
                              const BackgroundCorpus& backgrounds, int count,
                              const std::filesystem::path& out_root, int dilate_px,
                              int workers) {
    if (dilate_px < 0) {
        throw Error(ErrorCode::InvalidArgument, "dilate_px must be >= 0");
    }
    BuildOptions options;
    options.workers = workers;
    options.val_mode = true;
    options.val_dilate_px = dilate_px;
    return build_dataset(cfg, instances, backgrounds, count, out_root, options);
}

void write_manifest(const std::filesystem::path& path, const BuildManifest& manifest) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw Error(ErrorCode::WriteFailure, "cannot create " + tmp.string());
        }

        ordered_json header;
        header["kind"] = "header";
        header["schema"] = manifest.schema;
        header["tool"] = manifest.tool;
        header["seed"] = manifest.seed;
        header["requested"] = manifest.requested;
        header["emitted"] = manifest.emitted;
        header["skipped"] = manifest.skipped;
        header["val_mode"] = manifest.val_mode;
        header["val_dilate_px"] = manifest.val_dilate_px;
        header["config"] = config_to_json(manifest.config);
        header["config_hash"] = to_hex(manifest.config_hash);
        header["instances_fingerprint"] = to_hex(manifest.instances_fingerprint);
        header["backgrounds_fingerprint"] = to_hex(manifest.backgrounds_fingerprint);
        out << header.dump() << "\n";

        std::size_t ti = 0, si = 0;
        while (ti < manifest.triplets.size() || si < manifest.skips.size()) {
            const bool take_triplet =
                si >= manifest.skips.size() ||
                (ti < manifest.triplets.size() &&
                 manifest.triplets[ti].sample_index < manifest.skips[si].sample_index);
            if (take_triplet) {
                const TripletRecord& r = manifest.triplets[ti++];
                ordered_json j;
                j["kind"] = "triplet";
                j["sample_index"] = r.sample_index;
                j["seed"] = to_hex(r.seed);
                j["instance_id"] = r.instance_id;
                j["background_id"] = r.background_id;
                j["class"] = r.class_label;
                j["scale"] = r.scale;
                j["center"] = {r.cx, r.cy};
                j["placed_size"] = {r.placed_width, r.placed_height};
                j["iou_threshold"] = r.iou_threshold;
                j["iou_mode"] = iou_mode_name(r.iou_mode);
                j["iou_max"] = r.iou_max;
                auto& boxes = j["existing_boxes"] = ordered_json::array();
                for (const auto& box : r.existing_boxes) boxes.push_back(box_to_json(box));
                j["enhancement"] = {
                    {"type", enhancement_type_name(r.enhancement)},
                    {"params",
                     {{"erode_frac", r.enhancement_params.erode_frac},
                      {"dilate_frac", r.enhancement_params.dilate_frac},
                      {"hull_expand_px", r.enhancement_params.hull_expand_px},
                      {"ellipse_expand_factor", r.enhancement_params.ellipse_expand_factor},
                      {"bezier_jitter_frac", r.enhancement_params.bezier_jitter_frac}}}};
                j["band_px"] = r.band_px;
                j["background_hash"] = to_hex(r.background_hash);
                j["interior_hash"] = to_hex(r.interior_hash);
                j["files"] = {{"input", r.input_file},
                              {"mask", r.mask_file},
                              {"enhanced_mask", r.enhanced_mask_file},
                              {"gt", r.gt_file}};
                out << j.dump() << "\n";
            } else {
                const SkipRecord& r = manifest.skips[si++];
                ordered_json j;
                j["kind"] = "skip";
                j["sample_index"] = r.sample_index;
                j["seed"] = to_hex(r.seed);
                j["reason"] = r.reason;
                out << j.dump() << "\n";
            }
        }
        out.flush();
        if (!out) {
            throw Error(ErrorCode::WriteFailure, "write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw Error(ErrorCode::WriteFailure,
                    "cannot move manifest into place: " + ec.message());
    }
}

BuildManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::SchemaViolation, "manifest is empty");
    }
    json header = json::parse(line, nullptr, false);
    if (header.is_discarded() || header.value("kind", "") != "header") {
        throw Error(ErrorCode::SchemaViolation, "first manifest line must be the header");
    }

    BuildManifest manifest;
    try {
        manifest.schema = header.at("schema").get<int>();
        manifest.tool = header.at("tool").get<std::string>();
        manifest.seed = header.at("seed").get<std::uint64_t>();
        manifest.requested = header.at("requested").get<int>();
        manifest.emitted = header.at("emitted").get<int>();
        manifest.skipped = header.at("skipped").get<int>();
        manifest.val_mode = header.at("val_mode").get<bool>();
        manifest.val_dilate_px = header.at("val_dilate_px").get<int>();
        manifest.config = config_from_json(header.at("config"));
        manifest.config_hash = hex_to_u64(header.at("config_hash").get<std::string>());
        manifest.instances_fingerprint =
            hex_to_u64(header.at("instances_fingerprint").get<std::string>());
        manifest.backgrounds_fingerprint =
            hex_to_u64(header.at("backgrounds_fingerprint").get<std::string>());

        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object()) {
                throw Error(ErrorCode::SchemaViolation, "malformed manifest line");
            }
            const std::string kind = j.value("kind", "");
            if (kind == "triplet") {
                TripletRecord r;
                r.sample_index = j.at("sample_index").get<int>();
                r.seed = hex_to_u64(j.at("seed").get<std::string>());
                r.instance_id = j.at("instance_id").get<std::string>();
                r.background_id = j.at("background_id").get<std::string>();
                r.class_label = j.at("class").get<std::string>();
                r.scale = j.at("scale").get<double>();
                r.cx = j.at("center")[0].get<int>();
                r.cy = j.at("center")[1].get<int>();
                r.placed_width = j.at("placed_size")[0].get<int>();
                r.placed_height = j.at("placed_size")[1].get<int>();
                r.iou_threshold = j.at("iou_threshold").get<double>();
                r.iou_mode = iou_mode_from_name(j.at("iou_mode").get<std::string>());
                r.iou_max = j.at("iou_max").get<double>();
                for (const auto& box : j.at("existing_boxes")) {
                    r.existing_boxes.push_back(box_from_json(box));
                }
                r.enhancement = enhancement_type_from_name(
                    j.at("enhancement").at("type").get<std::string>());
                const auto& params = j.at("enhancement").at("params");
                r.enhancement_params.erode_frac = params.at("erode_frac").get<double>();
                r.enhancement_params.dilate_frac = params.at("dilate_frac").get<double>();
                r.enhancement_params.hull_expand_px = params.at("hull_expand_px").get<int>();
                r.enhancement_params.ellipse_expand_factor =
                    params.at("ellipse_expand_factor").get<double>();
                r.enhancement_params.bezier_jitter_frac =
                    params.at("bezier_jitter_frac").get<double>();
                r.band_px = j.at("band_px").get<int>();
                r.background_hash = hex_to_u64(j.at("background_hash").get<std::string>());
                r.interior_hash = hex_to_u64(j.at("interior_hash").get<std::string>());
                r.input_file = j.at("files").at("input").get<std::string>();
                r.mask_file = j.at("files").at("mask").get<std::string>();
                r.enhanced_mask_file = j.at("files").at("enhanced_mask").get<std::string>();
                r.gt_file = j.at("files").at("gt").get<std::string>();
                manifest.triplets.push_back(std::move(r));
            } else if (kind == "skip") {
                SkipRecord r;
                r.sample_index = j.at("sample_index").get<int>();
                r.seed = hex_to_u64(j.at("seed").get<std::string>());
                r.reason = j.at("reason").get<std::string>();
                manifest.skips.push_back(std::move(r));
            } else {
                throw Error(ErrorCode::SchemaViolation, "unknown manifest record kind '" + kind + "'");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::SchemaViolation, std::string("manifest field error: ") + e.what());
    }
    return manifest;
}

ValidationReport validate_dataset(const std::filesystem::path& manifest_path) {
    const BuildManifest manifest = read_manifest(manifest_path);
    const std::filesystem::path root = manifest_path.parent_path();

    ValidationReport report;
    report.triplets = static_cast<int>(manifest.triplets.size());
    auto check = [&report](bool ok, int sample, const char* name, const std::string& detail) {
        if (ok) {
            ++report.checks_passed;
        } else {
            report.failures.push_back({sample, name, detail});
        }
        return ok;
    };

    check(manifest.requested == manifest.emitted + manifest.skipped, -1, "skip_accounting",
          "requested != emitted + skipped");
    check(static_cast<int>(manifest.triplets.size()) == manifest.emitted, -1, "skip_accounting",
          "triplet record count != emitted");

    for (const auto& r : manifest.triplets) {
        Image input, gt;
        BinaryMask mask, enhanced;
        try {
            input = read_png(root / r.input_file);
            gt = read_png(root / r.gt_file);
            mask = read_mask_png(root / r.mask_file);
            enhanced = read_mask_png(root / r.enhanced_mask_file);
        } catch (const Error& e) {
            check(false, r.sample_index, "files", e.what());
            continue;
        }
        if (!check(input.same_shape(gt) && mask.width == input.width &&
                       mask.height == input.height && mask.same_shape(enhanced) &&
                       !mask.empty_mask(),
                   r.sample_index, "frame", "file shapes disagree or mask is empty")) {
            continue;
        }

        // margins + mask tightness
        const int ex = (r.placed_width + 1) / 2;
        const int ey = (r.placed_height + 1) / 2;
        const int left = r.cx - r.placed_width / 2;
        const int top = r.cy - r.placed_height / 2;
        const Box paste{left, top, left + r.placed_width, top + r.placed_height};
        const bool margins_ok = r.cx >= ex && r.cx <= input.width - ex && r.cy >= ey &&
                                r.cy <= input.height - ey && paste.left >= 0 && paste.top >= 0 &&
                                paste.right <= input.width && paste.bottom <= input.height;
        check(margins_ok && mask.tight_bbox() == std::optional<Box>(paste), r.sample_index,
              "margins", "center violates margins or mask is not tight in its paste box");

        // support + interior hash over the trimap partition
        const Trimap trimap = make_trimap(mask, r.band_px);
        bool support_ok = true;
        Fnv64 interior;
        for (int y = 0; y < input.height && support_ok; ++y) {
            for (int x = 0; x < input.width; ++x) {
                const TriLabel label = trimap.get(x, y);
                if (label == TriLabel::Background) {
                    for (int c = 0; c < input.channels; ++c) {
                        if (input.at(x, y, c) != gt.at(x, y, c)) {
                            support_ok = false;
                            break;
                        }
                    }
                    if (!support_ok) break;
                } else if (label == TriLabel::Foreground) {
                    for (int c = 0; c < input.channels; ++c) {
                        interior.update_value(input.at(x, y, c));
                    }
                }
            }
        }
        check(support_ok, r.sample_index, "support",
              "input differs from ground truth outside the dilated mask");
        check(interior.digest() == r.interior_hash, r.sample_index, "interior",
              "input bytes on the eroded mask do not match the recorded instance content");
        check(image_fingerprint(gt) == r.background_hash, r.sample_index, "purity",
              "ground truth differs from the recorded source background");

        // IoU bound against recorded existing instances
        bool iou_ok = true;
        std::string iou_detail;
        if (!r.existing_boxes.empty()) {
            if (r.iou_mode == IouMode::Bbox) {
                for (const auto& box : r.existing_boxes) {
                    if (iou(paste, box) >= r.iou_threshold) {
                        iou_ok = false;
                        iou_detail = "paste box IoU exceeds the threshold";
                        break;
                    }
                }
            } else {
                // masks of existing instances are not persisted; the recorded
                // worst-case value is the check
                iou_ok = r.iou_max < r.iou_threshold;
                iou_detail = "recorded iou_max exceeds the threshold";
            }
        }
        check(iou_ok, r.sample_index, "iou", iou_detail);

        // per-type enhancement law
        bool law_ok = true;
        std::string law_detail;
        if (enhanced.empty_mask()) {
            law_ok = false;
            law_detail = "enhanced mask is empty";
        } else if (manifest.val_mode) {
            law_ok = manifest.val_dilate_px > 0 ? BinaryMask::is_subset(mask, enhanced)
                                                : mask == enhanced;
            law_detail = "val-mode enhanced mask is not the (dilated) mask";
        } else {
            switch (r.enhancement) {
                case EnhancementType::Original:
                    law_ok = mask == enhanced;
                    law_detail = "original-type enhanced mask differs from the mask";
                    break;
                case EnhancementType::Eroded:
                    law_ok = BinaryMask::is_subset(enhanced, mask);
                    law_detail = "eroded mask is not a subset";
                    break;
                default:
                    law_ok = BinaryMask::is_subset(mask, enhanced);
                    law_detail = "enhanced mask is not a superset";
                    break;
            }
        }
        check(law_ok, r.sample_index, "enhancement", law_detail);
    }
    return report;
}

std::string render_validation_report(const ValidationReport& report) {
    ordered_json j;
    j["triplets"] = report.triplets;
    j["checks_passed"] = report.checks_passed;
    j["ok"] = report.ok();
    auto& failures = j["failures"] = ordered_json::array();
    for (const auto& f : report.failures) {
        failures.push_back(
            {{"sample_index", f.sample_index}, {"check", f.check}, {"detail", f.detail}});
    }
    return j.dump(2) + "\n";
}

}  // namespace pasteup
