#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pasteup/config.hpp"
#include "pasteup/records.hpp"

namespace pasteup {

/// Raw corpora as loaded from an annotation file plus its referenced
/// images; filtering happens inside build_dataset. `dropped` counts
/// annotations lost at load time (malformed, dangling, or decoding to an
/// empty mask).
struct InstanceCorpus {
    std::vector<InstanceRecord> records;
    int dropped = 0;
};

struct BackgroundCorpus {
    std::vector<BackgroundRecord> records;
    int dropped = 0;
};

/// Loads instances: each annotation is decoded, cropped tight, and given
/// the stable id "i<image_id>a<annotation_index>". Image paths resolve
/// relative to the annotation file's directory.
InstanceCorpus load_instance_corpus(const std::filesystem::path& annotations_json);

/// Loads backgrounds: one record per image ("b<image_id>"), with every
/// annotation kept as an existing-instance region and coverage set to the
/// union area of those regions over the frame.
BackgroundCorpus load_background_corpus(const std::filesystem::path& annotations_json);

/// Content fingerprints over every record (ids, geometry, pixels, scores);
/// stored in manifest headers so replays can verify their inputs.
std::uint64_t corpus_fingerprint(const InstanceCorpus& corpus);
std::uint64_t corpus_fingerprint(const BackgroundCorpus& corpus);

struct TripletRecord {
    int sample_index = 0;
    std::uint64_t seed = 0;
    std::string instance_id;
    std::string background_id;
    std::string class_label;
    double scale = 0.0;
    int cx = 0;
    int cy = 0;
    int placed_width = 0;
    int placed_height = 0;
    double iou_threshold = 0.0;
    IouMode iou_mode = IouMode::Bbox;
    double iou_max = 0.0;  // worst overlap against existing instances at the chosen center
    std::vector<Box> existing_boxes;
    EnhancementType enhancement = EnhancementType::Original;
    EnhancementParams enhancement_params;
    int band_px = 0;
    std::uint64_t background_hash = 0;  // fingerprint of the ground-truth bytes
    std::uint64_t interior_hash = 0;    // fingerprint of input bytes on the eroded mask
    std::string input_file;
    std::string mask_file;
    std::string enhanced_mask_file;
    std::string gt_file;
};

struct SkipRecord {
    int sample_index = 0;
    std::uint64_t seed = 0;
    std::string reason;  // EmptyFeasibleRegion | DegenerateResize | InstanceTooLarge
};

struct BuildManifest {
    int schema = 1;
    std::string tool;
    std::uint64_t seed = 0;
    int requested = 0;
    int emitted = 0;
    int skipped = 0;
    bool val_mode = false;
    int val_dilate_px = 0;
    PipelineConfig config;
    std::uint64_t config_hash = 0;
    std::uint64_t instances_fingerprint = 0;
    std::uint64_t backgrounds_fingerprint = 0;
    std::vector<TripletRecord> triplets;  // ascending sample_index
    std::vector<SkipRecord> skips;        // ascending sample_index
};

struct BuildOptions {
    int workers = 1;
    bool val_mode = false;   // pin enhancement to Original
    int val_dilate_px = 0;   // extra dilation of the stored enhanced mask (val mode)
};

/// Filters both corpora, then emits up to `count` triplets under out_root
/// as {inputs,masks,enhanced_masks,gts}/NNNNNNNN.png plus manifest.jsonl
/// (written atomically). Every sample runs on its own derived seed, so the
/// result is byte-identical for any worker count. Samples whose retry
/// budget (retry_limit backgrounds x retry_limit scale draws) exhausts
/// become skip records. Throws ExhaustedCorpus when nothing survives
/// filtering or when count > 0 and nothing could be emitted.
BuildManifest build_dataset(const PipelineConfig& cfg, const InstanceCorpus& instances,
                            const BackgroundCorpus& backgrounds, int count,
                            const std::filesystem::path& out_root,
                            const BuildOptions& options = {});

/// Same pipeline with enhancement pinned to Original plus an optional fixed
/// mask dilation, the shape evaluation splits want.
BuildManifest build_val_split(const PipelineConfig& cfg, const InstanceCorpus& instances,
                              const BackgroundCorpus& backgrounds, int count,
                              const std::filesystem::path& out_root, int dilate_px,
                              int workers = 1);

void write_manifest(const std::filesystem::path& path, const BuildManifest& manifest);
BuildManifest read_manifest(const std::filesystem::path& path);

struct ValidationIssue {
    int sample_index = -1;  // -1 for dataset-level issues
    std::string check;
    std::string detail;
};

struct ValidationReport {
    int triplets = 0;
    long long checks_passed = 0;
    std::vector<ValidationIssue> failures;

    bool ok() const { return failures.empty(); }
};

/// Re-derives every per-triplet guarantee from the stored files alone:
/// support (input = gt outside the dilated mask), interior fidelity (hash
/// of input over the eroded mask), ground-truth purity, placement IoU
/// bound, margin containment, mask tightness, and the per-type enhancement
/// subset/superset law. Failures are report entries, never throws for
/// content problems.
ValidationReport validate_dataset(const std::filesystem::path& manifest_path);

std::string render_validation_report(const ValidationReport& report);

}  // namespace pasteup
