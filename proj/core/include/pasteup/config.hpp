#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "pasteup/records.hpp"

namespace pasteup {

enum class IouMode { Bbox, Mask };

const char* iou_mode_name(IouMode mode);
IouMode iou_mode_from_name(const std::string& name);

/// Where instance relevance scores come from: the annotation file itself, or
/// a deterministic hash-based stub (for corpora without precomputed scores).
enum class ScoreSource { Annotations, Stub };

const char* score_source_name(ScoreSource source);
ScoreSource score_source_from_name(const std::string& name);

struct ScoreParams {
    double b = 0.2;
    double d = 0.02;
};

struct AreaWindow {
    double min_ratio = 0.05;
    double max_ratio = 0.95;
};

struct BackgroundRules {
    int min_side = 512;
    double max_aspect = 2.0;
    double max_coverage = 0.85;
};

struct PipelineConfig {
    std::uint64_t global_seed = 0;
    double iou_threshold = 0.3;  // max allowed overlap with existing instances
    IouMode iou_mode = IouMode::Bbox;
    ScoreParams score_params;
    AreaWindow area_window;
    BackgroundRules background_rules;
    int trimap_band_px = 5;
    double upscale_cap = 2.0;
    int retry_limit = 8;
    EnhancementParams enhancement;
    std::array<double, kEnhancementTypeCount> enhancement_weights{1, 1, 1, 1, 1, 1};
    ScoreSource score_source = ScoreSource::Annotations;

    /// Throws ConfigError if any field is out of range.
    void validate() const;

    /// Fingerprint over every field, for manifest headers.
    std::uint64_t content_hash() const;
};

/// Loads a config file (TOML-style key/value document, see README for the
/// exact grammar). Missing keys keep their defaults. Unknown keys are a
/// ConfigError. Throws UnreadableFile if the file cannot be opened.
PipelineConfig load_config(const std::filesystem::path& path);

/// Parses config text; same rules as load_config.
PipelineConfig parse_config(const std::string& text);

}  // namespace pasteup
