#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pasteup/config.hpp"
#include "pasteup/records.hpp"

namespace pasteup {

enum class RejectReason {
    AreaTooSmall,
    AreaTooLarge,
    LowScore,
    LowResolution,
    ExtremeAspect,
    OverCovered,
};

const char* reject_reason_name(RejectReason reason);

/// Per-class score sets S_c, collected from every scored instance of the
/// class (rejected-by-area instances still contribute their score).
struct ScoreTable {
    std::map<std::string, std::vector<double>> scores;

    static ScoreTable from_instances(const std::vector<InstanceRecord>& instances);
};

/// thres_c = min(b, max(S_c) - d). Throws EmptyClass on an empty score set.
double class_threshold(const std::vector<double>& scores, double b, double d);

struct RejectedInstance {
    InstanceRecord record;
    RejectReason reason = RejectReason::LowScore;
};

struct InstanceFilterResult {
    std::vector<InstanceRecord> kept;
    std::vector<RejectedInstance> rejected;
    std::map<std::string, double> class_thresholds;
};

/// Keeps an instance iff its area ratio lies in the closed window
/// [min_ratio, max_ratio] and its score is >= the class threshold. With the
/// stub score source, scores are replaced by a hash of the instance id
/// before thresholding. An unscored (NaN) instance never passes the score
/// test. Order of the input is preserved in both output lists.
InstanceFilterResult filter_instances(std::vector<InstanceRecord> instances,
                                      const PipelineConfig& cfg);

struct RejectedBackground {
    BackgroundRecord record;
    RejectReason reason = RejectReason::LowResolution;
};

struct BackgroundFilterResult {
    std::vector<BackgroundRecord> kept;
    std::vector<RejectedBackground> rejected;
};

/// Keeps a background iff min side >= min_side, aspect ratio <= max_aspect,
/// and instance coverage <= max_coverage. The recorded reason is the first
/// failing rule in that order.
BackgroundFilterResult filter_backgrounds(std::vector<BackgroundRecord> backgrounds,
                                          const PipelineConfig& cfg);

/// Mean and population variance of area_ratio per class over the kept pool,
/// sorted by class label. Thresholds, when provided, fill score_threshold.
std::vector<ClassStats> compute_class_stats(
    const std::vector<InstanceRecord>& kept,
    const std::map<std::string, double>& thresholds = {});

struct FilterReport {
    int instances_kept = 0;
    int backgrounds_kept = 0;
    std::map<std::string, int> instance_reject_counts;
    std::map<std::string, int> background_reject_counts;
    std::vector<ClassStats> class_stats;
};

FilterReport make_filter_report(const InstanceFilterResult& instances,
                                const BackgroundFilterResult& backgrounds);

/// Serializes the report as JSON. Throws WriteFailure.
void write_filter_report(const std::filesystem::path& path, const FilterReport& report);
std::string render_filter_report(const FilterReport& report);

}  // namespace pasteup
