#include "pasteup/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "pasteup/hash.hpp"

namespace pasteup {

const char* reject_reason_name(RejectReason reason) {
    switch (reason) {
        case RejectReason::AreaTooSmall: return "AreaTooSmall";
        case RejectReason::AreaTooLarge: return "AreaTooLarge";
        case RejectReason::LowScore: return "LowScore";
        case RejectReason::LowResolution: return "LowResolution";
        case RejectReason::ExtremeAspect: return "ExtremeAspect";
        case RejectReason::OverCovered: return "OverCovered";
    }
    return "Unknown";
}

ScoreTable ScoreTable::from_instances(const std::vector<InstanceRecord>& instances) {
    ScoreTable table;
    for (const auto& record : instances) {
        if (std::isnan(record.score)) continue;
        table.scores[record.class_label].push_back(record.score);
    }
    return table;
}

double class_threshold(const std::vector<double>& scores, double b, double d) {
    if (scores.empty()) {
        throw Error(ErrorCode::EmptyClass, "threshold of an empty score set");
    }
    const double max_score = *std::max_element(scores.begin(), scores.end());
    return std::min(b, max_score - d);
}

InstanceFilterResult filter_instances(std::vector<InstanceRecord> instances,
                                      const PipelineConfig& cfg) {
    if (cfg.score_source == ScoreSource::Stub) {
        for (auto& record : instances) {
            record.score = hash_unit_interval(record.id);
        }
    }

    const ScoreTable table = ScoreTable::from_instances(instances);
    InstanceFilterResult result;
    for (const auto& [label, scores] : table.scores) {
        result.class_thresholds[label] =
            class_threshold(scores, cfg.score_params.b, cfg.score_params.d);
    }

    for (auto& record : instances) {
        if (record.area_ratio < cfg.area_window.min_ratio) {
            result.rejected.push_back({std::move(record), RejectReason::AreaTooSmall});
            continue;
        }
        if (record.area_ratio > cfg.area_window.max_ratio) {
            result.rejected.push_back({std::move(record), RejectReason::AreaTooLarge});
            continue;
        }
        const auto threshold = result.class_thresholds.find(record.class_label);
        // NaN scores and score-less classes fail here by construction.
        if (threshold == result.class_thresholds.end() || !(record.score >= threshold->second)) {
            result.rejected.push_back({std::move(record), RejectReason::LowScore});
            continue;
        }
        result.kept.push_back(std::move(record));
    }
    return result;
}

BackgroundFilterResult filter_backgrounds(std::vector<BackgroundRecord> backgrounds,
                                          const PipelineConfig& cfg) {
    BackgroundFilterResult result;
    for (auto& record : backgrounds) {
        const int min_side = std::min(record.image.width, record.image.height);
        const int max_side = std::max(record.image.width, record.image.height);
        const double aspect = static_cast<double>(max_side) / min_side;
        if (min_side < cfg.background_rules.min_side) {
            result.rejected.push_back({std::move(record), RejectReason::LowResolution});
        } else if (aspect > cfg.background_rules.max_aspect) {
            result.rejected.push_back({std::move(record), RejectReason::ExtremeAspect});
        } else if (record.coverage_ratio > cfg.background_rules.max_coverage) {
            result.rejected.push_back({std::move(record), RejectReason::OverCovered});
        } else {
            result.kept.push_back(std::move(record));
        }
    }
    return result;
}

std::vector<ClassStats> compute_class_stats(const std::vector<InstanceRecord>& kept,
                                            const std::map<std::string, double>& thresholds) {
    std::map<std::string, std::vector<double>> ratios;
    for (const auto& record : kept) {
        ratios[record.class_label].push_back(record.area_ratio);
    }
    std::vector<ClassStats> stats;
    for (const auto& [label, values] : ratios) {
        ClassStats entry;
        entry.class_label = label;
        double sum = 0.0;
        for (const double v : values) sum += v;
        entry.mu = sum / static_cast<double>(values.size());
        double sq = 0.0;
        for (const double v : values) sq += (v - entry.mu) * (v - entry.mu);
        entry.sigma2 = sq / static_cast<double>(values.size());
        const auto it = thresholds.find(label);
        entry.score_threshold = it != thresholds.end() ? it->second : 0.0;
        stats.push_back(std::move(entry));
    }
    return stats;
}

FilterReport make_filter_report(const InstanceFilterResult& instances,
                                const BackgroundFilterResult& backgrounds) {
    FilterReport report;
    report.instances_kept = static_cast<int>(instances.kept.size());
    report.backgrounds_kept = static_cast<int>(backgrounds.kept.size());
    for (const auto& rejected : instances.rejected) {
        ++report.instance_reject_counts[reject_reason_name(rejected.reason)];
    }
    for (const auto& rejected : backgrounds.rejected) {
        ++report.background_reject_counts[reject_reason_name(rejected.reason)];
    }
    report.class_stats = compute_class_stats(instances.kept, instances.class_thresholds);
    return report;
}

std::string render_filter_report(const FilterReport& report) {
    nlohmann::ordered_json root;
    root["instances_kept"] = report.instances_kept;
    root["backgrounds_kept"] = report.backgrounds_kept;
    root["instance_rejects"] = report.instance_reject_counts;
    root["background_rejects"] = report.background_reject_counts;
    auto& classes = root["classes"] = nlohmann::ordered_json::array();
    for (const auto& entry : report.class_stats) {
        classes.push_back({{"class", entry.class_label},
                           {"mu", entry.mu},
                           {"sigma2", entry.sigma2},
                           {"score_threshold", entry.score_threshold}});
    }
    return root.dump(2) + "\n";
}

void write_filter_report(const std::filesystem::path& path, const FilterReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::WriteFailure, "cannot create " + path.string());
    }
    out << render_filter_report(report);
    if (!out.flush()) {
        throw Error(ErrorCode::WriteFailure, "write failed: " + path.string());
    }
}

}  // namespace pasteup
