#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pasteup/image.hpp"

namespace pasteup {

/// Mean squared error over the region (whole frame when region is null),
/// all channels pooled, on the 0..255 scale. The sum of squared errors is
/// accumulated in integers, so region additivity is exact. Throws
/// DimMismatch on shape disagreement, EmptyRegion for an all-false region.
double mse(const Image& a, const Image& b, const BinaryMask* region = nullptr);

/// 10*log10(255^2 / MSE); +infinity when the images agree on the region.
double psnr(const Image& a, const Image& b, const BinaryMask* region = nullptr);

/// Single-scale SSIM: 11x11 Gaussian window (sigma 1.5), K1=0.01, K2=0.03,
/// L=255, channel-averaged over valid (fully interior) windows. The region
/// variant averages only windows whose centers lie in the region. Throws
/// TooSmall when min(W,H) < 11, EmptyRegion when no valid window center
/// falls in the region.
double ssim(const Image& a, const Image& b, const BinaryMask* region = nullptr);

struct ImageMetrics {
    std::string stem;
    double psnr_full = 0.0;
    double ssim_full = 0.0;
    double psnr_masked = 0.0;   // NaN when the mask admits no valid value
    double ssim_masked = 0.0;   // NaN likewise
    double psnr_unmasked = 0.0;
};

struct MetricAggregate {
    int images = 0;
    // Means over finite entries; infinite PSNR entries are counted apart so
    // the means stay interpretable. NaN entries are skipped.
    double psnr_full_mean = 0.0;
    int psnr_full_infinite = 0;
    double ssim_full_mean = 0.0;
    double psnr_masked_mean = 0.0;
    int psnr_masked_infinite = 0;
    double ssim_masked_mean = 0.0;
    double psnr_unmasked_mean = 0.0;
    int psnr_unmasked_infinite = 0;
};

struct MetricReport {
    std::vector<ImageMetrics> rows;  // sorted by stem
    MetricAggregate aggregate;
};

MetricAggregate aggregate_metrics(const std::vector<ImageMetrics>& rows);

/// Pairs *.png files across the three directories by stem (results and
/// ground truths must match exactly; every stem needs a mask). Per-image
/// masked metrics fall back to NaN when the mask (or its complement) is
/// empty. Throws PairingError on any unmatched stem.
MetricReport evaluate_directory(const std::filesystem::path& results_dir,
                                const std::filesystem::path& gt_dir,
                                const std::filesystem::path& masks_dir);

enum class ReportFormat { Jsonl, Csv };

/// One record per image plus a trailing aggregate record. Infinite PSNR is
/// written as the string "inf" (jsonl) or the cell "inf" (csv); NaN becomes
/// null / an empty cell.
std::string render_metric_report(const MetricReport& report, ReportFormat format);
void write_metric_report(const std::filesystem::path& path, const MetricReport& report,
                         ReportFormat format);

}  // namespace pasteup
