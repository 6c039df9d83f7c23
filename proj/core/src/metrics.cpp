#include "pasteup/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pasteup/png_io.hpp"

namespace pasteup {

namespace {

constexpr int kWindow = 11;
constexpr int kRadius = kWindow / 2;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

void require_same_shape(const Image& a, const Image& b) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::DimMismatch, "images differ in shape");
    }
}

std::array<double, kWindow> gaussian_kernel() {
    std::array<double, kWindow> k{};
    const double sigma = 1.5;
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - kRadius;
        k[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        sum += k[static_cast<std::size_t>(i)];
    }
    for (auto& v : k) v /= sum;
    return k;
}

/// Valid-region separable convolution: out is (W-10) x (H-10), out(x,y)
/// corresponds to the window centered at (x+5, y+5).
std::vector<double> convolve_valid(const std::vector<double>& src, int w, int h,
                                   const std::array<double, kWindow>& k) {
    const int out_w = w - kWindow + 1;
    const int out_h = h - kWindow + 1;
    std::vector<double> tmp(static_cast<std::size_t>(out_w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < kWindow; ++i) {
                acc += k[static_cast<std::size_t>(i)] *
                       src[static_cast<std::size_t>(y) * w + x + i];
            }
            tmp[static_cast<std::size_t>(y) * out_w + x] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(out_w) * out_h);
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < kWindow; ++i) {
                acc += k[static_cast<std::size_t>(i)] *
                       tmp[static_cast<std::size_t>(y + i) * out_w + x];
            }
            out[static_cast<std::size_t>(y) * out_w + x] = acc;
        }
    }
    return out;
}

std::vector<std::string> png_stems(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::UnreadableFile, "not a directory: " + dir.string());
    }
    std::vector<std::string> stems;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            stems.push_back(entry.path().stem().string());
        }
    }
    std::sort(stems.begin(), stems.end());
    return stems;
}

nlohmann::ordered_json psnr_json(double v) {
    if (std::isinf(v)) return "inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

nlohmann::ordered_json ssim_json(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

std::string csv_cell(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return "inf";
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

double mse(const Image& a, const Image& b, const BinaryMask* region) {
    require_same_shape(a, b);
    if (region && (region->width != a.width || region->height != a.height)) {
        throw Error(ErrorCode::DimMismatch, "region frame differs from images");
    }
    std::uint64_t sse = 0;
    std::uint64_t count = 0;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            if (region && !region->get(x, y)) continue;
            for (int c = 0; c < a.channels; ++c) {
                const int d = static_cast<int>(a.at(x, y, c)) - static_cast<int>(b.at(x, y, c));
                sse += static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(d);
            }
            ++count;
        }
    }
    if (count == 0) {
        throw Error(ErrorCode::EmptyRegion, "mse over an empty region");
    }
    return static_cast<double>(sse) / (static_cast<double>(count) * a.channels);
}

double psnr(const Image& a, const Image& b, const BinaryMask* region) {
    const double err = mse(a, b, region);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / err);
}

double ssim(const Image& a, const Image& b, const BinaryMask* region) {
    require_same_shape(a, b);
    if (region && (region->width != a.width || region->height != a.height)) {
        throw Error(ErrorCode::DimMismatch, "region frame differs from images");
    }
    if (a.width < kWindow || a.height < kWindow) {
        throw Error(ErrorCode::TooSmall, "ssim needs at least an 11x11 frame");
    }
    static const std::array<double, kWindow> kernel = gaussian_kernel();

    const int w = a.width, h = a.height;
    const int out_w = w - kWindow + 1;
    const int out_h = h - kWindow + 1;
    const std::size_t n = static_cast<std::size_t>(w) * h;

    double total = 0.0;
    long long windows = 0;
    std::vector<double> va(n), vb(n), vaa(n), vbb(n), vab(n);
    for (int c = 0; c < a.channels; ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                const double pa = a.at(x, y, c);
                const double pb = b.at(x, y, c);
                va[i] = pa;
                vb[i] = pb;
                vaa[i] = pa * pa;
                vbb[i] = pb * pb;
                vab[i] = pa * pb;
            }
        }
        const auto mu_a = convolve_valid(va, w, h, kernel);
        const auto mu_b = convolve_valid(vb, w, h, kernel);
        const auto e_aa = convolve_valid(vaa, w, h, kernel);
        const auto e_bb = convolve_valid(vbb, w, h, kernel);
        const auto e_ab = convolve_valid(vab, w, h, kernel);

        for (int y = 0; y < out_h; ++y) {
            for (int x = 0; x < out_w; ++x) {
                if (region && !region->get(x + kRadius, y + kRadius)) continue;
                const std::size_t i = static_cast<std::size_t>(y) * out_w + x;
                const double ma = mu_a[i];
                const double mb = mu_b[i];
                const double var_a = e_aa[i] - ma * ma;
                const double var_b = e_bb[i] - mb * mb;
                const double cov = e_ab[i] - ma * mb;
                const double value = ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
                                     ((ma * ma + mb * mb + kC1) * (var_a + var_b + kC2));
                total += value;
                ++windows;
            }
        }
    }
    if (windows == 0) {
        throw Error(ErrorCode::EmptyRegion, "no valid ssim window center in region");
    }
    return total / static_cast<double>(windows);
}

MetricAggregate aggregate_metrics(const std::vector<ImageMetrics>& rows) {
    MetricAggregate agg;
    agg.images = static_cast<int>(rows.size());
    double psnr_full_sum = 0.0, ssim_full_sum = 0.0, psnr_masked_sum = 0.0,
           ssim_masked_sum = 0.0, psnr_unmasked_sum = 0.0;
    int psnr_full_n = 0, ssim_full_n = 0, psnr_masked_n = 0, ssim_masked_n = 0,
        psnr_unmasked_n = 0;
    for (const auto& row : rows) {
        if (std::isinf(row.psnr_full)) {
            ++agg.psnr_full_infinite;
        } else if (!std::isnan(row.psnr_full)) {
            psnr_full_sum += row.psnr_full;
            ++psnr_full_n;
        }
        if (!std::isnan(row.ssim_full)) {
            ssim_full_sum += row.ssim_full;
            ++ssim_full_n;
        }
        if (std::isinf(row.psnr_masked)) {
            ++agg.psnr_masked_infinite;
        } else if (!std::isnan(row.psnr_masked)) {
            psnr_masked_sum += row.psnr_masked;
            ++psnr_masked_n;
        }
        if (!std::isnan(row.ssim_masked)) {
            ssim_masked_sum += row.ssim_masked;
            ++ssim_masked_n;
        }
        if (std::isinf(row.psnr_unmasked)) {
            ++agg.psnr_unmasked_infinite;
        } else if (!std::isnan(row.psnr_unmasked)) {
            psnr_unmasked_sum += row.psnr_unmasked;
            ++psnr_unmasked_n;
        }
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    agg.psnr_full_mean = psnr_full_n ? psnr_full_sum / psnr_full_n : nan;
    agg.ssim_full_mean = ssim_full_n ? ssim_full_sum / ssim_full_n : nan;
    agg.psnr_masked_mean = psnr_masked_n ? psnr_masked_sum / psnr_masked_n : nan;
    agg.ssim_masked_mean = ssim_masked_n ? ssim_masked_sum / ssim_masked_n : nan;
    agg.psnr_unmasked_mean = psnr_unmasked_n ? psnr_unmasked_sum / psnr_unmasked_n : nan;
    return agg;
}

MetricReport evaluate_directory(const std::filesystem::path& results_dir,
                                const std::filesystem::path& gt_dir,
                                const std::filesystem::path& masks_dir) {
    const auto result_stems = png_stems(results_dir);
    const auto gt_stems = png_stems(gt_dir);
    const auto mask_stems = png_stems(masks_dir);
    if (result_stems != gt_stems) {
        throw Error(ErrorCode::PairingError,
                    "results and ground truths pair up differently (" +
                        std::to_string(result_stems.size()) + " vs " +
                        std::to_string(gt_stems.size()) + " stems)");
    }
    const std::set<std::string> mask_set(mask_stems.begin(), mask_stems.end());
    for (const auto& stem : result_stems) {
        if (!mask_set.count(stem)) {
            throw Error(ErrorCode::PairingError, "no mask for stem " + stem);
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    MetricReport report;
    for (const auto& stem : result_stems) {
        const Image result = read_png(results_dir / (stem + ".png"));
        const Image gt = read_png(gt_dir / (stem + ".png"));
        const BinaryMask mask = read_mask_png(masks_dir / (stem + ".png"));

        BinaryMask complement(mask.width, mask.height);
        for (std::size_t i = 0; i < mask.bits.size(); ++i) {
            complement.bits[i] = mask.bits[i] ? 0 : 1;
        }

        ImageMetrics row;
        row.stem = stem;
        row.psnr_full = psnr(result, gt);
        row.ssim_full = ssim(result, gt);
        try {
            row.psnr_masked = psnr(result, gt, &mask);
        } catch (const Error&) {
            row.psnr_masked = nan;
        }
        try {
            row.ssim_masked = ssim(result, gt, &mask);
        } catch (const Error&) {
            row.ssim_masked = nan;
        }
        try {
            row.psnr_unmasked = psnr(result, gt, &complement);
        } catch (const Error&) {
            row.psnr_unmasked = nan;
        }
        report.rows.push_back(std::move(row));
    }
    report.aggregate = aggregate_metrics(report.rows);
    return report;
}

std::string render_metric_report(const MetricReport& report, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::Jsonl) {
        for (const auto& row : report.rows) {
            nlohmann::ordered_json j;
            j["kind"] = "image";
            j["stem"] = row.stem;
            j["psnr_full"] = psnr_json(row.psnr_full);
            j["ssim_full"] = ssim_json(row.ssim_full);
            j["psnr_masked"] = psnr_json(row.psnr_masked);
            j["ssim_masked"] = ssim_json(row.ssim_masked);
            j["psnr_unmasked"] = psnr_json(row.psnr_unmasked);
            out << j.dump() << "\n";
        }
        const auto& agg = report.aggregate;
        nlohmann::ordered_json j;
        j["kind"] = "aggregate";
        j["images"] = agg.images;
        j["psnr_full_mean"] = ssim_json(agg.psnr_full_mean);
        j["psnr_full_infinite"] = agg.psnr_full_infinite;
        j["ssim_full_mean"] = ssim_json(agg.ssim_full_mean);
        j["psnr_masked_mean"] = ssim_json(agg.psnr_masked_mean);
        j["psnr_masked_infinite"] = agg.psnr_masked_infinite;
        j["ssim_masked_mean"] = ssim_json(agg.ssim_masked_mean);
        j["psnr_unmasked_mean"] = ssim_json(agg.psnr_unmasked_mean);
        j["psnr_unmasked_infinite"] = agg.psnr_unmasked_infinite;
        out << j.dump() << "\n";
        return out.str();
    }

    out << "stem,psnr_full,ssim_full,psnr_masked,ssim_masked,psnr_unmasked\n";
    for (const auto& row : report.rows) {
        out << row.stem << ',' << csv_cell(row.psnr_full) << ',' << csv_cell(row.ssim_full)
            << ',' << csv_cell(row.psnr_masked) << ',' << csv_cell(row.ssim_masked) << ','
            << csv_cell(row.psnr_unmasked) << "\n";
    }
    const auto& agg = report.aggregate;
    out << "mean," << csv_cell(agg.psnr_full_mean) << ',' << csv_cell(agg.ssim_full_mean)
        << ',' << csv_cell(agg.psnr_masked_mean) << ',' << csv_cell(agg.ssim_masked_mean)
        << ',' << csv_cell(agg.psnr_unmasked_mean) << "\n";
    return out.str();
}

void write_metric_report(const std::filesystem::path& path, const MetricReport& report,
                         ReportFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::WriteFailure, "cannot create " + path.string());
    }
    out << render_metric_report(report, format);
    if (!out.flush()) {
        throw Error(ErrorCode::WriteFailure, "write failed: " + path.string());
    }
}

}  // namespace pasteup
