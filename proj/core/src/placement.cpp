#include "pasteup/placement.hpp"

#include <algorithm>
#include <cmath>

namespace pasteup {

namespace {

int clamp_int(int v, int lo, int hi) { return std::max(lo, std::min(hi, v)); }

Image resize_bilinear(const Image& src, int new_w, int new_h) {
    Image out(new_w, new_h, src.channels);
    const double sx = static_cast<double>(src.width) / new_w;
    const double sy = static_cast<double>(src.height) / new_h;
    for (int y = 0; y < new_h; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(src.height - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, src.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < new_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(src.width - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, src.width - 1);
            const double wx = fx - x0;
            for (int c = 0; c < src.channels; ++c) {
                const double v = (1.0 - wy) * ((1.0 - wx) * src.at(x0, y0, c) +
                                               wx * src.at(x1, y0, c)) +
                                 wy * ((1.0 - wx) * src.at(x0, y1, c) +
                                       wx * src.at(x1, y1, c));
                out.at(x, y, c) = static_cast<std::uint8_t>(v + 0.5);
            }
        }
    }
    return out;
}

BinaryMask resize_nearest(const BinaryMask& src, int new_w, int new_h) {
    BinaryMask out(new_w, new_h);
    const double sx = static_cast<double>(src.width) / new_w;
    const double sy = static_cast<double>(src.height) / new_h;
    for (int y = 0; y < new_h; ++y) {
        const int ys = clamp_int(static_cast<int>((y + 0.5) * sy), 0, src.height - 1);
        for (int x = 0; x < new_w; ++x) {
            const int xs = clamp_int(static_cast<int>((x + 0.5) * sx), 0, src.width - 1);
            out.set(x, y, src.get(xs, ys));
        }
    }
    return out;
}

}  // namespace

double sample_scale(const ClassStats& stats, const AreaWindow& window, int retry_limit,
                    Rng& rng) {
    const double sigma = std::sqrt(stats.sigma2);
    double s = stats.mu;
    for (int attempt = 0; attempt < retry_limit; ++attempt) {
        s = rng.gaussian(stats.mu, sigma);
        if (s > window.min_ratio && s < window.max_ratio) return s;
    }
    return s <= window.min_ratio ? window.min_ratio : window.max_ratio;
}

ResizedInstance resize_instance(const InstanceRecord& instance, double s, int bg_width,
                                int bg_height, const PipelineConfig& cfg) {
    const long long mask_area = instance.mask.area();
    if (mask_area == 0) {
        throw Error(ErrorCode::EmptyMask, "instance mask is empty");
    }
    const double target_area = s * bg_width * bg_height;
    const double factor = std::min(std::sqrt(target_area / mask_area), cfg.upscale_cap);
    const int new_w = static_cast<int>(std::lround(instance.image.width * factor));
    const int new_h = static_cast<int>(std::lround(instance.image.height * factor));
    if (new_w < 1 || new_h < 1) {
        throw Error(ErrorCode::DegenerateResize, "resized dims " + std::to_string(new_w) + "x" +
                                                     std::to_string(new_h));
    }

    ResizedInstance out;
    out.factor = factor;
    out.image = resize_bilinear(instance.image, new_w, new_h);
    out.mask = resize_nearest(instance.mask, new_w, new_h);

    const auto bbox = out.mask.tight_bbox();
    if (!bbox) {
        throw Error(ErrorCode::DegenerateResize, "mask vanished at factor " +
                                                     std::to_string(factor));
    }
    if (bbox->width() != new_w || bbox->height() != new_h) {
        Image image(bbox->width(), bbox->height(), out.image.channels);
        BinaryMask mask(bbox->width(), bbox->height());
        for (int y = 0; y < bbox->height(); ++y) {
            for (int x = 0; x < bbox->width(); ++x) {
                for (int c = 0; c < image.channels; ++c) {
                    image.at(x, y, c) = out.image.at(bbox->left + x, bbox->top + y, c);
                }
                mask.set(x, y, out.mask.get(bbox->left + x, bbox->top + y));
            }
        }
        out.image = std::move(image);
        out.mask = std::move(mask);
    }
    return out;
}

BinaryMask feasible_region(const BackgroundRecord& bg, int placed_width, int placed_height,
                           const BinaryMask& placed_mask, double r, IouMode mode) {
    const int frame_w = bg.image.width;
    const int frame_h = bg.image.height;
    if (placed_width > frame_w || placed_height > frame_h) {
        throw Error(ErrorCode::InstanceTooLarge,
                    "instance " + std::to_string(placed_width) + "x" +
                        std::to_string(placed_height) + " exceeds frame " +
                        std::to_string(frame_w) + "x" + std::to_string(frame_h));
    }
    if (mode == IouMode::Mask &&
        (placed_mask.width != placed_width || placed_mask.height != placed_height)) {
        throw Error(ErrorCode::DimMismatch, "placed mask dims differ from placement dims");
    }

    BinaryMask centers(frame_w, frame_h);
    const int ex = (placed_width + 1) / 2;
    const int ey = (placed_height + 1) / 2;
    if (ex > frame_w - ex || ey > frame_h - ey) return centers;  // margins leave nothing
    for (int cy = ey; cy <= frame_h - ey; ++cy) {
        for (int cx = ex; cx <= frame_w - ex; ++cx) centers.set(cx, cy, true);
    }
    if (bg.instance_regions.empty()) return centers;
    if (r <= 0.0) {
        // IoU < 0 is unsatisfiable, and even disjoint placements have IoU 0.
        return BinaryMask(frame_w, frame_h);
    }

    const long long placed_area = mode == IouMode::Mask ? placed_mask.area() : 0;
    for (const auto& region : bg.instance_regions) {
        // Only centers whose paste box meets the region can reach IoU >= r.
        const int cx_lo = std::max(ex, region.box.left - placed_width);
        const int cx_hi = std::min(frame_w - ex, region.box.right + placed_width);
        const int cy_lo = std::max(ey, region.box.top - placed_height);
        const int cy_hi = std::min(frame_h - ey, region.box.bottom + placed_height);
        const long long region_area = mode == IouMode::Mask ? region.mask.area() : 0;
        for (int cy = cy_lo; cy <= cy_hi; ++cy) {
            for (int cx = cx_lo; cx <= cx_hi; ++cx) {
                if (!centers.get(cx, cy)) continue;
                const int left = cx - placed_width / 2;
                const int top = cy - placed_height / 2;
                const Box paste{left, top, left + placed_width, top + placed_height};
                double overlap;
                if (mode == IouMode::Bbox) {
                    overlap = iou(paste, region.box);
                } else {
                    const Box window = box_intersection(paste, region.box);
                    long long inter = 0;
                    for (int y = window.top; y < window.bottom; ++y) {
                        for (int x = window.left; x < window.right; ++x) {
                            if (placed_mask.get(x - left, y - top) &&
                                region.mask.get(x - region.box.left, y - region.box.top)) {
                                ++inter;
                            }
                        }
                    }
                    const long long uni = placed_area + region_area - inter;
                    overlap = uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni)
                                      : 0.0;
                }
                if (overlap >= r) centers.set(cx, cy, false);
            }
        }
    }
    return centers;
}

PixelCoord pick_center(const BinaryMask& centers, Rng& rng) {
    const long long population = centers.area();
    if (population == 0) {
        throw Error(ErrorCode::EmptyFeasibleRegion, "no feasible paste center");
    }
    std::uint64_t k = rng.uniform_index(static_cast<std::uint64_t>(population));
    for (std::size_t i = 0; i < centers.bits.size(); ++i) {
        if (!centers.bits[i]) continue;
        if (k == 0) {
            return {static_cast<int>(i % centers.width), static_cast<int>(i / centers.width)};
        }
        --k;
    }
    throw Error(ErrorCode::EmptyFeasibleRegion, "center enumeration overran");
}

}  // namespace pasteup
