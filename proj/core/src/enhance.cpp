#include "pasteup/enhance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pasteup/morphology.hpp"

namespace pasteup {

namespace {

int relative_radius(double frac, const Box& bbox) {
    const int side = std::min(bbox.width(), bbox.height());
    return std::max(1, static_cast<int>(std::floor(frac * side)));
}

std::vector<PixelCoord> true_pixels(const BinaryMask& mask) {
    std::vector<PixelCoord> points;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (mask.get(x, y)) points.push_back({x, y});
        }
    }
    return points;
}

void append_cubic(std::vector<DPoint>& polygon, DPoint p0, DPoint c1, DPoint c2, DPoint p3) {
    constexpr int kSegments = 32;
    for (int i = 0; i < kSegments; ++i) {  // t=1 is the next edge's start point
        const double t = static_cast<double>(i) / kSegments;
        const double u = 1.0 - t;
        polygon.push_back({u * u * u * p0.x + 3 * u * u * t * c1.x + 3 * u * t * t * c2.x +
                               t * t * t * p3.x,
                           u * u * u * p0.y + 3 * u * u * t * c1.y + 3 * u * t * t * c2.y +
                               t * t * t * p3.y});
    }
}

BinaryMask bbox_bezier(const BinaryMask& mask, const Box& bbox, double jitter_frac, Rng& rng) {
    // Bbox outline in corner coordinates (half-open box covers exactly the
    // bbox pixels when filled at pixel centers).
    const double left = bbox.left, top = bbox.top;
    const double right = bbox.right, bottom = bbox.bottom;
    const double w = right - left, h = bottom - top;

    const double top_u1 = rng.uniform(0.0, jitter_frac * w);
    const double top_u2 = rng.uniform(0.0, jitter_frac * w);
    const double right_u1 = rng.uniform(0.0, jitter_frac * h);
    const double right_u2 = rng.uniform(0.0, jitter_frac * h);
    const double bottom_u1 = rng.uniform(0.0, jitter_frac * w);
    const double bottom_u2 = rng.uniform(0.0, jitter_frac * w);
    const double left_u1 = rng.uniform(0.0, jitter_frac * h);
    const double left_u2 = rng.uniform(0.0, jitter_frac * h);

    std::vector<DPoint> polygon;
    polygon.reserve(128);
    append_cubic(polygon, {left, top}, {left + w / 3, top - top_u1},
                 {left + 2 * w / 3, top - top_u2}, {right, top});
    append_cubic(polygon, {right, top}, {right + right_u1, top + h / 3},
                 {right + right_u2, top + 2 * h / 3}, {right, bottom});
    append_cubic(polygon, {right, bottom}, {right - w / 3, bottom + bottom_u1},
                 {right - 2 * w / 3, bottom + bottom_u2}, {left, bottom});
    append_cubic(polygon, {left, bottom}, {left - left_u1, bottom - h / 3},
                 {left - left_u2, bottom - 2 * h / 3}, {left, top});

    BinaryMask out = fill_polygon_even_odd(polygon, mask.width, mask.height);
    // The curves never dip inside the bbox, so the fill covers it; OR-ing the
    // bbox in guards the boundary rows against rounding.
    for (int y = bbox.top; y < bbox.bottom; ++y) {
        for (int x = bbox.left; x < bbox.right; ++x) out.set(x, y, true);
    }
    return out;
}

}  // namespace

BinaryMask enhance_mask(const BinaryMask& mask, const EnhancementSpec& spec, Rng& rng) {
    const auto bbox = mask.tight_bbox();
    if (!bbox) {
        throw Error(ErrorCode::EmptyMask, "cannot enhance an empty mask");
    }
    switch (spec.type) {
        case EnhancementType::Original:
            return mask;
        case EnhancementType::Eroded: {
            BinaryMask eroded = erode_disk(mask, relative_radius(spec.params.erode_frac, *bbox));
            if (eroded.empty_mask()) return mask;
            return eroded;
        }
        case EnhancementType::Dilated:
            return dilate_disk(mask, relative_radius(spec.params.dilate_frac, *bbox));
        case EnhancementType::ConvexHull: {
            const auto hull = convex_hull(true_pixels(mask));
            BinaryMask raster = rasterize_convex_hull(hull, mask.width, mask.height);
            if (spec.params.hull_expand_px > 0) {
                raster = dilate_disk(raster, spec.params.hull_expand_px);
            }
            return raster;
        }
        case EnhancementType::Ellipse: {
            // The enclosing ellipse is determined by the hull vertices alone,
            // so solve over those instead of every set pixel.
            const auto hull = convex_hull(true_pixels(mask));
            EllipseShape ellipse = min_enclosing_ellipse(hull);
            const double f2 = spec.params.ellipse_expand_factor * spec.params.ellipse_expand_factor;
            ellipse.a11 /= f2;
            ellipse.a12 /= f2;
            ellipse.a22 /= f2;
            return rasterize_ellipse(ellipse, mask.width, mask.height);
        }
        case EnhancementType::BboxBezier:
            return bbox_bezier(mask, *bbox, spec.params.bezier_jitter_frac, rng);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown enhancement type");
}

EnhancementSpec pick_enhancement(Rng& rng,
                                 const std::array<double, kEnhancementTypeCount>& weights,
                                 const EnhancementParams& params) {
    double total = 0.0;
    for (const double w : weights) {
        if (w < 0.0) throw Error(ErrorCode::InvalidArgument, "negative enhancement weight");
        total += w;
    }
    if (total <= 0.0) {
        throw Error(ErrorCode::InvalidArgument, "enhancement weights sum to zero");
    }
    const double draw = rng.uniform() * total;
    double cumulative = 0.0;
    int chosen = kEnhancementTypeCount - 1;
    for (int i = 0; i < kEnhancementTypeCount; ++i) {
        cumulative += weights[static_cast<std::size_t>(i)];
        if (draw < cumulative) {
            chosen = i;
            break;
        }
    }
    // Skip zero-weight types that the cumulative walk may land on at the end.
    while (chosen > 0 && weights[static_cast<std::size_t>(chosen)] == 0.0) --chosen;
    EnhancementSpec spec;
    spec.type = static_cast<EnhancementType>(chosen);
    spec.params = params;
    return spec;
}

}  // namespace pasteup
