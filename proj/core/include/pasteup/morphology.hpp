#pragma once

#include <span>
#include <vector>

#include "pasteup/image.hpp"

namespace pasteup {

struct PixelCoord {
    int x = 0;
    int y = 0;
    bool operator==(const PixelCoord&) const = default;
};

struct DPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Exact squared Euclidean distance from every pixel to the nearest true
/// pixel (Felzenszwalb-Huttenlocher two-pass transform). All-false input
/// yields +infinity everywhere.
std::vector<double> squared_distance_transform(const BinaryMask& mask);

/// Morphology with a Euclidean disk of integer radius: the structuring
/// element is every integer offset (dx,dy) with dx^2+dy^2 <= radius^2.
/// Pixels outside the frame count as background for dilation and as
/// foreground for erosion (so a full-frame mask survives erosion).
BinaryMask dilate_disk(const BinaryMask& mask, int radius);
BinaryMask erode_disk(const BinaryMask& mask, int radius);

/// Convex hull of integer points, counter-clockwise, collinear points
/// dropped. Returns 1 or 2 points for degenerate inputs.
std::vector<PixelCoord> convex_hull(std::vector<PixelCoord> points);

/// True iff the query point lies inside or on the hull polygon. Exact
/// integer arithmetic.
bool hull_contains(std::span<const PixelCoord> hull, PixelCoord p);

/// Rasterizes the hull onto a w x h frame: a pixel is set iff its center
/// (integer lattice point) is inside or on the hull.
BinaryMask rasterize_convex_hull(std::span<const PixelCoord> hull, int width, int height);

/// Ellipse {p : (p-c)^T A (p-c) <= 1} with A = [[a11,a12],[a12,a22]].
struct EllipseShape {
    double cx = 0.0, cy = 0.0;
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;

    double quadratic_form(double x, double y) const {
        const double dx = x - cx, dy = y - cy;
        return a11 * dx * dx + 2.0 * a12 * dx * dy + a22 * dy * dy;
    }
};

/// Minimum-volume enclosing ellipse of a point set (Khachiyan's iteration at
/// the given tolerance). The returned quadratic form is rescaled so every
/// input point satisfies form(p) <= 1 even at finite tolerance. Degenerate
/// inputs (collinear or fewer than 3 distinct points) fall back to the
/// smallest axis-aligned ellipse around the point bbox.
EllipseShape min_enclosing_ellipse(std::span<const PixelCoord> points, double tolerance = 1e-3);

/// Pixel centers with quadratic form <= 1 (plus a 1e-9 slack so boundary
/// points survive rounding).
BinaryMask rasterize_ellipse(const EllipseShape& ellipse, int width, int height);

/// Even-odd polygon fill sampled at pixel centers (x+0.5, y+0.5) in corner
/// coordinates: vertex (0,0) is the top-left image corner.
BinaryMask fill_polygon_even_odd(std::span<const DPoint> polygon, int width, int height);

}  // namespace pasteup
