#include "pasteup/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

namespace pasteup {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1D squared distance transform: lower envelope of parabolas q -> f[q] + (x-q)^2.
// Parabolas with infinite height are skipped.
void edt_1d(const double* f, int n, double* d, int* v, double* z) {
    int k = -1;
    auto intersect = [&](int q, int p) {
        return ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
               (2.0 * q - 2.0 * p);
    };
    for (int q = 0; q < n; ++q) {
        if (std::isinf(f[q])) continue;
        if (k < 0) {
            v[++k] = q;
            z[k] = -kInf;
            z[k + 1] = kInf;
            continue;
        }
        double s = intersect(q, v[k]);
        while (k >= 0 && s <= z[k]) {
            --k;
            if (k >= 0) s = intersect(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = k == 0 ? -kInf : s;
        z[k + 1] = kInf;
    }
    if (k < 0) {
        std::fill(d, d + n, kInf);
        return;
    }
    int j = 0;
    for (int x = 0; x < n; ++x) {
        while (z[j + 1] < x) ++j;
        const double dx = x - v[j];
        d[x] = dx * dx + f[v[j]];
    }
}

long long floor_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long long ceil_div(long long a, long long b) {
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

long long cross(PixelCoord o, PixelCoord a, PixelCoord b) {
    return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
           static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

bool on_segment(PixelCoord a, PixelCoord b, PixelCoord p) {
    if (cross(a, b, p) != 0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
           p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

struct Mat3 {
    double m[3][3] = {};
};

bool invert3(const Mat3& a, Mat3& out) {
    const double* r0 = a.m[0];
    const double* r1 = a.m[1];
    const double* r2 = a.m[2];
    const double c00 = r1[1] * r2[2] - r1[2] * r2[1];
    const double c01 = r1[2] * r2[0] - r1[0] * r2[2];
    const double c02 = r1[0] * r2[1] - r1[1] * r2[0];
    const double det = r0[0] * c00 + r0[1] * c01 + r0[2] * c02;
    if (std::abs(det) < 1e-30) return false;
    const double inv = 1.0 / det;
    out.m[0][0] = c00 * inv;
    out.m[1][0] = c01 * inv;
    out.m[2][0] = c02 * inv;
    out.m[0][1] = (r0[2] * r2[1] - r0[1] * r2[2]) * inv;
    out.m[1][1] = (r0[0] * r2[2] - r0[2] * r2[0]) * inv;
    out.m[2][1] = (r0[1] * r2[0] - r0[0] * r2[1]) * inv;
    out.m[0][2] = (r0[1] * r1[2] - r0[2] * r1[1]) * inv;
    out.m[1][2] = (r0[2] * r1[0] - r0[0] * r1[2]) * inv;
    out.m[2][2] = (r0[0] * r1[1] - r0[1] * r1[0]) * inv;
    return true;
}

struct Window {
    int x0 = 0;
    int y0 = 0;
    int w = 0;
    int h = 0;
};

// Set-bit bbox expanded by pad and clipped to the frame; nullopt when empty.
std::optional<Window> padded_window(const BinaryMask& mask, int pad) {
    const auto box = mask.tight_bbox();
    if (!box) return std::nullopt;
    Window win;
    win.x0 = std::max(0, box->left - pad);
    win.y0 = std::max(0, box->top - pad);
    win.w = std::min(mask.width, box->right + pad) - win.x0;
    win.h = std::min(mask.height, box->bottom + pad) - win.y0;
    return win;
}

EllipseShape bbox_fallback_ellipse(std::span<const PixelCoord> points) {
    int min_x = points[0].x, max_x = points[0].x;
    int min_y = points[0].y, max_y = points[0].y;
    for (const auto& p : points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    // Smallest axis-aligned ellipse around the bbox: semi-axes are the half
    // extents scaled by sqrt(2), floored at half a pixel for thin masks.
    const double half_w = (max_x - min_x) / 2.0;
    const double half_h = (max_y - min_y) / 2.0;
    const double a = std::max(0.5, half_w * std::sqrt(2.0));
    const double b = std::max(0.5, half_h * std::sqrt(2.0));
    EllipseShape e;
    e.cx = (min_x + max_x) / 2.0;
    e.cy = (min_y + max_y) / 2.0;
    e.a11 = 1.0 / (a * a);
    e.a12 = 0.0;
    e.a22 = 1.0 / (b * b);
    return e;
}

}  // namespace

std::vector<double> squared_distance_transform(const BinaryMask& mask) {
    const int w = mask.width;
    const int h = mask.height;
    const int n = std::max(w, h);
    std::vector<double> dist(static_cast<std::size_t>(w) * h);
    std::vector<double> f(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n));
    std::vector<int> v(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) + 1);

    // columns first
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[static_cast<std::size_t>(y)] = mask.get(x, y) ? 0.0 : kInf;
        edt_1d(f.data(), h, d.data(), v.data(), z.data());
        for (int y = 0; y < h; ++y) dist[static_cast<std::size_t>(y) * w + x] = d[static_cast<std::size_t>(y)];
    }
    // then rows
    for (int y = 0; y < h; ++y) {
        double* row = dist.data() + static_cast<std::size_t>(y) * w;
        std::copy(row, row + w, f.data());
        edt_1d(f.data(), w, d.data(), v.data(), z.data());
        std::copy(d.data(), d.data() + w, row);
    }
    return dist;
}

BinaryMask dilate_disk(const BinaryMask& mask, int radius) {
    if (radius < 0) throw Error(ErrorCode::InvalidArgument, "dilation radius must be >= 0");
    if (radius == 0) return mask;
    BinaryMask out(mask.width, mask.height);
    // Every set bit sits inside the padded window and nothing outside it can
    // land within `radius` of one, so window distances equal frame distances.
    const auto win = padded_window(mask, radius + 1);
    if (!win) return out;
    BinaryMask local(win->w, win->h);
    for (int y = 0; y < win->h; ++y) {
        const std::uint8_t* src =
            mask.bits.data() + static_cast<std::size_t>(win->y0 + y) * mask.width + win->x0;
        std::copy(src, src + win->w, local.bits.data() + static_cast<std::size_t>(y) * win->w);
    }
    const auto dist = squared_distance_transform(local);
    const double r2 = static_cast<double>(radius) * radius;
    for (int y = 0; y < win->h; ++y) {
        const double* d = dist.data() + static_cast<std::size_t>(y) * win->w;
        std::uint8_t* dst =
            out.bits.data() + static_cast<std::size_t>(win->y0 + y) * out.width + win->x0;
        for (int x = 0; x < win->w; ++x) dst[x] = d[x] <= r2 ? 1 : 0;
    }
    return out;
}

BinaryMask erode_disk(const BinaryMask& mask, int radius) {
    if (radius < 0) throw Error(ErrorCode::InvalidArgument, "erosion radius must be >= 0");
    if (radius == 0) return mask;
    BinaryMask out(mask.width, mask.height);
    // Survivors lie inside the set-bit bbox, and complement pixels beyond the
    // pad are already further than `radius` from it, so the windowed transform
    // decides d > radius exactly. Off-frame pixels stay foreground, as before.
    const auto win = padded_window(mask, radius + 1);
    if (!win) return out;
    BinaryMask local(win->w, win->h);
    for (int y = 0; y < win->h; ++y) {
        const std::uint8_t* src =
            mask.bits.data() + static_cast<std::size_t>(win->y0 + y) * mask.width + win->x0;
        std::uint8_t* dst = local.bits.data() + static_cast<std::size_t>(y) * win->w;
        for (int x = 0; x < win->w; ++x) dst[x] = src[x] ? 0 : 1;
    }
    const auto dist = squared_distance_transform(local);
    const double r2 = static_cast<double>(radius) * radius;
    for (int y = 0; y < win->h; ++y) {
        const double* d = dist.data() + static_cast<std::size_t>(y) * win->w;
        std::uint8_t* dst =
            out.bits.data() + static_cast<std::size_t>(win->y0 + y) * out.width + win->x0;
        for (int x = 0; x < win->w; ++x) dst[x] = d[x] > r2 ? 1 : 0;
    }
    return out;
}

std::vector<PixelCoord> convex_hull(std::vector<PixelCoord> points) {
    std::sort(points.begin(), points.end(), [](PixelCoord a, PixelCoord b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::size_t n = points.size();
    if (n <= 2) return points;

    std::vector<PixelCoord> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool hull_contains(std::span<const PixelCoord> hull, PixelCoord p) {
    if (hull.empty()) return false;
    if (hull.size() == 1) return hull[0] == p;
    if (hull.size() == 2) return on_segment(hull[0], hull[1], p);
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const PixelCoord a = hull[i];
        const PixelCoord b = hull[(i + 1) % hull.size()];
        if (cross(a, b, p) < 0) return false;
    }
    return true;
}

BinaryMask rasterize_convex_hull(std::span<const PixelCoord> hull, int width, int height) {
    BinaryMask out(width, height);
    if (hull.empty()) return out;
    if (hull.size() <= 2) {
        const PixelCoord a = hull.front();
        const PixelCoord b = hull.back();
        const int y_lo = std::max(0, std::min(a.y, b.y));
        const int y_hi = std::min(height - 1, std::max(a.y, b.y));
        const int x_lo = std::max(0, std::min(a.x, b.x));
        const int x_hi = std::min(width - 1, std::max(a.x, b.x));
        for (int y = y_lo; y <= y_hi; ++y) {
            for (int x = x_lo; x <= x_hi; ++x) {
                if (on_segment(a, b, {x, y})) out.set(x, y, true);
            }
        }
        return out;
    }

    int min_y = hull[0].y, max_y = hull[0].y;
    for (const auto& p : hull) {
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    // Per row, the hull membership test (every edge cross product >= 0)
    // reduces to one integer interval in x.
    for (int y = std::max(0, min_y); y <= std::min(height - 1, max_y); ++y) {
        long long x_lo = 0, x_hi = width - 1;
        bool row_ok = true;
        for (std::size_t i = 0; i < hull.size() && row_ok; ++i) {
            const PixelCoord a = hull[i];
            const PixelCoord b = hull[(i + 1) % hull.size()];
            const long long dx = b.x - a.x;
            const long long dy = b.y - a.y;
            // dx*(y-ay) - dy*(x-ax) >= 0  <=>  dy*x <= dx*(y-ay) + dy*ax
            const long long rhs = dx * (y - a.y) + dy * a.x;
            if (dy > 0) {
                x_hi = std::min(x_hi, floor_div(rhs, dy));
            } else if (dy < 0) {
                x_lo = std::max(x_lo, ceil_div(rhs, dy));
            } else if (dx * (y - a.y) < 0) {
                row_ok = false;
            }
        }
        if (!row_ok) continue;
        for (long long x = x_lo; x <= x_hi; ++x) out.set(static_cast<int>(x), y, true);
    }
    return out;
}

EllipseShape min_enclosing_ellipse(std::span<const PixelCoord> points, double tolerance) {
    if (points.empty()) {
        throw Error(ErrorCode::InvalidArgument, "ellipse of an empty point set");
    }
    std::vector<PixelCoord> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](PixelCoord a, PixelCoord b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return bbox_fallback_ellipse(points);

    const std::size_t n = pts.size();
    std::vector<double> u(n, 1.0 / static_cast<double>(n));
    const int max_iterations = 1000;
    for (int iter = 0; iter < max_iterations; ++iter) {
        Mat3 x{};
        for (std::size_t i = 0; i < n; ++i) {
            const double q[3] = {static_cast<double>(pts[i].x), static_cast<double>(pts[i].y), 1.0};
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) x.m[r][c] += u[i] * q[r] * q[c];
            }
        }
        Mat3 inv{};
        if (!invert3(x, inv)) return bbox_fallback_ellipse(points);
        double max_m = -1.0;
        std::size_t max_j = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double q[3] = {static_cast<double>(pts[i].x), static_cast<double>(pts[i].y), 1.0};
            double m = 0.0;
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) m += q[r] * inv.m[r][c] * q[c];
            }
            if (m > max_m) {
                max_m = m;
                max_j = i;
            }
        }
        if (max_m <= 3.0 * (1.0 + tolerance)) break;
        const double step = (max_m - 3.0) / (3.0 * (max_m - 1.0));
        for (auto& w : u) w *= 1.0 - step;
        u[max_j] += step;
    }

    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cx += u[i] * pts[i].x;
        cy += u[i] * pts[i].y;
    }
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = pts[i].x - cx;
        const double dy = pts[i].y - cy;
        sxx += u[i] * dx * dx;
        sxy += u[i] * dx * dy;
        syy += u[i] * dy * dy;
    }
    const double det = sxx * syy - sxy * sxy;
    if (det < 1e-18) return bbox_fallback_ellipse(points);
    // A = S^-1 / 2 gives the ellipse {(p-c)^T A (p-c) <= 1}.
    EllipseShape e;
    e.cx = cx;
    e.cy = cy;
    e.a11 = syy / det / 2.0;
    e.a12 = -sxy / det / 2.0;
    e.a22 = sxx / det / 2.0;

    // Rescale so every input point is inside despite the finite tolerance.
    double worst = 0.0;
    for (const auto& p : pts) {
        worst = std::max(worst, e.quadratic_form(p.x, p.y));
    }
    if (worst > 0.0) {
        e.a11 /= worst;
        e.a12 /= worst;
        e.a22 /= worst;
    }
    return e;
}

BinaryMask rasterize_ellipse(const EllipseShape& ellipse, int width, int height) {
    BinaryMask out(width, height);
    const double det = ellipse.a11 * ellipse.a22 - ellipse.a12 * ellipse.a12;
    if (det <= 0.0) return out;
    const double extent_x = std::sqrt(ellipse.a22 / det);
    const double extent_y = std::sqrt(ellipse.a11 / det);
    const int x_lo = std::max(0, static_cast<int>(std::floor(ellipse.cx - extent_x)) - 1);
    const int x_hi = std::min(width - 1, static_cast<int>(std::ceil(ellipse.cx + extent_x)) + 1);
    const int y_lo = std::max(0, static_cast<int>(std::floor(ellipse.cy - extent_y)) - 1);
    const int y_hi = std::min(height - 1, static_cast<int>(std::ceil(ellipse.cy + extent_y)) + 1);
    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            if (ellipse.quadratic_form(x, y) <= 1.0 + 1e-9) out.set(x, y, true);
        }
    }
    return out;
}

BinaryMask fill_polygon_even_odd(std::span<const DPoint> polygon, int width, int height) {
    BinaryMask out(width, height);
    if (polygon.size() < 3) return out;
    std::vector<double> crossings;
    for (int y = 0; y < height; ++y) {
        const double cy = y + 0.5;
        crossings.clear();
        for (std::size_t i = 0; i < polygon.size(); ++i) {
            const DPoint a = polygon[i];
            const DPoint b = polygon[(i + 1) % polygon.size()];
            if ((a.y <= cy) == (b.y <= cy)) continue;
            crossings.push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(crossings.begin(), crossings.end());
        for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
            // pixel centers x+0.5 in [crossings[i], crossings[i+1])
            int x_start = static_cast<int>(std::ceil(crossings[i] - 0.5));
            int x_end = static_cast<int>(std::ceil(crossings[i + 1] - 0.5));
            x_start = std::max(0, x_start);
            x_end = std::min(width, x_end);
            for (int x = x_start; x < x_end; ++x) out.set(x, y, true);
        }
    }
    return out;
}

}  // namespace pasteup
