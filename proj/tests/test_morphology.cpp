#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "pasteup/morphology.hpp"
#include "pasteup/rng.hpp"

#include "test_util.hpp"

using namespace pasteup;

namespace {

constexpr double kBigDist = 1e18;

std::vector<double> brute_sqdist(const BinaryMask& mask) {
    std::vector<double> out(static_cast<std::size_t>(mask.width) * mask.height, kBigDist);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            double best = kBigDist;
            for (int sy = 0; sy < mask.height; ++sy) {
                for (int sx = 0; sx < mask.width; ++sx) {
                    if (!mask.get(sx, sy)) continue;
                    const double d = double(sx - x) * (sx - x) + double(sy - y) * (sy - y);
                    best = std::min(best, d);
                }
            }
            out[static_cast<std::size_t>(y) * mask.width + x] = best;
        }
    }
    return out;
}

BinaryMask brute_dilate(const BinaryMask& mask, int r) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool hit = false;
            for (int dy = -r; dy <= r && !hit; ++dy) {
                for (int dx = -r; dx <= r && !hit; ++dx) {
                    if (dx * dx + dy * dy > r * r) continue;
                    const int sx = x + dx, sy = y + dy;
                    if (sx >= 0 && sx < mask.width && sy >= 0 && sy < mask.height &&
                        mask.get(sx, sy)) {
                        hit = true;
                    }
                }
            }
            out.set(x, y, hit);
        }
    }
    return out;
}

// out-of-frame neighbours count as foreground: a shape flush against the
// frame edge erodes only from its interior boundary
BinaryMask brute_erode(const BinaryMask& mask, int r) {
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool all = true;
            for (int dy = -r; dy <= r && all; ++dy) {
                for (int dx = -r; dx <= r && all; ++dx) {
                    if (dx * dx + dy * dy > r * r) continue;
                    const int sx = x + dx, sy = y + dy;
                    if (sx >= 0 && sx < mask.width && sy >= 0 && sy < mask.height &&
                        !mask.get(sx, sy)) {
                        all = false;
                    }
                }
            }
            out.set(x, y, all);
        }
    }
    return out;
}

double cross(const PixelCoord& o, const PixelCoord& a, const PixelCoord& b) {
    return double(a.x - o.x) * (b.y - o.y) - double(a.y - o.y) * (b.x - o.x);
}

}  // namespace

TEST_CASE("squared distance transform equals brute force") {
    Rng rng(201);
    for (int trial = 0; trial < 30; ++trial) {
        const int w = 1 + static_cast<int>(rng.uniform_index(24));
        const int h = 1 + static_cast<int>(rng.uniform_index(24));
        const BinaryMask mask = test_util::random_mask(rng, w, h, rng.uniform(0.0, 0.4));
        const std::vector<double> got = squared_distance_transform(mask);
        const std::vector<double> want = brute_sqdist(mask);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (want[i] >= kBigDist) {
                REQUIRE(got[i] >= kBigDist);  // empty mask: everything unreachable
            } else {
                REQUIRE(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("edt of a single point is the squared euclidean distance") {
    BinaryMask mask(9, 7);
    mask.set(4, 3, true);
    const auto d = squared_distance_transform(mask);
    for (int y = 0; y < 7; ++y) {
        for (int x = 0; x < 9; ++x) {
            const double want = double(x - 4) * (x - 4) + double(y - 3) * (y - 3);
            CHECK(d[static_cast<std::size_t>(y) * 9 + x] == doctest::Approx(want));
        }
    }
}

TEST_CASE("disk dilation and erosion match brute force") {
    Rng rng(202);
    for (int trial = 0; trial < 25; ++trial) {
        const int w = 4 + static_cast<int>(rng.uniform_index(20));
        const int h = 4 + static_cast<int>(rng.uniform_index(20));
        const int r = static_cast<int>(rng.uniform_index(6));
        const BinaryMask mask = test_util::random_mask(rng, w, h, rng.uniform(0.1, 0.7));
        REQUIRE(dilate_disk(mask, r) == brute_dilate(mask, r));
        REQUIRE(erode_disk(mask, r) == brute_erode(mask, r));
    }
}

TEST_CASE("morphology edge semantics") {
    // full frame is a fixed point of erosion (out-of-frame is foreground)
    BinaryMask full(10, 8);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 10; ++x) full.set(x, y, true);
    }
    CHECK(erode_disk(full, 3) == full);

    const BinaryMask empty(10, 8);
    CHECK(dilate_disk(empty, 3) == empty);
    CHECK(erode_disk(empty, 3) == empty);

    // radius zero is the identity
    Rng rng(203);
    const BinaryMask mask = test_util::random_mask(rng, 12, 12, 0.5);
    CHECK(dilate_disk(mask, 0) == mask);
    CHECK(erode_disk(mask, 0) == mask);

    CHECK_THROWS(dilate_disk(mask, -1));
    CHECK_THROWS(erode_disk(mask, -1));
}

TEST_CASE("dilation and erosion are dual and monotone") {
    Rng rng(204);
    for (int trial = 0; trial < 10; ++trial) {
        const BinaryMask mask = test_util::random_blob(rng, 20, 16);
        for (int r = 1; r <= 4; ++r) {
            const BinaryMask dil = dilate_disk(mask, r);
            const BinaryMask ero = erode_disk(mask, r);
            CHECK(BinaryMask::is_subset(mask, dil));
            CHECK(BinaryMask::is_subset(ero, mask));
            if (r >= 2) {
                CHECK(BinaryMask::is_subset(dilate_disk(mask, r - 1), dil));
                CHECK(BinaryMask::is_subset(ero, erode_disk(mask, r - 1)));
            }
        }
    }
}

TEST_CASE("convex hull is convex, ccw, and contains every input point") {
    Rng rng(205);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_index(40));
        std::vector<PixelCoord> points;
        for (int i = 0; i < n; ++i) {
            points.push_back({static_cast<int>(rng.uniform_index(30)),
                              static_cast<int>(rng.uniform_index(30))});
        }
        const std::vector<PixelCoord> hull = convex_hull(points);
        REQUIRE(!hull.empty());

        // every hull vertex is an input point
        for (const auto& v : hull) {
            CHECK(std::find(points.begin(), points.end(), v) != points.end());
        }
        // strict convexity: consecutive edge turns are all left turns
        if (hull.size() >= 3) {
            for (std::size_t i = 0; i < hull.size(); ++i) {
                const auto& o = hull[i];
                const auto& a = hull[(i + 1) % hull.size()];
                const auto& b = hull[(i + 2) % hull.size()];
                CHECK(cross(o, a, b) > 0);
            }
        }
        for (const auto& p : points) {
            CHECK(hull_contains(hull, p));
        }
    }
}

TEST_CASE("hull_contains agrees with the half-plane oracle") {
    const std::vector<PixelCoord> square = convex_hull(
        {{2, 2}, {10, 2}, {10, 8}, {2, 8}});
    for (int y = 0; y < 12; ++y) {
        for (int x = 0; x < 14; ++x) {
            const bool want = x >= 2 && x <= 10 && y >= 2 && y <= 8;
            CHECK(hull_contains(square, {x, y}) == want);
        }
    }
    // degenerate hulls: point and segment
    const std::vector<PixelCoord> point{{3, 3}};
    CHECK(hull_contains(point, {3, 3}));
    CHECK_FALSE(hull_contains(point, {3, 4}));
    const std::vector<PixelCoord> seg = convex_hull({{1, 1}, {5, 5}});
    CHECK(hull_contains(seg, {3, 3}));
    CHECK_FALSE(hull_contains(seg, {3, 4}));
    CHECK_FALSE(hull_contains(seg, {6, 6}));
}

TEST_CASE("hull rasterization equals per-pixel containment") {
    Rng rng(206);
    for (int trial = 0; trial < 40; ++trial) {
        const int w = 6 + static_cast<int>(rng.uniform_index(26));
        const int h = 6 + static_cast<int>(rng.uniform_index(26));
        const int n = 1 + static_cast<int>(rng.uniform_index(12));
        std::vector<PixelCoord> points;
        for (int i = 0; i < n; ++i) {
            points.push_back({static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(w))),
                              static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(h)))});
        }
        const auto hull = convex_hull(points);
        const BinaryMask raster = rasterize_convex_hull(hull, w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                REQUIRE(raster.get(x, y) == hull_contains(hull, {x, y}));
            }
        }
    }
}

TEST_CASE("minimum enclosing ellipse contains all points") {
    Rng rng(207);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_index(30));
        std::vector<PixelCoord> points;
        for (int i = 0; i < n; ++i) {
            points.push_back({static_cast<int>(rng.uniform_index(60)),
                              static_cast<int>(rng.uniform_index(60))});
        }
        const EllipseShape e = min_enclosing_ellipse(points);
        for (const auto& p : points) {
            REQUIRE(e.quadratic_form(p.x, p.y) <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("ellipse of rectangle corners matches the analytic solution") {
    // MVEE of the 4 corners of a w x h rectangle: semi-axes (w/2)sqrt2, (h/2)sqrt2
    const std::vector<PixelCoord> corners = {{0, 0}, {20, 0}, {20, 10}, {0, 10}};
    const EllipseShape e = min_enclosing_ellipse(corners);
    CHECK(e.cx == doctest::Approx(10.0).epsilon(0.01));
    CHECK(e.cy == doctest::Approx(5.0).epsilon(0.01));
    for (const auto& p : corners) {
        CHECK(e.quadratic_form(p.x, p.y) == doctest::Approx(1.0).epsilon(0.01));
    }
    // area pi*a*b within 5% of the analytic 2*pi*(w/2)*(h/2)
    const double det = e.a11 * e.a22 - e.a12 * e.a12;
    const double area = 3.14159265358979 / std::sqrt(det);
    const double want = 2.0 * 3.14159265358979 * 10.0 * 5.0;
    CHECK(area == doctest::Approx(want).epsilon(0.05));
}

TEST_CASE("degenerate point sets fall back to a containing ellipse") {
    for (const auto& points : std::vector<std::vector<PixelCoord>>{
             {{5, 5}},
             {{2, 3}, {9, 3}},
             {{1, 1}, {4, 4}, {7, 7}, {10, 10}},  // collinear
         }) {
        const EllipseShape e = min_enclosing_ellipse(points);
        for (const auto& p : points) {
            CHECK(e.quadratic_form(p.x, p.y) <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("ellipse rasterization matches the quadratic form at pixel centers") {
    Rng rng(208);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<PixelCoord> points;
        const int n = 3 + static_cast<int>(rng.uniform_index(20));
        for (int i = 0; i < n; ++i) {
            points.push_back({static_cast<int>(rng.uniform_index(40)),
                              static_cast<int>(rng.uniform_index(40))});
        }
        const EllipseShape e = min_enclosing_ellipse(points);
        const BinaryMask raster = rasterize_ellipse(e, 44, 44);
        for (int y = 0; y < 44; ++y) {
            for (int x = 0; x < 44; ++x) {
                REQUIRE(raster.get(x, y) == (e.quadratic_form(x, y) <= 1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("even-odd polygon fill matches the crossing-count oracle") {
    Rng rng(209);
    auto center_inside = [](const std::vector<DPoint>& poly, int px, int py) {
        const double cx = px + 0.5, cy = py + 0.5;
        bool inside = false;
        for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
            const DPoint& a = poly[j];
            const DPoint& b = poly[i];
            if ((b.y <= cy) != (a.y <= cy)) {
                const double x_at = b.x + (cy - b.y) / (a.y - b.y) * (a.x - b.x);
                if (cx < x_at) inside = !inside;
            }
        }
        return inside;
    };
    for (int trial = 0; trial < 40; ++trial) {
        const int w = 8 + static_cast<int>(rng.uniform_index(20));
        const int h = 8 + static_cast<int>(rng.uniform_index(20));
        std::vector<DPoint> poly;
        const int n = 3 + static_cast<int>(rng.uniform_index(8));
        for (int i = 0; i < n; ++i) {
            poly.push_back({rng.uniform(-2.0, w + 2.0), rng.uniform(-2.0, h + 2.0)});
        }
        const BinaryMask mask = fill_polygon_even_odd(poly, w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                REQUIRE(mask.get(x, y) == center_inside(poly, x, y));
            }
        }
    }
}

TEST_CASE("self-intersecting polygon fills by parity") {
    // bowtie: (0,0) (8,8) (8,0) (0,8) — the middle column is outside
    const std::vector<DPoint> bowtie = {{0, 0}, {8, 8}, {8, 0}, {0, 8}};
    const BinaryMask mask = fill_polygon_even_odd(bowtie, 8, 8);
    CHECK(mask.get(1, 3));           // left wing
    CHECK(mask.get(6, 3));           // right wing
    CHECK_FALSE(mask.get(3, 0));     // above the crossing
    CHECK_FALSE(mask.get(4, 7));     // below the crossing
}
