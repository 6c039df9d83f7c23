#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "pasteup/annotations.hpp"
#include "pasteup/error.hpp"
#include "pasteup/rng.hpp"

#include "test_util.hpp"

using namespace pasteup;

namespace {

// brute-force even-odd point-in-polygon at a pixel center
bool center_inside(const std::vector<DPoint>& poly, int px, int py) {
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
}

}  // namespace

TEST_CASE("golden fixture parses with the documented drops") {
    const AnnotationSet set = load_annotations(std::string(PASTEUP_FIXTURE_DIR) +
                                               "/annotations_golden.json");
    REQUIRE(set.images.size() == 2);
    CHECK(set.images[0].id == 1);
    CHECK(set.images[0].file == "img1.png");
    CHECK(set.images[0].width == 8);
    CHECK(set.images[0].height == 6);

    // out-of-frame polygon and dangling image id are dropped
    REQUIRE(set.annotations.size() == 4);
    CHECK(set.dropped == 2);

    const Annotation& tri = set.annotations[0];
    CHECK(tri.class_label == "tri");
    CHECK(tri.score == doctest::Approx(0.9));
    CHECK_FALSE(tri.region.is_rle);
    REQUIRE(tri.region.polygon.size() == 3);

    const Annotation& strip = set.annotations[1];
    CHECK(strip.region.is_rle);
    CHECK_FALSE(strip.region.rle_column_major);
    CHECK(std::isnan(strip.score));

    const Annotation& col = set.annotations[2];
    CHECK(col.region.rle_column_major);
    CHECK(col.score == doctest::Approx(0.5));
}

TEST_CASE("golden fixture masks decode to the hand-computed rasters") {
    const AnnotationSet set = load_annotations(std::string(PASTEUP_FIXTURE_DIR) +
                                               "/annotations_golden.json");
    int degenerate = 0;

    // triangle (1,1)-(5,1)-(1,5): centers with x>=1, y>=1, x+y<5
    const BinaryMask tri = decode_mask(set.annotations[0].region, 8, 6, &degenerate);
    CHECK(tri.area() == 6);
    for (int y = 0; y < 6; ++y) {
        for (int x = 0; x < 8; ++x) {
            CHECK(tri.get(x, y) == (x >= 1 && y >= 1 && x + y < 5));
        }
    }

    // row-major runs [10,4,34]: pixels 10..13 = row 1, columns 2..5
    const BinaryMask strip = decode_mask(set.annotations[1].region, 8, 6, &degenerate);
    CHECK(strip.area() == 4);
    for (int x = 2; x <= 5; ++x) CHECK(strip.get(x, 1));

    // column-major runs [0,6,42]: the whole first column
    const BinaryMask col = decode_mask(set.annotations[2].region, 8, 6, &degenerate);
    CHECK(col.area() == 6);
    for (int y = 0; y < 6; ++y) CHECK(col.get(0, y));
    CHECK(degenerate == 0);

    // two-vertex polygon: empty mask, counted not thrown
    const BinaryMask empty = decode_mask(set.annotations[3].region, 8, 6, &degenerate);
    CHECK(empty.empty_mask());
    CHECK(degenerate == 1);
}

// The two example files shipped with the schema document decode to exactly
// the rasters printed there; this keeps the document honest.
TEST_CASE("schema document fixtures decode to their documented rasters") {
    const AnnotationSet poly_set = load_annotations(std::string(PASTEUP_DOCS_FIXTURE_DIR) +
                                                    "/polygon_example.json");
    REQUIRE(poly_set.images.size() == 1);
    REQUIRE(poly_set.annotations.size() == 1);
    CHECK(poly_set.dropped == 0);
    CHECK(poly_set.images[0].id == 7);
    CHECK(poly_set.annotations[0].class_label == "wedge");
    CHECK(poly_set.annotations[0].score == doctest::Approx(0.75));

    const char* const poly_raster[6] = {
        "........",
        ".####...",
        ".###....",
        ".##.....",
        ".#......",
        "........",
    };
    const BinaryMask tri = decode_mask(poly_set.annotations[0].region, 8, 6);
    CHECK(tri.area() == 10);
    for (int y = 0; y < 6; ++y) {
        for (int x = 0; x < 8; ++x) {
            CHECK(tri.get(x, y) == (poly_raster[y][x] == '#'));
        }
    }
    Image source(8, 6, 3);
    const InstanceRecord rec = crop_instance(source, tri, "i7a0", "wedge", 0.75);
    CHECK(rec.image.width == 4);
    CHECK(rec.image.height == 4);
    CHECK(rec.area_ratio == doctest::Approx(10.0 / 48.0));

    const AnnotationSet rle_set = load_annotations(std::string(PASTEUP_DOCS_FIXTURE_DIR) +
                                                   "/rle_example.json");
    REQUIRE(rle_set.annotations.size() == 1);
    CHECK(rle_set.dropped == 0);
    CHECK(std::isnan(rle_set.annotations[0].score));

    const char* const rle_raster[4] = {
        "...###",
        "#.....",
        ".....#",
        "####..",
    };
    const BinaryMask patch = decode_mask(rle_set.annotations[0].region, 6, 4);
    CHECK(patch.area() == 9);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 6; ++x) {
            CHECK(patch.get(x, y) == (rle_raster[y][x] == '#'));
        }
    }
    const auto bbox = patch.tight_bbox();
    REQUIRE(bbox.has_value());
    CHECK(*bbox == Box{0, 0, 6, 4});
}

TEST_CASE("polygon rasterization matches the even-odd oracle on random polygons") {
    Rng rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = 8 + static_cast<int>(rng.uniform_index(25));
        const int h = 8 + static_cast<int>(rng.uniform_index(25));
        const int n = 3 + static_cast<int>(rng.uniform_index(6));
        RegionEncoding region;
        for (int i = 0; i < n; ++i) {
            region.polygon.push_back({rng.uniform(0.0, w), rng.uniform(0.0, h)});
        }
        const BinaryMask mask = decode_mask(region, w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                REQUIRE(mask.get(x, y) == center_inside(region.polygon, x, y));
            }
        }
    }
}

TEST_CASE("rle round-trips in both orders on random masks") {
    Rng rng(102);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 1 + static_cast<int>(rng.uniform_index(20));
        const int h = 1 + static_cast<int>(rng.uniform_index(20));
        const BinaryMask mask = test_util::random_mask(rng, w, h, rng.uniform(0.05, 0.95));
        for (const bool column_major : {false, true}) {
            RegionEncoding region;
            region.is_rle = true;
            region.rle_column_major = column_major;
            region.rle_counts = encode_rle(mask, column_major);
            // alternation starts with background
            std::int64_t sum = 0;
            for (const auto c : region.rle_counts) sum += c;
            REQUIRE(sum == static_cast<std::int64_t>(w) * h);
            const BinaryMask back = decode_mask(region, w, h);
            REQUIRE(back == mask);
        }
    }
}

TEST_CASE("rle length mismatch throws") {
    RegionEncoding region;
    region.is_rle = true;
    region.rle_counts = {3, 4};  // 7 != 3*3
    try {
        decode_mask(region, 3, 3);
        FAIL("expected LengthMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LengthMismatch);
    }
}

TEST_CASE("top-level schema violations throw, per-entry problems drop") {
    CHECK_THROWS_AS(parse_annotations("not json at all"), Error);
    CHECK_THROWS_AS(parse_annotations("[]"), Error);
    CHECK_THROWS_AS(parse_annotations(R"({"images": []})"), Error);
    CHECK_THROWS_AS(parse_annotations(R"({"images": {}, "annotations": []})"), Error);
    CHECK_THROWS_AS(
        parse_annotations(R"({"images": [{"id": 1}], "annotations": []})"), Error);

    // annotation problems are dropped, never thrown
    const std::string text = R"({
      "images": [{"id": 1, "file": "a.png", "width": 4, "height": 4}],
      "annotations": [
        {"image_id": 1, "class": "ok", "polygon": [[0,0],[2,0],[0,2]]},
        {"image_id": 1, "class": "no-region"},
        {"image_id": 1, "polygon": [[0,0],[2,0],[0,2]]},
        {"image_id": 1, "class": "both", "polygon": [[0,0],[2,0],[0,2]], "rle": {"counts": [16], "order": "row-major"}},
        {"image_id": 1, "class": "bad-order", "rle": {"counts": [16], "order": "diagonal"}},
        {"image_id": 1, "class": "bad-score", "polygon": [[0,0],[2,0],[0,2]], "score": "high"},
        {"image_id": 7, "class": "dangling", "polygon": [[0,0],[2,0],[0,2]]}
      ]
    })";
    const AnnotationSet set = parse_annotations(text);
    REQUIRE(set.annotations.size() == 1);
    CHECK(set.annotations[0].class_label == "ok");
    CHECK(set.dropped == 6);
}

TEST_CASE("polygon vertices may sit on the frame boundary but not beyond") {
    const std::string ok = R"({
      "images": [{"id": 1, "file": "a.png", "width": 4, "height": 4}],
      "annotations": [{"image_id": 1, "class": "full", "polygon": [[0,0],[4,0],[4,4],[0,4]]}]
    })";
    CHECK(parse_annotations(ok).annotations.size() == 1);

    const std::string beyond = R"({
      "images": [{"id": 1, "file": "a.png", "width": 4, "height": 4}],
      "annotations": [{"image_id": 1, "class": "far", "polygon": [[0,0],[4.5,0],[4,4]]}]
    })";
    const AnnotationSet set = parse_annotations(beyond);
    CHECK(set.annotations.empty());
    CHECK(set.dropped == 1);
}

TEST_CASE("crop_instance cuts the tight bbox and records the frame ratio") {
    Rng rng(103);
    const Image source = test_util::random_image(rng, 12, 10, 3);
    BinaryMask mask(12, 10);
    mask.set(3, 2, true);
    mask.set(5, 4, true);
    const InstanceRecord rec = crop_instance(source, mask, "id-1", "thing", 0.7);
    CHECK(rec.image.width == 3);
    CHECK(rec.image.height == 3);
    CHECK(rec.mask.width == 3);
    CHECK(rec.mask.height == 3);
    CHECK(rec.mask.get(0, 0));
    CHECK(rec.mask.get(2, 2));
    CHECK(rec.mask.area() == 2);
    CHECK(rec.area_ratio == doctest::Approx(2.0 / 120.0));
    CHECK(rec.image.at(0, 0, 1) == source.at(3, 2, 1));
    CHECK(rec.image.at(2, 2, 0) == source.at(5, 4, 0));
    // crop touches all four edges
    const auto bbox = rec.mask.tight_bbox();
    REQUIRE(bbox.has_value());
    CHECK(*bbox == Box{0, 0, 3, 3});

    CHECK_THROWS_AS(crop_instance(source, BinaryMask(12, 10), "id", "c", 0.5), Error);
    CHECK_THROWS_AS(crop_instance(source, BinaryMask(5, 5), "id", "c", 0.5), Error);
}
