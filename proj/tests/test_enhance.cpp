#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <map>

#include "pasteup/enhance.hpp"
#include "pasteup/morphology.hpp"
#include "pasteup/rng.hpp"

#include "test_util.hpp"

using namespace pasteup;

namespace {

EnhancementSpec spec_of(EnhancementType type) {
    EnhancementSpec spec;
    spec.type = type;
    return spec;
}

}  // namespace

TEST_CASE("per-type laws hold on random masks") {
    Rng rng(501);
    int trials = 0;
    while (trials < 250) {
        const int w = 6 + static_cast<int>(rng.uniform_index(40));
        const int h = 6 + static_cast<int>(rng.uniform_index(40));
        const BinaryMask mask = test_util::random_blob(rng, w, h);
        if (mask.empty_mask()) continue;
        ++trials;

        const BinaryMask original = enhance_mask(mask, spec_of(EnhancementType::Original), rng);
        CHECK(original == mask);

        const BinaryMask eroded = enhance_mask(mask, spec_of(EnhancementType::Eroded), rng);
        CHECK_FALSE(eroded.empty_mask());
        CHECK(BinaryMask::is_subset(eroded, mask));

        const BinaryMask dilated = enhance_mask(mask, spec_of(EnhancementType::Dilated), rng);
        CHECK_FALSE(dilated.empty_mask());
        CHECK(BinaryMask::is_subset(mask, dilated));

        const BinaryMask hull = enhance_mask(mask, spec_of(EnhancementType::ConvexHull), rng);
        CHECK_FALSE(hull.empty_mask());
        CHECK(BinaryMask::is_subset(mask, hull));

        const BinaryMask ellipse = enhance_mask(mask, spec_of(EnhancementType::Ellipse), rng);
        CHECK_FALSE(ellipse.empty_mask());
        CHECK(BinaryMask::is_subset(mask, ellipse));

        const BinaryMask bezier = enhance_mask(mask, spec_of(EnhancementType::BboxBezier), rng);
        CHECK_FALSE(bezier.empty_mask());
        CHECK(BinaryMask::is_subset(mask, bezier));
    }
}

TEST_CASE("erosion that would empty the mask falls back to the identity") {
    BinaryMask dot(10, 10);
    dot.set(4, 4, true);
    Rng rng(502);
    EnhancementSpec spec = spec_of(EnhancementType::Eroded);
    spec.params.erode_frac = 0.5;
    const BinaryMask out = enhance_mask(dot, spec, rng);
    CHECK(out == dot);
}

TEST_CASE("erode and dilate radii derive from the tight bbox, floored at one") {
    // 30x10 bbox, frac 0.1 -> radius max(1, floor(0.1 * 10)) = 1
    BinaryMask mask(40, 20);
    for (int y = 5; y < 15; ++y) {
        for (int x = 5; x < 35; ++x) mask.set(x, y, true);
    }
    Rng rng(503);
    EnhancementSpec spec = spec_of(EnhancementType::Dilated);
    spec.params.dilate_frac = 0.1;
    CHECK(enhance_mask(mask, spec, rng) == dilate_disk(mask, 1));

    spec.params.dilate_frac = 0.45;  // floor(0.45 * 10) = 4
    CHECK(enhance_mask(mask, spec, rng) == dilate_disk(mask, 4));

    spec.type = EnhancementType::Eroded;
    spec.params.erode_frac = 0.3;  // floor(3.0) = 3
    CHECK(enhance_mask(mask, spec, rng) == erode_disk(mask, 3));
}

TEST_CASE("hull expansion dilates the rasterized hull") {
    BinaryMask mask(30, 30);
    // L-shape whose hull adds the inner corner
    for (int y = 5; y < 25; ++y) mask.set(5, y, true);
    for (int x = 5; x < 25; ++x) mask.set(x, 24, true);
    Rng rng(504);
    EnhancementSpec spec = spec_of(EnhancementType::ConvexHull);
    spec.params.hull_expand_px = 0;
    const BinaryMask bare = enhance_mask(mask, spec, rng);
    spec.params.hull_expand_px = 3;
    const BinaryMask expanded = enhance_mask(mask, spec, rng);
    CHECK(expanded == dilate_disk(bare, 3));
    CHECK(BinaryMask::is_subset(bare, expanded));
    // hull fills the triangle corner the L leaves open
    CHECK(bare.get(14, 15));
    CHECK_FALSE(mask.get(14, 15));
}

TEST_CASE("ellipse expansion scales the enclosing ellipse outward") {
    Rng rng(505);
    const BinaryMask mask = test_util::random_blob(rng, 24, 24);
    EnhancementSpec tight = spec_of(EnhancementType::Ellipse);
    tight.params.ellipse_expand_factor = 1.0;
    EnhancementSpec wide = spec_of(EnhancementType::Ellipse);
    wide.params.ellipse_expand_factor = 1.5;
    const BinaryMask a = enhance_mask(mask, tight, rng);
    const BinaryMask b = enhance_mask(mask, wide, rng);
    CHECK(BinaryMask::is_subset(a, b));
    CHECK(b.area() > a.area());
    CHECK(BinaryMask::is_subset(mask, a));
}

TEST_CASE("bbox bezier consumes eight uniforms and is reproducible") {
    Rng rng(506);
    const BinaryMask mask = test_util::random_blob(rng, 32, 28);
    Rng a(99), b(99);
    const BinaryMask out1 = enhance_mask(mask, spec_of(EnhancementType::BboxBezier), a);
    const BinaryMask out2 = enhance_mask(mask, spec_of(EnhancementType::BboxBezier), b);
    CHECK(out1 == out2);
    const std::uint64_t after_a = a.next_u64();
    const std::uint64_t after_b = b.next_u64();
    CHECK(after_a == after_b);  // same stream position afterwards

    Rng c(99);
    for (int i = 0; i < 8; ++i) (void)c.uniform();
    CHECK(after_a == c.next_u64());

    // non-stochastic types leave the stream untouched
    Rng d(7), e(7);
    (void)enhance_mask(mask, spec_of(EnhancementType::Dilated), d);
    (void)enhance_mask(mask, spec_of(EnhancementType::Ellipse), d);
    (void)enhance_mask(mask, spec_of(EnhancementType::Original), d);
    CHECK(d.next_u64() == e.next_u64());
}

TEST_CASE("bezier jitter of zero reduces to the tight bbox") {
    Rng rng(507);
    const BinaryMask mask = test_util::random_blob(rng, 30, 30);
    EnhancementSpec spec = spec_of(EnhancementType::BboxBezier);
    spec.params.bezier_jitter_frac = 0.0;
    const BinaryMask out = enhance_mask(mask, spec, rng);
    const auto bbox = mask.tight_bbox();
    REQUIRE(bbox.has_value());
    BinaryMask want(mask.width, mask.height);
    for (int y = bbox->top; y < bbox->bottom; ++y) {
        for (int x = bbox->left; x < bbox->right; ++x) want.set(x, y, true);
    }
    CHECK(out == want);
}

TEST_CASE("bezier stays in frame even for masks flush with the border") {
    BinaryMask mask(20, 16);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 20; ++x) mask.set(x, y, true);
    }
    Rng rng(508);
    const BinaryMask out = enhance_mask(mask, spec_of(EnhancementType::BboxBezier), rng);
    CHECK(out == mask);  // cannot exceed the frame, must still cover the bbox
}

TEST_CASE("empty mask input throws EmptyMask") {
    Rng rng(509);
    try {
        enhance_mask(BinaryMask(8, 8), spec_of(EnhancementType::Dilated), rng);
        FAIL("expected EmptyMask");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyMask);
    }
}

TEST_CASE("pick_enhancement draws the weighted categorical") {
    std::array<double, kEnhancementTypeCount> weights{1, 0, 3, 0, 0, 1};
    EnhancementParams params;
    Rng rng(510);
    std::map<EnhancementType, int> counts;
    const int n = 50000;
    for (int i = 0; i < n; ++i) {
        const EnhancementSpec spec = pick_enhancement(rng, weights, params);
        ++counts[spec.type];
        CHECK(spec.params.erode_frac == params.erode_frac);
    }
    CHECK(counts.size() == 3);
    CHECK(counts[EnhancementType::Original] == doctest::Approx(n / 5.0).epsilon(0.1));
    CHECK(counts[EnhancementType::Dilated] == doctest::Approx(n * 3 / 5.0).epsilon(0.05));
    CHECK(counts[EnhancementType::BboxBezier] == doctest::Approx(n / 5.0).epsilon(0.1));
    CHECK(counts.find(EnhancementType::Eroded) == counts.end());

    // exactly one uniform per draw
    Rng a(3), b(3);
    (void)pick_enhancement(a, weights, params);
    (void)b.uniform();
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("pick_enhancement rejects degenerate weights") {
    EnhancementParams params;
    Rng rng(511);
    CHECK_THROWS_AS(pick_enhancement(rng, {0, 0, 0, 0, 0, 0}, params), Error);
    CHECK_THROWS_AS(pick_enhancement(rng, {1, -0.5, 0, 0, 0, 0}, params), Error);
}
