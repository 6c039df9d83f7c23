#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pasteup/error.hpp"
#include "pasteup/image.hpp"

using namespace pasteup;

TEST_CASE("box geometry") {
    const Box b{2, 3, 10, 7};
    CHECK(b.width() == 8);
    CHECK(b.height() == 4);
    CHECK(b.area() == 32);
    CHECK_FALSE(b.empty());
    CHECK(Box{5, 5, 5, 9}.empty());
    CHECK(Box{5, 5, 4, 9}.area() == 0);
}

TEST_CASE("box intersection clamps to overlap") {
    const Box a{0, 0, 10, 10};
    const Box b{5, 5, 15, 15};
    const Box inter = box_intersection(a, b);
    CHECK(inter.left == 5);
    CHECK(inter.top == 5);
    CHECK(inter.right == 10);
    CHECK(inter.bottom == 10);
    CHECK(box_intersection(a, Box{20, 20, 30, 30}).empty());
}

TEST_CASE("box iou on hand-sized cases") {
    const Box a{0, 0, 10, 10};
    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(iou(a, Box{10, 0, 20, 10}) == doctest::Approx(0.0));
    // overlap 25, union 175
    CHECK(iou(a, Box{5, 5, 15, 15}) == doctest::Approx(25.0 / 175.0));
}

TEST_CASE("image construction validates shape") {
    CHECK_THROWS_AS(Image(0, 5, 3), Error);
    CHECK_THROWS_AS(Image(5, 0, 1), Error);
    CHECK_THROWS_AS(Image(5, 5, 2), Error);
    const Image img(4, 3, 3);
    CHECK(img.data.size() == 4u * 3u * 3u);
}

TEST_CASE("image at() addresses row-major interleaved bytes") {
    Image img(3, 2, 3);
    img.at(2, 1, 1) = 77;
    CHECK(img.data[(1 * 3 + 2) * 3 + 1] == 77);
}

TEST_CASE("mask area, tight bbox, and subset") {
    BinaryMask m(6, 4);
    CHECK(m.empty_mask());
    CHECK_FALSE(m.tight_bbox().has_value());
    m.set(2, 1, true);
    m.set(4, 2, true);
    CHECK(m.area() == 2);
    const auto bbox = m.tight_bbox();
    REQUIRE(bbox.has_value());
    CHECK(bbox->left == 2);
    CHECK(bbox->top == 1);
    CHECK(bbox->right == 5);
    CHECK(bbox->bottom == 3);

    BinaryMask super = m;
    super.set(0, 0, true);
    CHECK(BinaryMask::is_subset(m, super));
    CHECK_FALSE(BinaryMask::is_subset(super, m));
    CHECK(BinaryMask::is_subset(m, m));
}

TEST_CASE("mask iou counts pixels") {
    BinaryMask a(4, 4), b(4, 4);
    for (int y = 0; y < 2; ++y) {
        for (int x = 0; x < 4; ++x) {
            a.set(x, y, true);       // top half: 8 px
            b.set(x, y + 1, true);   // middle half: 8 px, overlap 4
        }
    }
    CHECK(iou(a, b) == doctest::Approx(4.0 / 12.0));
    CHECK(iou(a, a) == doctest::Approx(1.0));

    const BinaryMask empty(4, 4);
    CHECK(iou(a, empty) == doctest::Approx(0.0));
    CHECK_THROWS_AS(iou(empty, empty), Error);

    const BinaryMask other(5, 4);
    CHECK_THROWS_AS(iou(a, other), Error);
}

TEST_CASE("trimap stores three labels") {
    Trimap t(3, 3);
    CHECK(t.get(1, 1) == TriLabel::Background);
    t.set(1, 1, TriLabel::Unknown);
    t.set(2, 0, TriLabel::Foreground);
    CHECK(t.get(1, 1) == TriLabel::Unknown);
    CHECK(t.get(2, 0) == TriLabel::Foreground);
}
