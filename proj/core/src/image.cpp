#include "pasteup/image.hpp"

#include <algorithm>
#include <numeric>

namespace pasteup {

Box box_intersection(const Box& a, const Box& b) {
    Box out{std::max(a.left, b.left), std::max(a.top, b.top), std::min(a.right, b.right),
            std::min(a.bottom, b.bottom)};
    if (out.empty()) return Box{};
    return out;
}

Image::Image(int w, int h, int c, std::uint8_t fill) : width(w), height(h), channels(c) {
    if (w < 1 || h < 1) {
        throw Error(ErrorCode::InvalidArgument, "image dimensions must be >= 1");
    }
    if (c != 1 && c != 3) {
        throw Error(ErrorCode::InvalidArgument, "image channel count must be 1 or 3");
    }
    data.assign(static_cast<std::size_t>(w) * h * c, fill);
}

BinaryMask::BinaryMask(int w, int h, bool fill) : width(w), height(h) {
    if (w < 1 || h < 1) {
        throw Error(ErrorCode::InvalidArgument, "mask dimensions must be >= 1");
    }
    bits.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
}

long long BinaryMask::area() const {
    return std::accumulate(bits.begin(), bits.end(), 0LL,
                           [](long long acc, std::uint8_t b) { return acc + (b != 0); });
}

std::optional<Box> BinaryMask::tight_bbox() const {
    int min_x = width, min_y = height, max_x = -1, max_y = -1;
    for (int y = 0; y < height; ++y) {
        const std::uint8_t* row = bits.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            if (!row[x]) continue;
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
    }
    if (max_x < 0) return std::nullopt;
    return Box{min_x, min_y, max_x + 1, max_y + 1};
}

bool BinaryMask::is_subset(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::FrameMismatch, "subset test requires same-shape masks");
    }
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        if (a.bits[i] && !b.bits[i]) return false;
    }
    return true;
}

Trimap::Trimap(int w, int h, TriLabel fill) : width(w), height(h) {
    if (w < 1 || h < 1) {
        throw Error(ErrorCode::InvalidArgument, "trimap dimensions must be >= 1");
    }
    labels.assign(static_cast<std::size_t>(w) * h, fill);
}

AlphaMap::AlphaMap(int w, int h, double fill) : width(w), height(h) {
    if (w < 1 || h < 1) {
        throw Error(ErrorCode::InvalidArgument, "alpha map dimensions must be >= 1");
    }
    alpha.assign(static_cast<std::size_t>(w) * h, fill);
}

double iou(const Box& a, const Box& b) {
    const long long area_a = a.area();
    const long long area_b = b.area();
    if (area_a == 0 && area_b == 0) {
        throw Error(ErrorCode::BothEmpty, "IoU of two empty boxes is undefined");
    }
    const long long inter = box_intersection(a, b).area();
    const long long uni = area_a + area_b - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double iou(const BinaryMask& a, const BinaryMask& b) {
    if (!a.same_shape(b)) {
        throw Error(ErrorCode::FrameMismatch, "mask IoU requires same-shape masks");
    }
    long long inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        const bool pa = a.bits[i] != 0;
        const bool pb = b.bits[i] != 0;
        inter += pa && pb;
        uni += pa || pb;
    }
    if (uni == 0) {
        throw Error(ErrorCode::BothEmpty, "IoU of two empty masks is undefined");
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace pasteup
