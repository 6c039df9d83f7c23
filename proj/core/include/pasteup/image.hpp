#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pasteup/error.hpp"

namespace pasteup {

/// Axis-aligned pixel box, half-open: [left, right) x [top, bottom).
struct Box {
    int left = 0;
    int top = 0;
    int right = 0;
    int bottom = 0;

    int width() const { return right - left; }
    int height() const { return bottom - top; }
    long long area() const {
        return empty() ? 0LL : static_cast<long long>(width()) * height();
    }
    bool empty() const { return right <= left || bottom <= top; }

    bool operator==(const Box&) const = default;
};

Box box_intersection(const Box& a, const Box& b);

/// 8-bit raster, row-major, interleaved channels (1 = grey, 3 = RGB).
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;

    Image() = default;
    Image(int w, int h, int c, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::uint8_t& at(int x, int y, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool same_shape(const Image& other) const {
        return width == other.width && height == other.height && channels == other.channels;
    }

    bool operator==(const Image&) const = default;
};

/// Boolean raster, row-major. Bits are stored one byte each (0/1).
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false);

    bool get(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool value) {
        bits[static_cast<std::size_t>(y) * width + x] = value ? 1 : 0;
    }

    long long area() const;
    bool empty_mask() const { return area() == 0; }

    /// Tight bounding box of the true bits; nullopt for an all-false mask.
    std::optional<Box> tight_bbox() const;

    bool same_shape(const BinaryMask& other) const {
        return width == other.width && height == other.height;
    }

    /// a is a pixelwise subset of b (both same shape).
    static bool is_subset(const BinaryMask& a, const BinaryMask& b);

    bool operator==(const BinaryMask&) const = default;
};

enum class TriLabel : std::uint8_t { Background = 0, Foreground = 1, Unknown = 2 };

struct Trimap {
    int width = 0;
    int height = 0;
    std::vector<TriLabel> labels;

    Trimap() = default;
    Trimap(int w, int h, TriLabel fill = TriLabel::Background);

    TriLabel get(int x, int y) const {
        return labels[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, TriLabel value) {
        labels[static_cast<std::size_t>(y) * width + x] = value;
    }
};

struct AlphaMap {
    int width = 0;
    int height = 0;
    std::vector<double> alpha;

    AlphaMap() = default;
    AlphaMap(int w, int h, double fill = 0.0);

    double get(int x, int y) const {
        return alpha[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, double value) {
        alpha[static_cast<std::size_t>(y) * width + x] = value;
    }
};

/// Intersection over union of two boxes. Throws BothEmpty when both have
/// zero area.
double iou(const Box& a, const Box& b);

/// Intersection over union of two same-frame masks. Throws BothEmpty when
/// both are all-false, FrameMismatch on shape disagreement.
double iou(const BinaryMask& a, const BinaryMask& b);

}  // namespace pasteup
