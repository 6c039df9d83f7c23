#include "pasteup/compositor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pasteup/enhance.hpp"
#include "pasteup/morphology.hpp"

namespace pasteup {

namespace {

// Squared distances over a window of `src`. Values are exact wherever the
// nearest set bit lies inside the window.
std::vector<double> window_distances(const BinaryMask& src, int x0, int y0, int w, int h) {
    BinaryMask local(w, h);
    for (int y = 0; y < h; ++y) {
        const std::uint8_t* row =
            src.bits.data() + static_cast<std::size_t>(y0 + y) * src.width + x0;
        std::copy(row, row + w, local.bits.data() + static_cast<std::size_t>(y) * w);
    }
    return squared_distance_transform(local);
}

}  // namespace

Trimap make_trimap(const BinaryMask& mask, int band_px) {
    if (band_px < 0) {
        throw Error(ErrorCode::InvalidArgument, "trimap band must be >= 0");
    }
    const BinaryMask fg = erode_disk(mask, band_px);
    const BinaryMask reach = dilate_disk(mask, band_px);
    Trimap trimap(mask.width, mask.height, TriLabel::Background);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (fg.get(x, y)) {
                trimap.set(x, y, TriLabel::Foreground);
            } else if (reach.get(x, y)) {
                trimap.set(x, y, TriLabel::Unknown);
            }
        }
    }
    return trimap;
}

AlphaMap solve_alpha(const Trimap& trimap) {
    const int w = trimap.width;
    const int h = trimap.height;
    AlphaMap alpha(w, h, 0.0);
    BinaryMask fg(w, h);
    BinaryMask bg(w, h);
    bool has_bg = false;
    int fx0 = w, fy0 = h, fx1 = -1, fy1 = -1;  // foreground bbox, inclusive
    int ux0 = w, uy0 = h, ux1 = -1, uy1 = -1;  // unknown bbox, inclusive
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            switch (trimap.get(x, y)) {
                case TriLabel::Foreground:
                    fg.set(x, y, true);
                    alpha.set(x, y, 1.0);
                    fx0 = std::min(fx0, x);
                    fy0 = std::min(fy0, y);
                    fx1 = std::max(fx1, x);
                    fy1 = std::max(fy1, y);
                    break;
                case TriLabel::Background:
                    bg.set(x, y, true);
                    has_bg = true;
                    break;
                case TriLabel::Unknown:
                    ux0 = std::min(ux0, x);
                    uy0 = std::min(uy0, y);
                    ux1 = std::max(ux1, x);
                    uy1 = std::max(uy1, y);
                    break;
            }
        }
    }
    if (ux1 < 0) return alpha;

    const bool has_fg = fx1 >= 0;
    if (!has_fg || !has_bg) {
        const double fill = has_fg ? 1.0 : 0.0;
        for (int y = uy0; y <= uy1; ++y) {
            for (int x = ux0; x <= ux1; ++x) {
                if (trimap.get(x, y) == TriLabel::Unknown) alpha.set(x, y, fill);
            }
        }
        return alpha;
    }

    // Foreground distances over the joint foreground/unknown bbox: every
    // source is inside it, so window values equal frame values.
    const int jx0 = std::min(fx0, ux0), jy0 = std::min(fy0, uy0);
    const int jw = std::max(fx1, ux1) - jx0 + 1, jh = std::max(fy1, uy1) - jy0 + 1;
    const auto sq_fg = window_distances(fg, jx0, jy0, jw, jh);

    // Background sources can lie anywhere, so window values are only upper
    // bounds. Keep them where the found source is closer than any pixel
    // outside the window could be; otherwise redo on the whole frame.
    constexpr int kBgPad = 16;
    const int bx0 = std::max(0, ux0 - kBgPad), by0 = std::max(0, uy0 - kBgPad);
    const int bx1 = std::min(w - 1, ux1 + kBgPad), by1 = std::min(h - 1, uy1 + kBgPad);
    const int bw = bx1 - bx0 + 1, bh = by1 - by0 + 1;
    auto sq_bg = window_distances(bg, bx0, by0, bw, bh);
    bool exact = true;
    for (int y = uy0; y <= uy1 && exact; ++y) {
        for (int x = ux0; x <= ux1; ++x) {
            if (trimap.get(x, y) != TriLabel::Unknown) continue;
            double gap = std::numeric_limits<double>::infinity();
            if (bx0 > 0) gap = std::min(gap, static_cast<double>(x - bx0 + 1));
            if (bx1 < w - 1) gap = std::min(gap, static_cast<double>(bx1 + 1 - x));
            if (by0 > 0) gap = std::min(gap, static_cast<double>(y - by0 + 1));
            if (by1 < h - 1) gap = std::min(gap, static_cast<double>(by1 + 1 - y));
            if (sq_bg[static_cast<std::size_t>(y - by0) * bw + (x - bx0)] > gap * gap) {
                exact = false;
                break;
            }
        }
    }
    std::vector<double> sq_bg_full;
    if (!exact) sq_bg_full = squared_distance_transform(bg);

    for (int y = uy0; y <= uy1; ++y) {
        for (int x = ux0; x <= ux1; ++x) {
            if (trimap.get(x, y) != TriLabel::Unknown) continue;
            const double d_f =
                std::sqrt(sq_fg[static_cast<std::size_t>(y - jy0) * jw + (x - jx0)]);
            const double d2_b =
                exact ? sq_bg[static_cast<std::size_t>(y - by0) * bw + (x - bx0)]
                      : sq_bg_full[static_cast<std::size_t>(y) * w + x];
            const double d_b = std::sqrt(d2_b);
            alpha.set(x, y, std::clamp(d_b / (d_b + d_f), 0.0, 1.0));
        }
    }
    return alpha;
}

Image blend(const Image& bg, const Image& instance, const Box& paste_box,
            const AlphaMap& alpha) {
    if (bg.channels != instance.channels) {
        throw Error(ErrorCode::FrameMismatch, "channel counts differ");
    }
    if (alpha.width != bg.width || alpha.height != bg.height) {
        throw Error(ErrorCode::FrameMismatch, "alpha map frame differs from background");
    }
    if (paste_box.width() != instance.width || paste_box.height() != instance.height) {
        throw Error(ErrorCode::FrameMismatch, "paste box dims differ from instance");
    }
    if (paste_box.left < 0 || paste_box.top < 0 || paste_box.right > bg.width ||
        paste_box.bottom > bg.height) {
        throw Error(ErrorCode::InvalidArgument, "paste box leaves the frame");
    }

    Image out = bg;
    for (int y = 0; y < bg.height; ++y) {
        for (int x = 0; x < bg.width; ++x) {
            const double a = alpha.get(x, y);
            if (a <= 0.0) continue;  // keep background bytes untouched
            const int ix = std::clamp(x - paste_box.left, 0, instance.width - 1);
            const int iy = std::clamp(y - paste_box.top, 0, instance.height - 1);
            for (int c = 0; c < bg.channels; ++c) {
                const double v =
                    a * instance.at(ix, iy, c) + (1.0 - a) * bg.at(x, y, c);
                out.at(x, y, c) = static_cast<std::uint8_t>(std::floor(v + 0.5));
            }
        }
    }
    return out;
}

Triplet build_triplet(const BackgroundRecord& bg, const ResizedInstance& instance,
                      const Placement& placement, const EnhancementSpec& enhancement,
                      const PipelineConfig& cfg, Rng& rng, std::string instance_id,
                      std::string class_label, std::uint64_t sample_seed) {
    const Box paste_box = placement.paste_box();
    BinaryMask frame_mask(bg.image.width, bg.image.height);
    for (int y = 0; y < instance.mask.height; ++y) {
        for (int x = 0; x < instance.mask.width; ++x) {
            if (instance.mask.get(x, y)) {
                frame_mask.set(paste_box.left + x, paste_box.top + y, true);
            }
        }
    }

    Trimap trimap = make_trimap(frame_mask, cfg.trimap_band_px);
    const AlphaMap alpha = solve_alpha(trimap);

    Triplet triplet;
    triplet.input = blend(bg.image, instance.image, paste_box, alpha);
    triplet.enhanced_mask = enhance_mask(frame_mask, enhancement, rng);
    triplet.mask = std::move(frame_mask);
    triplet.ground_truth = bg.image;
    triplet.trimap = std::move(trimap);
    triplet.meta.instance_id = std::move(instance_id);
    triplet.meta.background_id = bg.id;
    triplet.meta.class_label = std::move(class_label);
    triplet.meta.scale = placement.scale;
    triplet.meta.cx = placement.cx;
    triplet.meta.cy = placement.cy;
    triplet.meta.placed_width = placement.width;
    triplet.meta.placed_height = placement.height;
    triplet.meta.enhancement = enhancement.type;
    triplet.meta.sample_seed = sample_seed;
    return triplet;
}

}  // namespace pasteup
