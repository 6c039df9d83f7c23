#pragma once

#include "pasteup/config.hpp"
#include "pasteup/morphology.hpp"
#include "pasteup/records.hpp"
#include "pasteup/rng.hpp"

namespace pasteup {

/// A chosen paste location. The box spanned by (cx, cy) and the resized
/// dims always lies fully inside the background frame: the margins
/// e_x = ceil(w/2), e_y = ceil(h/2) guarantee it.
struct Placement {
    double scale = 0.0;  // sampled area ratio
    int width = 0;       // resized instance dims
    int height = 0;
    int cx = 0;
    int cy = 0;

    int margin_x() const { return (width + 1) / 2; }
    int margin_y() const { return (height + 1) / 2; }

    /// Half-open paste box: left = cx - floor(w/2), top = cy - floor(h/2).
    Box paste_box() const {
        const int left = cx - width / 2;
        const int top = cy - height / 2;
        return Box{left, top, left + width, top + height};
    }
};

/// Draws s ~ N(mu, sigma2) and rejects draws outside the open interval
/// (window.min_ratio, window.max_ratio). After retry_limit draws the last
/// one is clamped to the nearest bound. Each draw consumes exactly two
/// uniforms from the stream.
double sample_scale(const ClassStats& stats, const AreaWindow& window, int retry_limit, Rng& rng);

struct ResizedInstance {
    Image image;
    BinaryMask mask;  // re-tightened, same dims as image
    double factor = 1.0;
};

/// Scales the instance so its mask area approaches s*W*H. The linear factor
/// sqrt(target_area / mask_area) is capped at cfg.upscale_cap. Images are
/// resampled bilinearly, masks by nearest neighbor, both center-aligned.
/// Throws DegenerateResize when either output dim would be < 1 px or the
/// resampled mask comes out empty.
ResizedInstance resize_instance(const InstanceRecord& instance, double s, int bg_width,
                                int bg_height, const PipelineConfig& cfg);

/// Feasible paste centers: the margin rectangle minus every center whose
/// paste region has IoU >= r with any existing instance (strict "< r"
/// survives). Bbox mode compares paste box against instance boxes in O(1)
/// per candidate; mask mode compares the placed mask against stored
/// instance masks and costs O(overlap area) per candidate near instances.
/// Returned as a frame-sized bitmap over centers.
/// Throws InstanceTooLarge when the resized dims exceed the frame.
BinaryMask feasible_region(const BackgroundRecord& bg, int placed_width, int placed_height,
                           const BinaryMask& placed_mask, double r, IouMode mode);

/// Uniform pick among set bits (row-major enumeration order). Consumes one
/// uniform draw. Throws EmptyFeasibleRegion.
PixelCoord pick_center(const BinaryMask& centers, Rng& rng);

}  // namespace pasteup
