#pragma once

#include <array>

#include "pasteup/records.hpp"
#include "pasteup/rng.hpp"

namespace pasteup {

/// Applies one deformation to a nonempty mask (throws EmptyMask otherwise).
///
///   Original    identity
///   Eroded      disk erosion, radius = erode_frac * min bbox side (>= 1 px);
///               falls back to the identity when erosion would empty the mask
///   Dilated     disk dilation, radius analogous
///   ConvexHull  raster hull of the true pixels, dilated hull_expand_px
///   Ellipse     minimum enclosing ellipse scaled by ellipse_expand_factor
///   BboxBezier  cubic curve per bbox edge, control points displaced outward
///               by uniform(0, bezier_jitter_frac * edge length), region filled
///
/// Only BboxBezier consumes randomness: exactly 8 uniforms, edge order
/// top, right, bottom, left (2 control points each).
/// Dilated/ConvexHull/Ellipse/BboxBezier are pixelwise supersets of the
/// input; Eroded is a subset (or identical after the fallback). All outputs
/// are nonempty.
BinaryMask enhance_mask(const BinaryMask& mask, const EnhancementSpec& spec, Rng& rng);

/// Categorical draw over the six types (one uniform). Weights need not be
/// normalized; all-zero weights throw InvalidArgument.
EnhancementSpec pick_enhancement(Rng& rng,
                                 const std::array<double, kEnhancementTypeCount>& weights,
                                 const EnhancementParams& params);

}  // namespace pasteup
