#pragma once

#include <string>

#include "pasteup/config.hpp"
#include "pasteup/placement.hpp"
#include "pasteup/records.hpp"
#include "pasteup/rng.hpp"

namespace pasteup {

/// Foreground = mask eroded by a disk of radius band_px, Background =
/// complement of the dilation, Unknown = the ring in between. band_px = 0
/// gives a hard trimap with no Unknown.
Trimap make_trimap(const BinaryMask& mask, int band_px);

/// Alpha is 1 on Foreground, 0 on Background. On Unknown it ramps as
/// d_b / (d_b + d_f), the normalized Euclidean distances to the Background
/// and Foreground sets. Unknown with no Foreground anywhere gets 0, with no
/// Background anywhere gets 1. All values lie in [0, 1].
AlphaMap solve_alpha(const Trimap& trimap);

/// Eq.-style convex blend per pixel: out = alpha*instance + (1-alpha)*bg,
/// rounded half away from zero. Pixels with alpha = 0 are copied untouched
/// (bit-identical to bg). The instance sits at paste_box; alpha > 0 pixels
/// outside the box sample the nearest instance edge pixel (the feather band
/// extends past the tight mask). Throws FrameMismatch on channel or frame
/// disagreement, InvalidArgument if paste_box leaves the frame.
Image blend(const Image& bg, const Image& instance, const Box& paste_box, const AlphaMap& alpha);

/// Full composite: pastes the resized mask into the frame, feathers it with
/// a band of cfg.trimap_band_px, blends, deforms the mask per `enhancement`,
/// and returns the triplet with ground_truth = the untouched background.
Triplet build_triplet(const BackgroundRecord& bg, const ResizedInstance& instance,
                      const Placement& placement, const EnhancementSpec& enhancement,
                      const PipelineConfig& cfg, Rng& rng, std::string instance_id,
                      std::string class_label, std::uint64_t sample_seed);

}  // namespace pasteup
