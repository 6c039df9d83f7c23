#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pasteup/image.hpp"

namespace pasteup {

/// A cropped object instance: tight image patch plus its tight mask. This is
/// the currency the paste pipeline draws from.
struct InstanceRecord {
    std::string id;
    std::string class_label;
    Image image;       // tight crop of the source pixels
    BinaryMask mask;   // same dims as image, bbox touches all four edges
    double area_ratio = 0.0;  // mask area / source image area, in (0, 1]
    double score = 0.0;       // externally supplied relevance score; NaN = unscored
};

/// One annotated region already present in a background image. The mask is
/// stored as a tight crop positioned by `box` to keep large corpora cheap.
struct RegionRef {
    Box box;          // frame coordinates, half-open
    BinaryMask mask;  // tight, dims == box dims
};

struct BackgroundRecord {
    std::string id;
    Image image;
    std::vector<RegionRef> instance_regions;
    double coverage_ratio = 0.0;  // union of region areas / frame area
};

/// Per-class statistics of the normalized area ratio, plus the score
/// threshold that was applied when the class was filtered.
struct ClassStats {
    std::string class_label;
    double mu = 0.0;
    double sigma2 = 0.0;
    double score_threshold = 0.0;
};

enum class EnhancementType : int {
    Original = 0,
    Eroded = 1,
    Dilated = 2,
    ConvexHull = 3,
    Ellipse = 4,
    BboxBezier = 5,
};

constexpr int kEnhancementTypeCount = 6;

const char* enhancement_type_name(EnhancementType type);
EnhancementType enhancement_type_from_name(const std::string& name);

struct EnhancementParams {
    double erode_frac = 0.1;    // erosion radius as a fraction of min bbox side
    double dilate_frac = 0.1;   // dilation radius as a fraction of min bbox side
    int hull_expand_px = 3;     // extra dilation applied to the convex hull
    double ellipse_expand_factor = 1.1;
    double bezier_jitter_frac = 0.2;  // outward control-point offset cap, fraction of edge length
};

struct EnhancementSpec {
    EnhancementType type = EnhancementType::Original;
    EnhancementParams params;
};

struct TripletMeta {
    std::string instance_id;
    std::string background_id;
    std::string class_label;
    double scale = 0.0;                 // sampled area ratio s
    int cx = 0, cy = 0;                 // paste center
    int placed_width = 0, placed_height = 0;
    EnhancementType enhancement = EnhancementType::Original;
    std::uint64_t sample_seed = 0;
};

/// The dataset unit: composite input, paste mask, deformed mask, and the
/// untouched background as ground truth.
struct Triplet {
    Image input;
    BinaryMask mask;           // pasted mask in background frame
    BinaryMask enhanced_mask;  // deformed variant of `mask`
    Image ground_truth;
    Trimap trimap;             // feather regions the blend honored
    TripletMeta meta;
};

}  // namespace pasteup
