#include "pasteup/records.hpp"

namespace pasteup {

const char* enhancement_type_name(EnhancementType type) {
    switch (type) {
        case EnhancementType::Original: return "original";
        case EnhancementType::Eroded: return "eroded";
        case EnhancementType::Dilated: return "dilated";
        case EnhancementType::ConvexHull: return "convex_hull";
        case EnhancementType::Ellipse: return "ellipse";
        case EnhancementType::BboxBezier: return "bbox_bezier";
    }
    return "original";
}

EnhancementType enhancement_type_from_name(const std::string& name) {
    if (name == "original") return EnhancementType::Original;
    if (name == "eroded") return EnhancementType::Eroded;
    if (name == "dilated") return EnhancementType::Dilated;
    if (name == "convex_hull" || name == "hull") return EnhancementType::ConvexHull;
    if (name == "ellipse") return EnhancementType::Ellipse;
    if (name == "bbox_bezier" || name == "bezier") return EnhancementType::BboxBezier;
    throw Error(ErrorCode::InvalidArgument, "unknown enhancement type '" + name + "'");
}

}  // namespace pasteup
