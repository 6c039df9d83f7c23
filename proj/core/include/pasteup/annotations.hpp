#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pasteup/image.hpp"
#include "pasteup/morphology.hpp"
#include "pasteup/records.hpp"

namespace pasteup {

/// Region encoding carried by an annotation: either one polygon ring in
/// corner coordinates, or alternating run lengths starting with a
/// background run (row-major or column-major traversal).
struct RegionEncoding {
    bool is_rle = false;
    std::vector<DPoint> polygon;
    std::vector<std::int64_t> rle_counts;
    bool rle_column_major = false;
};

struct AnnotatedImage {
    std::int64_t id = 0;
    std::string file;
    int width = 0;
    int height = 0;
};

struct Annotation {
    std::int64_t image_id = 0;
    std::string class_label;
    RegionEncoding region;
    double score = 0.0;  // NaN when the file carried no score
};

struct AnnotationSet {
    std::vector<AnnotatedImage> images;
    std::vector<Annotation> annotations;
    int dropped = 0;  // malformed regions, dangling image ids, out-of-frame vertices
};

/// Parses the documented JSON annotation schema. Entries that violate
/// per-annotation invariants are dropped and counted; a wrong top-level
/// structure throws SchemaViolation, an unopenable file UnreadableFile.
AnnotationSet load_annotations(const std::filesystem::path& path);
AnnotationSet parse_annotations(const std::string& text);

/// Rasterizes a region onto a width x height frame. Polygons fill by the
/// even-odd rule sampled at pixel centers. Run lengths must sum to
/// width*height (LengthMismatch otherwise). A polygon with fewer than 3
/// vertices yields an empty mask and bumps *degenerate_count if given.
BinaryMask decode_mask(const RegionEncoding& region, int width, int height,
                       int* degenerate_count = nullptr);

/// Inverse of RLE decoding, for round-trip checks. Always starts with a
/// background run (possibly zero-length).
std::vector<std::int64_t> encode_rle(const BinaryMask& mask, bool column_major);

/// Cuts the tight bbox of `mask` out of `source`. The returned record's
/// mask touches all four crop edges; area_ratio is mask area over source
/// frame area. Throws EmptyMask or DimMismatch.
InstanceRecord crop_instance(const Image& source, const BinaryMask& mask, std::string id,
                             std::string class_label, double score);

}  // namespace pasteup
