#include "pasteup/annotations.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace pasteup {

namespace {

using nlohmann::json;

bool parse_region(const json& node, RegionEncoding& out) {
    // exactly one encoding; carrying both is ambiguous and dropped
    if (node.contains("polygon") && node.contains("rle")) return false;
    if (node.contains("polygon")) {
        const auto& poly = node["polygon"];
        if (!poly.is_array()) return false;
        out.is_rle = false;
        out.polygon.clear();
        for (const auto& vertex : poly) {
            if (!vertex.is_array() || vertex.size() != 2 || !vertex[0].is_number() ||
                !vertex[1].is_number()) {
                return false;
            }
            out.polygon.push_back({vertex[0].get<double>(), vertex[1].get<double>()});
        }
        return true;
    }
    if (node.contains("rle")) {
        const auto& rle = node["rle"];
        if (!rle.is_object() || !rle.contains("counts") || !rle["counts"].is_array()) return false;
        out.is_rle = true;
        out.rle_counts.clear();
        for (const auto& count : rle["counts"]) {
            if (!count.is_number_integer() || count.get<std::int64_t>() < 0) return false;
            out.rle_counts.push_back(count.get<std::int64_t>());
        }
        std::string order = "row-major";
        if (rle.contains("order")) {
            if (!rle["order"].is_string()) return false;
            order = rle["order"].get<std::string>();
        }
        if (order == "row-major") {
            out.rle_column_major = false;
        } else if (order == "column-major") {
            out.rle_column_major = true;
        } else {
            return false;
        }
        return true;
    }
    return false;
}

bool vertices_in_frame(const std::vector<DPoint>& polygon, int width, int height) {
    for (const auto& v : polygon) {
        if (v.x < 0.0 || v.x > width || v.y < 0.0 || v.y > height) return false;
    }
    return true;
}

}  // namespace

AnnotationSet parse_annotations(const std::string& text) {
    json root = json::parse(text, nullptr, false);
    if (root.is_discarded() || !root.is_object() || !root.contains("images") ||
        !root.contains("annotations") || !root["images"].is_array() ||
        !root["annotations"].is_array()) {
        throw Error(ErrorCode::SchemaViolation,
                    "annotation file must be an object with images[] and annotations[]");
    }

    AnnotationSet set;
    for (const auto& node : root["images"]) {
        if (!node.is_object() || !node.contains("id") || !node["id"].is_number_integer() ||
            !node.contains("file") || !node["file"].is_string() || !node.contains("width") ||
            !node["width"].is_number_integer() || !node.contains("height") ||
            !node["height"].is_number_integer()) {
            throw Error(ErrorCode::SchemaViolation, "image entry missing id/file/width/height");
        }
        AnnotatedImage image;
        image.id = node["id"].get<std::int64_t>();
        image.file = node["file"].get<std::string>();
        image.width = node["width"].get<int>();
        image.height = node["height"].get<int>();
        if (image.width <= 0 || image.height <= 0) {
            throw Error(ErrorCode::SchemaViolation, "image entry with nonpositive dims");
        }
        set.images.push_back(std::move(image));
    }

    for (const auto& node : root["annotations"]) {
        if (!node.is_object() || !node.contains("image_id") ||
            !node["image_id"].is_number_integer() || !node.contains("class") ||
            !node["class"].is_string()) {
            ++set.dropped;
            continue;
        }
        Annotation ann;
        ann.image_id = node["image_id"].get<std::int64_t>();
        ann.class_label = node["class"].get<std::string>();
        if (!parse_region(node, ann.region)) {
            ++set.dropped;
            continue;
        }
        const AnnotatedImage* owner = nullptr;
        for (const auto& image : set.images) {
            if (image.id == ann.image_id) {
                owner = &image;
                break;
            }
        }
        if (owner == nullptr) {
            ++set.dropped;
            continue;
        }
        if (!ann.region.is_rle &&
            !vertices_in_frame(ann.region.polygon, owner->width, owner->height)) {
            ++set.dropped;
            continue;
        }
        if (node.contains("score")) {
            if (!node["score"].is_number()) {
                ++set.dropped;
                continue;
            }
            ann.score = node["score"].get<double>();
        } else {
            ann.score = std::numeric_limits<double>::quiet_NaN();
        }
        set.annotations.push_back(std::move(ann));
    }
    return set;
}

AnnotationSet load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_annotations(buffer.str());
}

BinaryMask decode_mask(const RegionEncoding& region, int width, int height,
                       int* degenerate_count) {
    if (!region.is_rle) {
        if (region.polygon.size() < 3) {
            if (degenerate_count) ++*degenerate_count;
            return BinaryMask(width, height);
        }
        return fill_polygon_even_odd(region.polygon, width, height);
    }

    std::int64_t total = 0;
    for (const auto count : region.rle_counts) total += count;
    const std::int64_t expected = static_cast<std::int64_t>(width) * height;
    if (total != expected) {
        throw Error(ErrorCode::LengthMismatch,
                    "run lengths sum to " + std::to_string(total) + ", frame has " +
                        std::to_string(expected) + " pixels");
    }

    BinaryMask mask(width, height);
    std::int64_t pos = 0;
    bool value = false;  // first run is background
    for (const auto count : region.rle_counts) {
        if (value) {
            for (std::int64_t i = pos; i < pos + count; ++i) {
                if (region.rle_column_major) {
                    mask.set(static_cast<int>(i / height), static_cast<int>(i % height), true);
                } else {
                    mask.set(static_cast<int>(i % width), static_cast<int>(i / width), true);
                }
            }
        }
        pos += count;
        value = !value;
    }
    return mask;
}

std::vector<std::int64_t> encode_rle(const BinaryMask& mask, bool column_major) {
    std::vector<std::int64_t> counts;
    const std::int64_t total = static_cast<std::int64_t>(mask.width) * mask.height;
    bool current = false;
    std::int64_t run = 0;
    for (std::int64_t i = 0; i < total; ++i) {
        bool bit;
        if (column_major) {
            bit = mask.get(static_cast<int>(i / mask.height), static_cast<int>(i % mask.height));
        } else {
            bit = mask.get(static_cast<int>(i % mask.width), static_cast<int>(i / mask.width));
        }
        if (bit == current) {
            ++run;
        } else {
            counts.push_back(run);
            current = bit;
            run = 1;
        }
    }
    counts.push_back(run);
    return counts;
}

InstanceRecord crop_instance(const Image& source, const BinaryMask& mask, std::string id,
                             std::string class_label, double score) {
    if (source.width != mask.width || source.height != mask.height) {
        throw Error(ErrorCode::DimMismatch, "mask dims differ from source dims");
    }
    const auto bbox = mask.tight_bbox();
    if (!bbox) {
        throw Error(ErrorCode::EmptyMask, "cannot crop an empty mask");
    }
    InstanceRecord record;
    record.id = std::move(id);
    record.class_label = std::move(class_label);
    record.score = score;
    record.area_ratio = static_cast<double>(mask.area()) /
                        (static_cast<double>(source.width) * source.height);
    record.image = Image(bbox->width(), bbox->height(), source.channels);
    record.mask = BinaryMask(bbox->width(), bbox->height());
    for (int y = 0; y < bbox->height(); ++y) {
        for (int x = 0; x < bbox->width(); ++x) {
            for (int c = 0; c < source.channels; ++c) {
                record.image.at(x, y, c) = source.at(bbox->left + x, bbox->top + y, c);
            }
            record.mask.set(x, y, mask.get(bbox->left + x, bbox->top + y));
        }
    }
    return record;
}

}  // namespace pasteup
