#include "pasteup/toy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pasteup/annotations.hpp"
#include "pasteup/hash.hpp"
#include "pasteup/morphology.hpp"
#include "pasteup/png_io.hpp"
#include "pasteup/rng.hpp"

namespace pasteup {

namespace {

using nlohmann::ordered_json;

struct Rgb {
    int r, g, b;
};

constexpr Rgb kPalette[6] = {{220, 60, 60}, {60, 180, 75},  {65, 105, 225},
                             {240, 160, 40}, {150, 80, 200}, {70, 200, 200}};

std::string zero_pad(int value, int digits) {
    std::string s = std::to_string(value);
    while (static_cast<int>(s.size()) < digits) s.insert(s.begin(), '0');
    return s;
}

void paint_mask(Image& image, const BinaryMask& mask, Rgb color) {
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (!mask.get(x, y)) continue;
            const int wobble = ((x * 13 + y * 7) & 15) - 8;
            image.at(x, y, 0) = static_cast<std::uint8_t>(std::clamp(color.r + wobble, 0, 255));
            image.at(x, y, 1) = static_cast<std::uint8_t>(std::clamp(color.g + wobble, 0, 255));
            image.at(x, y, 2) = static_cast<std::uint8_t>(std::clamp(color.b + wobble, 0, 255));
        }
    }
}

ordered_json rle_json(const BinaryMask& mask) {
    ordered_json rle;
    rle["counts"] = encode_rle(mask, /*column_major=*/false);
    rle["order"] = "row-major";
    return rle;
}

ordered_json polygon_json(const std::vector<DPoint>& polygon) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : polygon) arr.push_back({p.x, p.y});
    return arr;
}

}  // namespace

ToyCorpusPaths write_toy_corpus(const std::filesystem::path& root, const ToyCorpusSpec& spec) {
    namespace fs = std::filesystem;
    fs::create_directories(root / "sources");
    fs::create_directories(root / "bgs");

    const int src_size = spec.src_size;
    const double src_area = static_cast<double>(src_size) * src_size;

    ordered_json instances_doc;
    instances_doc["images"] = ordered_json::array();
    instances_doc["annotations"] = ordered_json::array();

    int shape_counter = 0;
    for (int s = 0; s < spec.sources; ++s) {
        // texture phase derived from the corpus seed, so different seeds give
        // different pixel content (and therefore different fingerprints)
        const std::uint64_t phase = derive_sample_seed(spec.seed, static_cast<std::uint64_t>(s));
        const int p0 = static_cast<int>(phase & 0xFF);
        const int p1 = static_cast<int>((phase >> 8) & 0xFF);
        const int p2 = static_cast<int>((phase >> 16) & 0xFF);
        Image source(src_size, src_size, 3);
        for (int y = 0; y < src_size; ++y) {
            for (int x = 0; x < src_size; ++x) {
                source.at(x, y, 0) = static_cast<std::uint8_t>((x * 3 + y * 5 + s * 37 + p0) & 0xFF);
                source.at(x, y, 1) = static_cast<std::uint8_t>((x * 5 + y * 3 + s * 53 + p1) & 0xFF);
                source.at(x, y, 2) =
                    static_cast<std::uint8_t>((((x * 2) ^ (y * 2)) + s * 71 + p2) & 0xFF);
            }
        }

        const int cx_slots[3] = {src_size / 4, 3 * src_size / 4, src_size / 2};
        const int cy_slots[3] = {src_size / 4, src_size / 4, 3 * src_size / 4};
        for (int slot = 0; slot < 3; ++slot, ++shape_counter) {
            const int cx = cx_slots[slot];
            const int cy = cy_slots[slot];
            // per-source jitter keeps every class's area-ratio variance
            // nonzero, so scale sampling stays genuinely stochastic
            const double ratio = 0.06 + 0.02 * (shape_counter % 4) + 0.004 * (s % 3);
            const int kind = shape_counter % 4;
            const Rgb color = kPalette[shape_counter % 6];

            ordered_json ann;
            ann["image_id"] = s;
            BinaryMask mask(src_size, src_size);
            if (kind == 0) {  // disk, run-length encoded
                const int r = static_cast<int>(std::floor(std::sqrt(ratio * src_area / 3.14159265)));
                for (int y = 0; y < src_size; ++y) {
                    for (int x = 0; x < src_size; ++x) {
                        const int dx = x - cx, dy = y - cy;
                        if (dx * dx + dy * dy <= r * r) mask.set(x, y, true);
                    }
                }
                ann["class"] = "disk";
                ann["rle"] = rle_json(mask);
            } else if (kind == 1) {  // axis-aligned slab, polygon encoded
                const int w = static_cast<int>(std::floor(std::sqrt(2.0 * ratio) * src_size));
                const int h = w / 2;
                const std::vector<DPoint> poly = {
                    {static_cast<double>(cx - w / 2), static_cast<double>(cy - h / 2)},
                    {static_cast<double>(cx + w / 2), static_cast<double>(cy - h / 2)},
                    {static_cast<double>(cx + w / 2), static_cast<double>(cy + h / 2)},
                    {static_cast<double>(cx - w / 2), static_cast<double>(cy + h / 2)}};
                mask = fill_polygon_even_odd(poly, src_size, src_size);
                ann["class"] = "slab";
                ann["polygon"] = polygon_json(poly);
            } else if (kind == 2) {  // triangle, polygon encoded
                const int r = static_cast<int>(std::floor(std::sqrt(ratio * src_area / 2.0)));
                const std::vector<DPoint> poly = {
                    {static_cast<double>(cx), static_cast<double>(cy - r)},
                    {static_cast<double>(cx + r), static_cast<double>(cy + r)},
                    {static_cast<double>(cx - r), static_cast<double>(cy + r)}};
                mask = fill_polygon_even_odd(poly, src_size, src_size);
                ann["class"] = "wedge";
                ann["polygon"] = polygon_json(poly);
            } else {  // ring, run-length encoded
                const int r = static_cast<int>(
                    std::floor(std::sqrt(ratio * src_area / (3.14159265 * 0.6975))));
                const int inner = static_cast<int>(std::floor(0.55 * r));
                for (int y = 0; y < src_size; ++y) {
                    for (int x = 0; x < src_size; ++x) {
                        const int dx = x - cx, dy = y - cy;
                        const int d2 = dx * dx + dy * dy;
                        if (d2 <= r * r && d2 > inner * inner) mask.set(x, y, true);
                    }
                }
                ann["class"] = "ring";
                ann["rle"] = rle_json(mask);
            }
            paint_mask(source, mask, color);
            ann["score"] =
                0.15 + 0.2 * hash_unit_interval("toy-score-" + std::to_string(shape_counter));
            instances_doc["annotations"].push_back(std::move(ann));
        }

        const std::string file = "sources/src" + zero_pad(s, 3) + ".png";
        write_png(root / file, source);
        instances_doc["images"].push_back(
            {{"id", s}, {"file", file}, {"width", src_size}, {"height", src_size}});
    }

    ordered_json backgrounds_doc;
    backgrounds_doc["images"] = ordered_json::array();
    backgrounds_doc["annotations"] = ordered_json::array();

    const int bg_size = spec.bg_size;
    for (int b = 0; b < spec.backgrounds; ++b) {
        const std::uint64_t phase =
            derive_sample_seed(spec.seed, 2000 + static_cast<std::uint64_t>(b));
        const int p0 = static_cast<int>(phase & 0xFF);
        const int p1 = static_cast<int>((phase >> 8) & 0xFF);
        const int p2 = static_cast<int>((phase >> 16) & 0xFF);
        Image bg(bg_size, bg_size, 3);
        for (int y = 0; y < bg_size; ++y) {
            for (int x = 0; x < bg_size; ++x) {
                bg.at(x, y, 0) = static_cast<std::uint8_t>((x * 2 + y + b * 17 + p0) & 0xFF);
                bg.at(x, y, 1) = static_cast<std::uint8_t>((x + y * 2 + b * 29 + p1) & 0xFF);
                bg.at(x, y, 2) =
                    static_cast<std::uint8_t>((((x >> 1) ^ (y >> 1)) + b * 43 + p2) & 0xFF);
            }
        }

        Rng rng(derive_sample_seed(spec.seed, 1000 + static_cast<std::uint64_t>(b)));
        const int existing = b % 3;
        for (int k = 0; k < existing; ++k) {
            const int w = 60 + static_cast<int>(rng.uniform_index(61));
            const int h = 60 + static_cast<int>(rng.uniform_index(61));
            const int left = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(bg_size - w)));
            const int top = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(bg_size - h)));

            BinaryMask mask(bg_size, bg_size);
            for (int y = top; y < top + h; ++y) {
                for (int x = left; x < left + w; ++x) mask.set(x, y, true);
            }
            paint_mask(bg, mask, kPalette[(b + k) % 6]);

            ordered_json ann;
            ann["image_id"] = b;
            ann["class"] = "block";
            if ((b + k) % 2 == 0) {
                const std::vector<DPoint> poly = {
                    {static_cast<double>(left), static_cast<double>(top)},
                    {static_cast<double>(left + w), static_cast<double>(top)},
                    {static_cast<double>(left + w), static_cast<double>(top + h)},
                    {static_cast<double>(left), static_cast<double>(top + h)}};
                ann["polygon"] = polygon_json(poly);
            } else {
                ann["rle"] = rle_json(mask);
            }
            backgrounds_doc["annotations"].push_back(std::move(ann));
        }

        const std::string file = "bgs/bg" + zero_pad(b, 3) + ".png";
        write_png(root / file, bg);
        backgrounds_doc["images"].push_back(
            {{"id", b}, {"file", file}, {"width", bg_size}, {"height", bg_size}});
    }

    ToyCorpusPaths paths;
    paths.root = root;
    paths.instances_json = root / "instances.json";
    paths.backgrounds_json = root / "backgrounds.json";
    {
        std::ofstream out(paths.instances_json, std::ios::binary);
        if (!out) throw Error(ErrorCode::WriteFailure, "cannot create " + paths.instances_json.string());
        out << instances_doc.dump(2) << "\n";
    }
    {
        std::ofstream out(paths.backgrounds_json, std::ios::binary);
        if (!out) throw Error(ErrorCode::WriteFailure, "cannot create " + paths.backgrounds_json.string());
        out << backgrounds_doc.dump(2) << "\n";
    }
    return paths;
}

}  // namespace pasteup
