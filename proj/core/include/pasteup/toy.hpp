#pragma once

#include <cstdint>
#include <filesystem>

namespace pasteup {

/// Parameters of the bundled synthetic corpus. The defaults satisfy every
/// built-in filter rule: backgrounds are square at exactly the minimum
/// side, instance area ratios land inside the area window, and each class
/// keeps at least one instance after score thresholding.
struct ToyCorpusSpec {
    int backgrounds = 20;
    int sources = 4;  // instance source images, three shapes each
    int bg_size = 512;
    int src_size = 256;
    std::uint64_t seed = 1234;
};

struct ToyCorpusPaths {
    std::filesystem::path root;
    std::filesystem::path instances_json;
    std::filesystem::path backgrounds_json;
};

/// Writes a self-contained corpus under `root`: textured source images with
/// disk / slab / wedge / ring instances (polygon and run-length encodings
/// both exercised), plus textured backgrounds carrying 0..2 annotated
/// existing rectangles. Fully determined by spec.seed.
ToyCorpusPaths write_toy_corpus(const std::filesystem::path& root, const ToyCorpusSpec& spec = {});

}  // namespace pasteup
