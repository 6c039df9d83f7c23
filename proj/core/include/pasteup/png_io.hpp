#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "pasteup/image.hpp"

namespace pasteup {

/// Decodes an 8-bit grayscale or RGB image. Palette and low-bit-depth files
/// are expanded, 16-bit channels are narrowed to 8, alpha is stripped.
/// Throws UnreadableFile on missing or malformed input.
Image read_png(const std::filesystem::path& path);

/// Encodes 8-bit grayscale or RGB. The compression level and row filter are
/// fixed so identical pixels always produce identical bytes.
std::vector<std::uint8_t> encode_png(const Image& image);

/// encode_png written to disk. Throws WriteFailure when the file cannot be
/// produced.
void write_png(const std::filesystem::path& path, const Image& image);

/// Writes an already-encoded file. Throws WriteFailure on any short write.
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

/// Mask files are 1-bit grayscale PNGs. Reading thresholds the first channel
/// of any grayscale/RGB PNG (nonzero means true).
BinaryMask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace pasteup
