#include "pasteup/png_io.hpp"

#include <png.h>
#include <zlib.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <vector>

namespace pasteup {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct ReadState {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~ReadState() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct WriteState {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~WriteState() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

void vector_sink(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void vector_flush(png_structp) {}

void make_encoder(WriteState& s, std::vector<std::uint8_t>& out) {
    s.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (s.png) s.info = png_create_info_struct(s.png);
    if (!s.png || !s.info) {
        throw Error(ErrorCode::WriteFailure, "png encoder allocation failed");
    }
    png_set_write_fn(s.png, &out, vector_sink, vector_flush);
    // Fixed encoder settings keep output bytes reproducible across runs. RLE
    // deflate trades a little size for a lot of speed.
    png_set_compression_level(s.png, 1);
    png_set_compression_strategy(s.png, Z_RLE);
}

}  // namespace

Image read_png(const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.string().c_str(), "rb"));
    if (!file) {
        throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
    }
    ReadState s;
    s.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (s.png) s.info = png_create_info_struct(s.png);
    if (!s.png || !s.info) {
        throw Error(ErrorCode::UnreadableFile, "png decoder allocation failed");
    }
    // libpng reports errors by longjmp back to this frame; rethrow as our own.
    if (setjmp(png_jmpbuf(s.png))) {
        throw Error(ErrorCode::UnreadableFile, "malformed png: " + path.string());
    }
    png_init_io(s.png, file.get());
    png_read_info(s.png, s.info);

    const png_byte color_type = png_get_color_type(s.png, s.info);
    const png_byte bit_depth = png_get_bit_depth(s.png, s.info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(s.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(s.png);
    if (bit_depth == 16) png_set_strip_16(s.png);
    if (png_get_valid(s.png, s.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(s.png);
    if ((color_type & PNG_COLOR_MASK_ALPHA) || png_get_valid(s.png, s.info, PNG_INFO_tRNS)) {
        png_set_strip_alpha(s.png);
    }
    png_read_update_info(s.png, s.info);

    const int width = static_cast<int>(png_get_image_width(s.png, s.info));
    const int height = static_cast<int>(png_get_image_height(s.png, s.info));
    const int channels = static_cast<int>(png_get_channels(s.png, s.info));
    if (channels != 1 && channels != 3) {
        throw Error(ErrorCode::UnreadableFile,
                    "unsupported channel count " + std::to_string(channels) + ": " + path.string());
    }

    Image image(width, height, channels);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y) {
        rows[static_cast<std::size_t>(y)] = image.data.data() + static_cast<std::size_t>(y) * stride;
    }
    png_read_image(s.png, rows.data());
    png_read_end(s.png, nullptr);
    return image;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(image.width) * image.height * image.channels / 2 + 1024);
    WriteState s;
    make_encoder(s, out);
    if (setjmp(png_jmpbuf(s.png))) {
        throw Error(ErrorCode::WriteFailure, "png encode failed");
    }
    png_set_filter(s.png, 0, PNG_FILTER_SUB);
    png_set_IHDR(s.png, s.info, static_cast<png_uint_32>(image.width),
                 static_cast<png_uint_32>(image.height), 8,
                 image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(s.png, s.info);

    const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
    for (int y = 0; y < image.height; ++y) {
        png_write_row(s.png, const_cast<png_bytep>(image.data.data() +
                                                   static_cast<std::size_t>(y) * stride));
    }
    png_write_end(s.png, s.info);
    return out;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    FilePtr file(std::fopen(path.string().c_str(), "wb"));
    if (!file) {
        throw Error(ErrorCode::WriteFailure, "cannot create " + path.string());
    }
    if (std::fwrite(bytes.data(), 1, bytes.size(), file.get()) != bytes.size() ||
        std::fflush(file.get()) != 0) {
        throw Error(ErrorCode::WriteFailure, "short write: " + path.string());
    }
}

void write_png(const std::filesystem::path& path, const Image& image) {
    write_file(path, encode_png(image));
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
    const Image image = read_png(path);
    BinaryMask mask(image.width, image.height);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            mask.set(x, y, image.at(x, y, 0) != 0);
        }
    }
    return mask;
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(mask.width) * mask.height / 16 + 1024);
    WriteState s;
    make_encoder(s, out);
    if (setjmp(png_jmpbuf(s.png))) {
        throw Error(ErrorCode::WriteFailure, "png encode failed: " + path.string());
    }
    png_set_IHDR(s.png, s.info, static_cast<png_uint_32>(mask.width),
                 static_cast<png_uint_32>(mask.height), 1, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(s.png, s.info);
    // mask.bits holds one 0/1 byte per pixel; libpng packs rows to 1-bit.
    png_set_packing(s.png);
    for (int y = 0; y < mask.height; ++y) {
        png_write_row(s.png, const_cast<png_bytep>(mask.bits.data() +
                                                   static_cast<std::size_t>(y) * mask.width));
    }
    png_write_end(s.png, s.info);
    write_file(path, out);
}

}  // namespace pasteup
