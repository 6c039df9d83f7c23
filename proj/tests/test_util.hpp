#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "pasteup/image.hpp"
#include "pasteup/rng.hpp"

namespace test_util {

inline pasteup::Image random_image(pasteup::Rng& rng, int w, int h, int channels) {
    pasteup::Image img(w, h, channels);
    for (auto& byte : img.data) {
        byte = static_cast<std::uint8_t>(rng.uniform_index(256));
    }
    return img;
}

inline pasteup::BinaryMask random_mask(pasteup::Rng& rng, int w, int h, double density) {
    pasteup::BinaryMask mask(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            mask.set(x, y, rng.uniform() < density);
        }
    }
    return mask;
}

/// Random mask guaranteed nonempty: a filled rectangle plus noise.
inline pasteup::BinaryMask random_blob(pasteup::Rng& rng, int w, int h) {
    pasteup::BinaryMask mask(w, h);
    const int bw = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(w - 2)));
    const int bh = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(h - 2)));
    const int x0 = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(w - bw + 1)));
    const int y0 = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(h - bh + 1)));
    for (int y = y0; y < y0 + bh; ++y) {
        for (int x = x0; x < x0 + bw; ++x) mask.set(x, y, true);
    }
    for (int i = 0; i < w * h / 10; ++i) {
        const int x = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(w)));
        const int y = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(h)));
        mask.set(x, y, rng.uniform() < 0.7);
    }
    mask.set(x0, y0, true);  // the noise pass may clear rectangle pixels
    return mask;
}

/// Unique scratch directory under the system temp root, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        static std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                (tag + "-" + std::to_string(rd()) + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace test_util
