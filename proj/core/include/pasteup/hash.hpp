#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

namespace pasteup {

// FNV-1a, 64 bit. Used for content fingerprints in manifests and for the
// deterministic stub score provider. Not cryptographic.
class Fnv64 {
public:
    static constexpr std::uint64_t kOffsetBasis = 0xcbf29ce484222325ULL;
    static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

    Fnv64& update(const void* data, std::size_t size) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            state_ = (state_ ^ bytes[i]) * kPrime;
        }
        return *this;
    }

    Fnv64& update(std::string_view text) { return update(text.data(), text.size()); }

    template <typename T>
    Fnv64& update_value(const T& value) {
        static_assert(std::is_trivially_copyable_v<T>);
        return update(&value, sizeof(value));
    }

    std::uint64_t digest() const noexcept { return state_; }

private:
    std::uint64_t state_ = kOffsetBasis;
};

inline std::uint64_t fnv64(const void* data, std::size_t size) {
    return Fnv64().update(data, size).digest();
}

inline std::uint64_t fnv64(std::string_view text) {
    return fnv64(text.data(), text.size());
}

/// Deterministic pseudo-score in [0,1) derived from an identifier.
inline double hash_unit_interval(std::string_view key) {
    return static_cast<double>(fnv64(key) >> 11) * 0x1.0p-53;
}

std::string to_hex(std::uint64_t value);

}  // namespace pasteup
