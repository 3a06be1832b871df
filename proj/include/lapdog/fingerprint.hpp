#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace lapdog {

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string to_hex(std::uint64_t v);

// FNV-1a over the raw file bytes. Throws if the file cannot be read.
std::uint64_t file_fingerprint(const std::string &path);

} // namespace lapdog
