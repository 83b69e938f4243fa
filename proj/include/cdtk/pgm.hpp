#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::pgm {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;   // row-major

    bool operator==(const Image&) const = default;
};

/// Binary "P5" with maxval 255.
std::string encode(const Image& image);
Image decode(std::string_view bytes);

void write_file(const std::string& path, const Image& image);
Image read_file(const std::string& path);

} // namespace cdtk::pgm
