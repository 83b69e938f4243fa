#include "cdtk/pgm.hpp"

#include "cdtk/errors.hpp"

#include <cctype>
#include <fstream>

namespace cdtk::pgm {

std::string encode(const Image& image) {
    if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
        throw Error(ErrorKind::DimensionMismatch,
                    "pixel buffer does not match " + std::to_string(image.width) + "x" +
                        std::to_string(image.height));
    }
    std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                      "\n255\n";
    out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
    return out;
}

namespace {

// Reads one whitespace/comment-delimited PGM header token.
int header_int(std::string_view bytes, std::size_t& pos) {
    while (pos < bytes.size()) {
        if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
            pos++;
        } else if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') {
                pos++;
            }
        } else {
            break;
        }
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        throw Error(ErrorKind::SyntaxError, "malformed PGM header");
    }
    int value = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
        value = value * 10 + (bytes[pos] - '0');
        pos++;
    }
    return value;
}

} // namespace

Image decode(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw Error(ErrorKind::SyntaxError, "not a binary PGM (missing P5 magic)");
    }
    std::size_t pos = 2;
    Image image;
    image.width = header_int(bytes, pos);
    image.height = header_int(bytes, pos);
    int maxval = header_int(bytes, pos);
    if (image.width <= 0 || image.height <= 0 || maxval != 255) {
        throw Error(ErrorKind::SyntaxError, "unsupported PGM dimensions or maxval");
    }
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw Error(ErrorKind::SyntaxError, "malformed PGM header");
    }
    pos++;   // single whitespace byte separates header from raster
    std::size_t expected = static_cast<std::size_t>(image.width) * image.height;
    if (bytes.size() - pos != expected) {
        throw Error(ErrorKind::SyntaxError, "PGM raster size mismatch");
    }
    image.pixels.assign(bytes.begin() + pos, bytes.end());
    return image;
}

void write_file(const std::string& path, const Image& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::StorageError, "cannot open '" + path + "' for writing");
    }
    std::string bytes = encode(image);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(ErrorKind::StorageError, "short write to '" + path + "'");
    }
}

Image read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode(bytes);
}

} // namespace cdtk::pgm
