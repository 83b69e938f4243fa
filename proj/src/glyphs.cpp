#include "cdtk/glyphs.hpp"

#include "cdtk/errors.hpp"

#include <cmath>

namespace cdtk::glyphs {

namespace {

// Classic 5x7 dot-matrix digits. Interior columns all carry ink so that the
// extractor's gap rule (blank run >= scaled gap) can never split a glyph.
constexpr uint8_t kBitmaps[12][kGlyphRows] = {
    // 0
    {0b01110, 0b10001, 0b10011, 0b10101, 0b11001, 0b10001, 0b01110},
    // 1
    {0b00100, 0b01100, 0b00100, 0b00100, 0b00100, 0b00100, 0b01110},
    // 2
    {0b01110, 0b10001, 0b00001, 0b00010, 0b00100, 0b01000, 0b11111},
    // 3
    {0b11111, 0b00010, 0b00100, 0b00010, 0b00001, 0b10001, 0b01110},
    // 4
    {0b00010, 0b00110, 0b01010, 0b10010, 0b11111, 0b00010, 0b00010},
    // 5
    {0b11111, 0b10000, 0b11110, 0b00001, 0b00001, 0b10001, 0b01110},
    // 6
    {0b00110, 0b01000, 0b10000, 0b11110, 0b10001, 0b10001, 0b01110},
    // 7
    {0b11111, 0b00001, 0b00010, 0b00100, 0b01000, 0b01000, 0b01000},
    // 8
    {0b01110, 0b10001, 0b10001, 0b01110, 0b10001, 0b10001, 0b01110},
    // 9
    {0b01110, 0b10001, 0b10001, 0b01111, 0b00001, 0b00010, 0b01100},
    // -
    {0b00000, 0b00000, 0b00000, 0b11111, 0b00000, 0b00000, 0b00000},
    // .
    {0b00000, 0b00000, 0b00000, 0b00000, 0b00000, 0b01100, 0b01100},
};

int glyph_index(char c) {
    if (c >= '0' && c <= '9') {
        return c - '0';
    }
    if (c == '-') {
        return 10;
    }
    if (c == '.') {
        return 11;
    }
    return -1;
}

} // namespace

const uint8_t* bitmap(char c) {
    int index = glyph_index(c);
    if (index < 0) {
        throw Error(ErrorKind::ConfigError, std::string("no glyph for character '") + c + "'");
    }
    return kBitmaps[index];
}

bool ink(char c, int row, int col) {
    return (bitmap(c)[row] >> (kGlyphCols - 1 - col)) & 1;
}

int text_width_px(std::string_view text) {
    if (text.empty()) {
        return 0;
    }
    int cols = static_cast<int>(text.size()) * kGlyphCols +
               (static_cast<int>(text.size()) - 1) * kGapCols;
    return cols * kScale;
}

void draw_text(std::vector<uint8_t>& pixels, int buf_width, int x, int y, std::string_view text) {
    int pen_x = x;
    for (char c : text) {
        for (int row = 0; row < kGlyphRows; ++row) {
            for (int col = 0; col < kGlyphCols; ++col) {
                if (!ink(c, row, col)) {
                    continue;
                }
                for (int dy = 0; dy < kScale; ++dy) {
                    for (int dx = 0; dx < kScale; ++dx) {
                        int px = pen_x + col * kScale + dx;
                        int py = y + row * kScale + dy;
                        pixels[static_cast<std::size_t>(py) * buf_width + px] = 255;
                    }
                }
            }
        }
        pen_x += (kGlyphCols + kGapCols) * kScale;
    }
}

std::string format_value(const std::string& format, double value) {
    if (format == "%d") {
        return std::to_string(std::llround(value));
    }
    if (format == "%.1f") {
        long long tenths = std::llround(value * 10.0);
        if (tenths == 0) {
            return "0.0";
        }
        long long magnitude = tenths < 0 ? -tenths : tenths;
        std::string text = tenths < 0 ? "-" : "";
        text += std::to_string(magnitude / 10);
        text += '.';
        text += static_cast<char>('0' + magnitude % 10);
        return text;
    }
    throw Error(ErrorKind::ConfigError, "unsupported format string '" + format + "'");
}

} // namespace cdtk::glyphs
