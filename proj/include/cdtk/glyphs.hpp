#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::glyphs {

inline constexpr int kGlyphCols = 5;
inline constexpr int kGlyphRows = 7;
inline constexpr int kScale = 2;
inline constexpr int kGapCols = 1;   // inter-glyph gap, in unscaled columns

inline constexpr char kCharset[] = "0123456789-.";

/// Row-major 5x7 bitmap; row r, column c is bit (1 << (kGlyphCols - 1 - c)).
const uint8_t* bitmap(char c);

bool ink(char c, int row, int col);

/// Width of the rendered text in pixels at kScale, gaps included.
int text_width_px(std::string_view text);

inline constexpr int kTextHeightPx = kGlyphRows * kScale;

/// Stamps `text` into a row-major 8-bit buffer at intensity 255, top-left at
/// (x, y). The caller guarantees the text fits.
void draw_text(std::vector<uint8_t>& pixels, int buf_width, int x, int y, std::string_view text);

/// "%d": nearest integer, halves away from zero. "%.1f": one decimal, same
/// rounding, "-0.0" normalized to "0.0".
std::string format_value(const std::string& format, double value);

} // namespace cdtk::glyphs
