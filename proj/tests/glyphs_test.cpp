#include "cdtk/glyphs.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cstring>

using namespace cdtk;

TEST_CASE("every charset glyph has a five-by-seven bitmap with contiguous ink columns") {
    for (const char* p = glyphs::kCharset; *p; ++p) {
        const uint8_t* rows = glyphs::bitmap(*p);
        REQUIRE(rows != nullptr);
        int first_col = glyphs::kGlyphCols;
        int last_col = -1;
        bool any = false;
        for (int r = 0; r < glyphs::kGlyphRows; ++r) {
            CHECK((rows[r] & ~0x1f) == 0);   // only five column bits
            for (int c = 0; c < glyphs::kGlyphCols; ++c) {
                if (glyphs::ink(*p, r, c)) {
                    any = true;
                    first_col = std::min(first_col, c);
                    last_col = std::max(last_col, c);
                }
            }
        }
        REQUIRE(any);
        // No glyph may contain an internal blank column, or segmentation
        // would split it into two cells.
        for (int c = first_col; c <= last_col; ++c) {
            bool ink_somewhere = false;
            for (int r = 0; r < glyphs::kGlyphRows; ++r) {
                ink_somewhere = ink_somewhere || glyphs::ink(*p, r, c);
            }
            CHECK(ink_somewhere);
        }
    }
}

TEST_CASE("spot-check glyph rows against the table") {
    // '1': narrow stem with serifs.
    const uint8_t* one = glyphs::bitmap('1');
    CHECK(one[0] == 0b00100);
    CHECK(one[1] == 0b01100);
    CHECK(one[6] == 0b01110);
    // '-': a single mid bar; '.': a low dot.
    CHECK(glyphs::bitmap('-')[3] == 0b11111);
    CHECK(glyphs::bitmap('-')[0] == 0);
    CHECK(glyphs::bitmap('.')[5] == 0b01100);
    CHECK(glyphs::bitmap('8')[3] == 0b01110);
    check_error([] { glyphs::bitmap(' '); }, ErrorKind::ConfigError);
}

TEST_CASE("text width accounts for scale and inter-glyph gaps") {
    // One glyph: 5 columns at scale 2. Each further glyph adds a 1-column gap.
    CHECK(glyphs::text_width_px("7") == 10);
    CHECK(glyphs::text_width_px("42") == 22);
    CHECK(glyphs::text_width_px("123") == 34);
    CHECK(glyphs::text_width_px("-29.9") == 58);
    CHECK(glyphs::text_width_px("") == 0);
    CHECK(glyphs::kTextHeightPx == 14);
}

TEST_CASE("draw_text stamps scaled glyphs at the given origin") {
    std::vector<uint8_t> buffer(30 * 20, 0);
    glyphs::draw_text(buffer, 30, 4, 3, "1");
    // Row 0 of '1' is 00100: ink starts at glyph column 2 -> pixel x = 4 + 2*2.
    CHECK(buffer[3 * 30 + 8] == 255);
    CHECK(buffer[3 * 30 + 9] == 255);   // scale doubles the column
    CHECK(buffer[4 * 30 + 8] == 255);   // and the row
    CHECK(buffer[3 * 30 + 7] == 0);
    CHECK(buffer[3 * 30 + 10] == 0);
    // Bottom row of '1' is 01110: pixels x = 6..11 at y = 3 + 6*2.
    CHECK(buffer[15 * 30 + 6] == 255);
    CHECK(buffer[15 * 30 + 11] == 255);
    CHECK(buffer[15 * 30 + 5] == 0);
    CHECK(buffer[15 * 30 + 12] == 0);
}

TEST_CASE("format_value rounds %d to the nearest integer, halves away from zero") {
    CHECK(glyphs::format_value("%d", 42.0) == "42");
    CHECK(glyphs::format_value("%d", -7.0) == "-7");
    CHECK(glyphs::format_value("%d", 0.0) == "0");
    CHECK(glyphs::format_value("%d", 112.5) == "113");
    CHECK(glyphs::format_value("%d", -112.5) == "-113");
    CHECK(glyphs::format_value("%d", 0.49) == "0");
    CHECK(glyphs::format_value("%d", -0.49) == "0");
}

TEST_CASE("format_value renders %.1f with one decimal and no negative zero") {
    CHECK(glyphs::format_value("%.1f", 29.9) == "29.9");
    CHECK(glyphs::format_value("%.1f", -30.0) == "-30.0");
    CHECK(glyphs::format_value("%.1f", 0.0) == "0.0");
    CHECK(glyphs::format_value("%.1f", -0.04) == "0.0");
    CHECK(glyphs::format_value("%.1f", 0.05) == "0.1");
    CHECK(glyphs::format_value("%.1f", -0.05) == "-0.1");
    CHECK(glyphs::format_value("%.1f", 47.0) == "47.0");
    CHECK(glyphs::format_value("%.1f", 999.94) == "999.9");
    CHECK(glyphs::format_value("%.1f", -999.95) == "-1000.0");
}

TEST_CASE("format_value rejects unsupported formats") {
    check_error([] { glyphs::format_value("%04d", 1.0); }, ErrorKind::ConfigError);
    check_error([] { glyphs::format_value("%.2f", 1.0); }, ErrorKind::ConfigError);
    check_error([] { glyphs::format_value("", 1.0); }, ErrorKind::ConfigError);
}
