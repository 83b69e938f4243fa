#include "cdtk/extract.hpp"

#include "cdtk/errors.hpp"
#include "cdtk/glyphs.hpp"

#include <nlohmann/json.hpp>

#include <cctype>

namespace cdtk::extract {

using nlohmann::json;

std::vector<RegionCrop> segment(const pgm::Image& frame, const display::DisplayModel& model) {
    if (frame.width != model.width || frame.height != model.height) {
        throw Error(ErrorKind::DimensionMismatch,
                    "frame is " + std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                        ", model wants " + std::to_string(model.width) + "x" +
                        std::to_string(model.height));
    }
    std::vector<RegionCrop> crops;
    for (const display::WidgetModel& widget : model.widgets) {
        if (!widget.is_visible) {
            continue;
        }
        RegionCrop crop;
        crop.widget_name = widget.name;
        crop.x = widget.x + 1;
        crop.y = widget.y + 1;
        crop.width = widget.width - 2;
        crop.height = widget.height - 2;
        crop.pixels.reserve(static_cast<std::size_t>(crop.width) * crop.height);
        for (int row = 0; row < crop.height; ++row) {
            const uint8_t* src =
                frame.pixels.data() + static_cast<std::size_t>(crop.y + row) * frame.width + crop.x;
            crop.pixels.insert(crop.pixels.end(), src, src + crop.width);
        }
        crops.push_back(std::move(crop));
    }
    return crops;
}

namespace {

constexpr int kGapPx = glyphs::kGapCols * glyphs::kScale;

struct Template {
    char character;
    int width = 0;                 // ink columns after trimming
    int left = 0;                  // first ink column in the untrimmed raster
    std::vector<uint8_t> pixels;   // width x kTextHeightPx, 0/1
};

std::vector<Template> build_templates() {
    std::vector<Template> templates;
    for (const char* c = glyphs::kCharset; *c; ++c) {
        int left = glyphs::kGlyphCols, right = -1;
        for (int col = 0; col < glyphs::kGlyphCols; ++col) {
            for (int row = 0; row < glyphs::kGlyphRows; ++row) {
                if (glyphs::ink(*c, row, col)) {
                    left = std::min(left, col);
                    right = std::max(right, col);
                }
            }
        }
        Template tmpl;
        tmpl.character = *c;
        tmpl.left = left * glyphs::kScale;
        tmpl.width = (right - left + 1) * glyphs::kScale;
        tmpl.pixels.assign(static_cast<std::size_t>(tmpl.width) * glyphs::kTextHeightPx, 0);
        for (int row = 0; row < glyphs::kTextHeightPx; ++row) {
            for (int col = 0; col < tmpl.width; ++col) {
                bool on = glyphs::ink(*c, row / glyphs::kScale, left + col / glyphs::kScale);
                tmpl.pixels[static_cast<std::size_t>(row) * tmpl.width + col] = on ? 1 : 0;
            }
        }
        templates.push_back(std::move(tmpl));
    }
    return templates;
}

const std::vector<Template>& templates() {
    static const std::vector<Template> kTemplates = build_templates();
    return kTemplates;
}

} // namespace

std::string ocr(const RegionCrop& crop) {
    auto ink_at = [&crop](int x, int y) {
        return crop.pixels[static_cast<std::size_t>(y) * crop.width + x] >= 128;
    };

    // Glyphs share a common baseline, so the topmost ink row anchors the
    // 7x2-row band every cell is compared within.
    int band_top = -1;
    for (int y = 0; y < crop.height && band_top < 0; ++y) {
        for (int x = 0; x < crop.width; ++x) {
            if (ink_at(x, y)) {
                band_top = y;
                break;
            }
        }
    }
    if (band_top < 0) {
        throw Error(ErrorKind::NoGlyphs, "blank region for widget '" + crop.widget_name + "'");
    }

    std::vector<bool> column_has_ink(crop.width, false);
    for (int x = 0; x < crop.width; ++x) {
        for (int y = 0; y < crop.height; ++y) {
            if (ink_at(x, y)) {
                column_has_ink[x] = true;
                break;
            }
        }
    }

    // Cells are maximal ink-column runs; blank runs shorter than the scaled
    // gap stay inside their cell.
    std::vector<std::pair<int, int>> cells;   // [first, last] inclusive
    int x = 0;
    while (x < crop.width) {
        if (!column_has_ink[x]) {
            x++;
            continue;
        }
        int first = x;
        int last = x;
        int scan = x + 1;
        while (scan < crop.width) {
            if (column_has_ink[scan]) {
                last = scan;
                scan++;
                continue;
            }
            int blank_end = scan;
            while (blank_end < crop.width && !column_has_ink[blank_end]) {
                blank_end++;
            }
            if (blank_end - scan >= kGapPx || blank_end == crop.width) {
                break;
            }
            scan = blank_end;
        }
        cells.emplace_back(first, last);
        x = last + 1;
    }

    std::string text;
    for (const auto& [first, last] : cells) {
        int cell_width = last - first + 1;
        const Template* match = nullptr;
        for (const Template& tmpl : templates()) {
            if (tmpl.width != cell_width) {
                continue;
            }
            bool same = true;
            for (int row = 0; row < glyphs::kTextHeightPx && same; ++row) {
                int y = band_top + row;
                for (int col = 0; col < cell_width && same; ++col) {
                    bool actual = y < crop.height && ink_at(first + col, y);
                    bool expected = tmpl.pixels[static_cast<std::size_t>(row) * tmpl.width + col];
                    same = actual == expected;
                }
            }
            if (same) {
                match = &tmpl;
                break;
            }
        }
        if (!match) {
            throw Error(ErrorKind::UnrecognizedGlyph,
                        "cell at columns " + std::to_string(first) + ".." + std::to_string(last) +
                            " in widget '" + crop.widget_name + "' matches no template");
        }
        text.push_back(match->character);
    }
    return text;
}

namespace {

bool integer_text(const std::string& text) {
    std::size_t i = text.size() > 1 && text[0] == '-' ? 1 : 0;
    if (i >= text.size()) {
        return false;
    }
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            return false;
        }
    }
    return true;
}

} // namespace

Observation decode(const std::string& raw_text, const display::WidgetModel& widget) {
    Observation obs;
    obs.widget_name = widget.name;
    obs.target_property = widget.target_property;
    obs.raw_text = raw_text;
    if (widget.format == "%d") {
        if (!integer_text(raw_text)) {
            throw Error(ErrorKind::FormatMismatch,
                        "'" + raw_text + "' is not an integer under %d");
        }
        obs.value = ocl::TypedValue::of_int(std::stoll(raw_text));
        return obs;
    }
    if (widget.format == "%.1f") {
        std::size_t dot = raw_text.find('.');
        if (dot == std::string::npos || dot + 2 != raw_text.size() ||
            !std::isdigit(static_cast<unsigned char>(raw_text[dot + 1])) ||
            !integer_text(raw_text.substr(0, dot))) {
            throw Error(ErrorKind::FormatMismatch,
                        "'" + raw_text + "' is not a one-decimal value under %.1f");
        }
        // Decode through the scaled integer so the value is bit-identical to
        // what the renderer quantized, and "-0.0" lands on plain zero.
        bool negative = raw_text[0] == '-';
        long long whole = std::stoll(raw_text.substr(negative ? 1 : 0, dot - (negative ? 1 : 0)));
        long long tenths = whole * 10 + (raw_text[dot + 1] - '0');
        if (negative) {
            tenths = -tenths;
        }
        obs.value = ocl::TypedValue::of_real(static_cast<double>(tenths) / 10.0);
        return obs;
    }
    throw Error(ErrorKind::FormatMismatch, "unsupported format '" + widget.format + "'");
}

std::vector<Observation> extract_frame(const pgm::Image& frame,
                                       const display::DisplayModel& model,
                                       long long seq,
                                       const std::string& state) {
    std::vector<Observation> observations;
    for (const RegionCrop& crop : segment(frame, model)) {
        const display::WidgetModel* widget = model.widget_named(crop.widget_name);
        Observation obs;
        std::string text;
        try {
            text = ocr(crop);
            obs = decode(text, *widget);
        } catch (const Error& e) {
            obs = Observation{};
            obs.widget_name = widget->name;
            obs.target_property = widget->target_property;
            obs.raw_text = text;
            obs.confidence = Confidence::Rejected;
            obs.error = e.what();
        }
        obs.seq = seq;
        obs.state = state;
        observations.push_back(std::move(obs));
    }
    return observations;
}

std::string to_jsonl(const std::vector<Observation>& observations) {
    std::string out;
    for (const Observation& obs : observations) {
        json line;
        line["seq"] = obs.seq;
        line["state"] = obs.state;
        line["widget"] = obs.widget_name;
        line["property"] = obs.target_property;
        line["raw"] = obs.raw_text;
        if (obs.confidence == Confidence::Exact) {
            if (obs.value->type == ocl::TypedValue::Type::Int) {
                line["value"] = obs.value->int_value;
            } else {
                line["value"] = obs.value->real_value;
            }
        } else {
            line["value"] = nullptr;
            line["error"] = obs.error;
        }
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::vector<Observation> observations_from_jsonl(std::string_view bytes) {
    std::vector<Observation> observations;
    std::size_t start = 0;
    while (start < bytes.size()) {
        std::size_t end = bytes.find('\n', start);
        if (end == std::string_view::npos) {
            end = bytes.size();
        }
        std::string_view line = bytes.substr(start, end - start);
        start = end + 1;
        if (line.empty()) {
            continue;
        }
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::SyntaxError, std::string("observation line: ") + e.what());
        }
        Observation obs;
        obs.seq = doc.at("seq").get<long long>();
        obs.state = doc.at("state").get<std::string>();
        obs.widget_name = doc.at("widget").get<std::string>();
        obs.target_property = doc.at("property").get<std::string>();
        obs.raw_text = doc.at("raw").get<std::string>();
        const json& value = doc.at("value");
        if (value.is_null()) {
            obs.confidence = Confidence::Rejected;
            obs.error = doc.value("error", "");
        } else if (value.is_number_integer()) {
            obs.value = ocl::TypedValue::of_int(value.get<long long>());
        } else {
            obs.value = ocl::TypedValue::of_real(value.get<double>());
        }
        observations.push_back(std::move(obs));
    }
    return observations;
}

} // namespace cdtk::extract
