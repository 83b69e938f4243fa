#include "cdtk/render.hpp"

#include "cdtk/errors.hpp"
#include "cdtk/glyphs.hpp"

namespace cdtk::render {

namespace {

bool regions_overlap(const display::WidgetModel& a, const display::WidgetModel& b) {
    return a.x < b.x + b.width && b.x < a.x + a.width && a.y < b.y + b.height &&
           b.y < a.y + a.height;
}

} // namespace

Frame render_frame(const display::DisplayModel& model, const flightsim::Sample& sample) {
    // The model invariant already guarantees disjoint regions; re-checking here
    // protects against hand-built models bypassing generate_model.
    for (std::size_t i = 0; i < model.widgets.size(); ++i) {
        for (std::size_t j = i + 1; j < model.widgets.size(); ++j) {
            if (regions_overlap(model.widgets[i], model.widgets[j])) {
                throw Error(ErrorKind::OverlappingWidgets,
                            "'" + model.widgets[i].name + "' and '" + model.widgets[j].name + "'");
            }
        }
    }

    Frame frame;
    frame.width = model.width;
    frame.height = model.height;
    frame.state = sample.state;
    frame.t_sec = sample.t_sec;
    frame.pixels.assign(static_cast<std::size_t>(model.width) * model.height, 0);

    for (const display::WidgetModel& widget : model.widgets) {
        if (!widget.is_visible) {
            continue;
        }
        auto it = sample.displayed_values.find(widget.target_property);
        if (it == sample.displayed_values.end()) {
            throw Error(ErrorKind::MissingValue,
                        "sample lacks '" + widget.target_property + "' for widget '" +
                            widget.name + "'");
        }
        std::string text = glyphs::format_value(widget.format, it->second);
        // Text starts 2 pixels inside the interior and must not touch the
        // border, so it has width-4 columns and height-4 rows to work with.
        if (3 + glyphs::text_width_px(text) > widget.width - 1 ||
            3 + glyphs::kTextHeightPx > widget.height - 1) {
            throw Error(ErrorKind::TextOverflow,
                        "'" + text + "' does not fit widget '" + widget.name + "'");
        }

        auto at = [&frame](int x, int y) -> uint8_t& {
            return frame.pixels[static_cast<std::size_t>(y) * frame.width + x];
        };
        for (int x = widget.x; x < widget.x + widget.width; ++x) {
            at(x, widget.y) = 255;
            at(x, widget.y + widget.height - 1) = 255;
        }
        for (int y = widget.y; y < widget.y + widget.height; ++y) {
            at(widget.x, y) = 255;
            at(widget.x + widget.width - 1, y) = 255;
        }
        glyphs::draw_text(frame.pixels, frame.width, widget.x + 3, widget.y + 3, text);
    }
    return frame;
}

} // namespace cdtk::render
