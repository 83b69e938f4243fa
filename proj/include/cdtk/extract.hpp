#pragma once

#include "cdtk/constraints.hpp"
#include "cdtk/display_model.hpp"
#include "cdtk/pgm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::extract {

/// A widget's interior (its region minus the 1-pixel border), cut out of a
/// frame.
struct RegionCrop {
    std::string widget_name;
    int x = 0;   // frame coordinates of the interior's top-left pixel
    int y = 0;
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;
};

/// One crop per visible widget, in model order.
std::vector<RegionCrop> segment(const pgm::Image& frame, const display::DisplayModel& model);

/// Template OCR over the fixed glyph set: binarize at 128, group ink columns
/// into cells (a gap is a blank run at least as wide as the scaled inter-glyph
/// gap), and require an exact bitmap match per cell.
std::string ocr(const RegionCrop& crop);

enum class Confidence { Exact, Rejected };

struct Observation {
    long long seq = 0;
    std::string state;
    std::string widget_name;
    std::string target_property;
    std::string raw_text;
    std::optional<ocl::TypedValue> value;
    Confidence confidence = Confidence::Exact;
    std::string error;   // populated when rejected
};

/// Parses rawText under the widget's format: "%d" -> Int, "%.1f" -> Real
/// ("-0.0" normalizes to 0.0).
Observation decode(const std::string& raw_text, const display::WidgetModel& widget);

/// Segment + ocr + decode for every visible widget. Per-widget failures come
/// back as rejected observations instead of aborting the frame.
std::vector<Observation> extract_frame(const pgm::Image& frame,
                                       const display::DisplayModel& model,
                                       long long seq,
                                       const std::string& state);

std::string to_jsonl(const std::vector<Observation>& observations);
std::vector<Observation> observations_from_jsonl(std::string_view bytes);

} // namespace cdtk::extract
