#pragma once

#include "cdtk/display_model.hpp"
#include "cdtk/flightsim.hpp"
#include "cdtk/pgm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cdtk::render {

struct Frame {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;   // row-major, 8-bit grayscale
    std::string state;
    double t_sec = 0.0;
    long long seq = 0;

    pgm::Image image() const { return {width, height, pixels}; }
};

/// Background 0; each visible widget gets a 1-pixel border at 255 and its
/// formatted displayed value drawn from (x+3, y+3). seq is left to the caller.
Frame render_frame(const display::DisplayModel& model, const flightsim::Sample& sample);

} // namespace cdtk::render
