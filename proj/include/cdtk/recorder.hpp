#pragma once

#include "cdtk/display_model.hpp"
#include "cdtk/flightsim.hpp"
#include "cdtk/render.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::record {

struct RecordingPlan {
    std::map<std::string, int> per_state_duration;
    double interval_sec = 1.0;
    std::string output_dir;
};

/// Validates interval > 0 and all durations > 0.
void check_plan(const RecordingPlan& plan);

struct FrameRef {
    long long seq = 0;
    std::string state;
    long long t_ms = 0;
    std::string path;   // relative to the output directory

    bool operator==(const FrameRef&) const = default;
};

/// Writes frames as `<dir>/<state>/<seq:06>_<t_ms>.pgm` with one global,
/// monotone sequence counter, and a manifest.csv covering every frame.
class FrameRecorder {
public:
    explicit FrameRecorder(std::string output_dir);

    /// Renders and stores every sample; returns the references just written.
    std::vector<FrameRef> record(const display::DisplayModel& model,
                                 const std::vector<flightsim::Sample>& samples);

    /// Writes manifest.csv with header seq,state,t_ms,path.
    void write_manifest() const;

    const std::vector<FrameRef>& frames() const { return frames_; }

private:
    std::string output_dir_;
    long long next_seq_ = 0;
    std::vector<FrameRef> frames_;
};

std::string frame_file_name(long long seq, long long t_ms);

std::vector<FrameRef> load_manifest(const std::string& manifest_path);

} // namespace cdtk::record
