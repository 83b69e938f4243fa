#include "cdtk/recorder.hpp"

#include "cdtk/errors.hpp"
#include "cdtk/pgm.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cdtk::record {

namespace fs = std::filesystem;

void check_plan(const RecordingPlan& plan) {
    if (plan.interval_sec <= 0.0) {
        throw Error(ErrorKind::ConfigError, "recording interval must be positive");
    }
    for (const auto& [state, duration] : plan.per_state_duration) {
        if (duration <= 0) {
            throw Error(ErrorKind::ConfigError, "duration for '" + state + "' must be positive");
        }
    }
}

std::string frame_file_name(long long seq, long long t_ms) {
    std::ostringstream name;
    name.width(6);
    name.fill('0');
    name << seq;
    name << "_" << t_ms << ".pgm";
    return name.str();
}

FrameRecorder::FrameRecorder(std::string output_dir) : output_dir_(std::move(output_dir)) {
    std::error_code ec;
    fs::create_directories(output_dir_, ec);
    if (ec) {
        throw Error(ErrorKind::StorageError, "cannot create '" + output_dir_ + "': " + ec.message());
    }
}

std::vector<FrameRef> FrameRecorder::record(const display::DisplayModel& model,
                                            const std::vector<flightsim::Sample>& samples) {
    std::vector<FrameRef> written;
    for (const flightsim::Sample& sample : samples) {
        render::Frame frame = render::render_frame(model, sample);
        frame.seq = next_seq_++;

        FrameRef ref;
        ref.seq = frame.seq;
        ref.state = frame.state;
        ref.t_ms = std::llround(frame.t_sec * 1000.0);
        ref.path = frame.state + "/" + frame_file_name(ref.seq, ref.t_ms);

        fs::path state_dir = fs::path(output_dir_) / frame.state;
        std::error_code ec;
        fs::create_directories(state_dir, ec);
        if (ec) {
            throw Error(ErrorKind::StorageError,
                        "cannot create '" + state_dir.string() + "': " + ec.message());
        }
        pgm::write_file((fs::path(output_dir_) / ref.path).string(), frame.image());

        frames_.push_back(ref);
        written.push_back(std::move(ref));
    }
    return written;
}

void FrameRecorder::write_manifest() const {
    fs::path manifest = fs::path(output_dir_) / "manifest.csv";
    std::ofstream out(manifest);
    if (!out) {
        throw Error(ErrorKind::StorageError, "cannot open '" + manifest.string() + "'");
    }
    out << "seq,state,t_ms,path\n";
    for (const FrameRef& ref : frames_) {
        out << ref.seq << "," << ref.state << "," << ref.t_ms << "," << ref.path << "\n";
    }
    if (!out) {
        throw Error(ErrorKind::StorageError, "short write to '" + manifest.string() + "'");
    }
}

std::vector<FrameRef> load_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open '" + manifest_path + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != "seq,state,t_ms,path") {
        throw Error(ErrorKind::SyntaxError, "manifest is missing the seq,state,t_ms,path header");
    }
    std::vector<FrameRef> refs;
    int line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        FrameRef ref;
        std::string seq_text, t_text;
        if (!std::getline(fields, seq_text, ',') || !std::getline(fields, ref.state, ',') ||
            !std::getline(fields, t_text, ',') || !std::getline(fields, ref.path)) {
            throw Error(ErrorKind::SyntaxError, "malformed manifest row", line_no);
        }
        try {
            ref.seq = std::stoll(seq_text);
            ref.t_ms = std::stoll(t_text);
        } catch (const std::exception&) {
            throw Error(ErrorKind::SyntaxError, "malformed manifest row", line_no);
        }
        refs.push_back(std::move(ref));
    }
    return refs;
}

} // namespace cdtk::record
