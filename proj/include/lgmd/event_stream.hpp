#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgmd {

/// Microseconds since the start of a recording.
using Timestamp = std::uint64_t;

enum class Polarity : std::uint8_t { Off = 0, On = 1 };

struct DvsEvent {
    Timestamp t = 0;
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    Polarity polarity = Polarity::On;

    friend auto operator<=>(const DvsEvent&, const DvsEvent&) = default;
};

struct LabelInterval {
    Timestamp start = 0;
    Timestamp end = 0;
    bool is_looming = false;

    Timestamp length() const { return end - start; }
    friend bool operator==(const LabelInterval&, const LabelInterval&) = default;
};

struct Resolution {
    std::uint16_t width = 32;
    std::uint16_t height = 32;

    std::size_t pixels() const { return std::size_t{width} * height; }
    friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct EventRecording {
    Resolution resolution;
    Timestamp duration = 0;
    std::vector<DvsEvent> events;     // sorted by t
    std::vector<LabelInterval> labels; // tiles [0, duration)

    friend bool operator==(const EventRecording&, const EventRecording&) = default;
};

class RecordingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidStimulus : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws RecordingError if any EventRecording invariant is violated.
void validate(const EventRecording& recording);

enum class Shape { Circle, Square };
enum class Trajectory { Loom, Recede, Translate, Composite };
enum class SpeedProfile { Constant, Accelerating };

/// Parameters of a synthetic black-on-white stimulus.
///
/// Sizes are radii for circles and half-sides for squares, in pixels.
/// `speed` is the mean edge speed of a loom or recession (or the centre
/// speed of a translation) in pixels per second. With the accelerating
/// profile the size follows the projection of an object approaching at
/// constant velocity, so edge speed grows through the loom.
struct StimulusSpec {
    Shape shape = Shape::Circle;
    Trajectory trajectory = Trajectory::Loom;
    SpeedProfile profile = SpeedProfile::Accelerating;
    double speed = 30.0;
    double start_size = 2.0;
    double end_size = 14.0;
    double hold_ratio = 1.0;          // static hold time / loom time
    double contrast_threshold = 0.03; // luminance change triggering an event
    Timestamp frame_interval = 100;   // µs
    double noise_rate_hz = 0.0;       // background events per pixel per second
    std::uint64_t seed = 0;           // only used by noise injection
};

/// One phase of a stimulus schedule; `size` and `centre_x` are interpolated
/// from the *_from to the *_to values over [start, end).
struct StimulusPhase {
    Timestamp start = 0;
    Timestamp end = 0;
    bool is_looming = false;
    double size_from = 0.0;
    double size_to = 0.0;
    double centre_x_from = 0.0;
    double centre_x_to = 0.0;
    SpeedProfile profile = SpeedProfile::Constant;
};

/// Deterministic scene description behind a synthetic recording.
class StimulusScene {
public:
    StimulusScene(Shape shape, Resolution resolution, double centre_y,
                  std::vector<StimulusPhase> phases, Timestamp frame_interval);

    Shape shape() const { return shape_; }
    Resolution resolution() const { return resolution_; }
    Timestamp duration() const;
    Timestamp frame_interval() const { return frame_interval_; }
    std::size_t frame_count() const;
    const std::vector<StimulusPhase>& phases() const { return phases_; }

    /// Shape size and centre shown by frame k. A frame covering
    /// [k*dt, (k+1)*dt) displays the state reached at the end of that span.
    double size_at_frame(std::size_t k) const;
    double centre_x_at_frame(std::size_t k) const;
    double centre_y() const { return centre_y_; }
    /// Geometric (not pixel-counted) area of the shape shown by frame k.
    double area_at_frame(std::size_t k) const;

    /// Luminance in [0, 1] (white = 1) of every pixel of frame k, row-major.
    void render(std::size_t k, std::span<float> luminance) const;

    std::vector<LabelInterval> labels() const;

private:
    double state_at(Timestamp t, bool want_size) const;

    Shape shape_;
    Resolution resolution_;
    double centre_y_;
    std::vector<StimulusPhase> phases_;
    Timestamp frame_interval_;
};

/// Builds the scene for `spec`; throws InvalidStimulus on a bad spec.
StimulusScene make_scene(const StimulusSpec& spec, Resolution resolution, Timestamp duration);

/// Converts a scene to events by per-pixel thresholded frame differencing.
EventRecording synthesize_events(const StimulusScene& scene, double contrast_threshold,
                                 double noise_rate_hz = 0.0, std::uint64_t seed = 0);

EventRecording generate_stimulus(const StimulusSpec& spec, Resolution resolution,
                                 Timestamp duration);

/// Translation, half loom, full recession, full loom of a circle; each phase
/// takes a quarter of `duration` so looming and non-looming time are equal.
EventRecording generate_composite(Resolution resolution, Timestamp duration,
                                  double contrast_threshold = 0.03, double noise_rate_hz = 0.0,
                                  std::uint64_t seed = 0);

std::vector<std::uint8_t> encode_recording(const EventRecording& recording);
EventRecording decode_recording(std::span<const std::uint8_t> bytes);

void save_recording(const EventRecording& recording, const std::filesystem::path& destination);
EventRecording load_recording(const std::filesystem::path& source);

/// Plays the parts back to back; adjacent intervals with equal labels merge.
EventRecording concatenate(std::span<const EventRecording> parts);

/// Maps each event to (x / factor, y / factor) and merges exact duplicates.
EventRecording downsample(const EventRecording& recording, unsigned factor);

/// Events with t in [from, to), as a view into the recording.
std::span<const DvsEvent> events_between(const EventRecording& recording, Timestamp from,
                                         Timestamp to);

std::string to_string(Shape shape);
std::string to_string(Trajectory trajectory);
Shape parse_shape(const std::string& text);
Trajectory parse_trajectory(const std::string& text);

}  // namespace lgmd
