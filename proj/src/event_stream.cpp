#include "lgmd/event_stream.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

namespace lgmd {

namespace {

constexpr std::uint16_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kEventBytes = 16;
constexpr std::size_t kLabelBytes = 24;
constexpr std::uint64_t kMaxDuration = (std::uint64_t{1} << 48) - 1;

std::string describe_event(std::size_t index, const DvsEvent& e) {
    std::ostringstream os;
    os << "event " << index << " (t=" << e.t << ", x=" << e.x << ", y=" << e.y << ")";
    return os.str();
}

// Fraction of the unit pixel [p, p+1) covered by the interval [lo, hi].
double overlap(double p, double lo, double hi) {
    return std::clamp(std::min(p + 1.0, hi) - std::max(p, lo), 0.0, 1.0);
}

struct Box {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open
    bool empty() const { return x0 >= x1 || y0 >= y1; }
};

Box shape_box(double cx, double cy, double size, Resolution res) {
    Box b;
    b.x0 = std::max(0, static_cast<int>(std::floor(cx - size - 1.0)));
    b.y0 = std::max(0, static_cast<int>(std::floor(cy - size - 1.0)));
    b.x1 = std::min<int>(res.width, static_cast<int>(std::ceil(cx + size + 1.0)) + 1);
    b.y1 = std::min<int>(res.height, static_cast<int>(std::ceil(cy + size + 1.0)) + 1);
    return b;
}

Box merge(const Box& a, const Box& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return {std::min(a.x0, b.x0), std::min(a.y0, b.y0), std::max(a.x1, b.x1), std::max(a.y1, b.y1)};
}

float pixel_luminance(Shape shape, double cx, double cy, double size, int x, int y) {
    double coverage = 0.0;
    if (shape == Shape::Circle) {
        const double dx = x + 0.5 - cx;
        const double dy = y + 0.5 - cy;
        // anti-aliased edge one pixel wide
        coverage = std::clamp(size - std::sqrt(dx * dx + dy * dy) + 0.5, 0.0, 1.0);
    } else {
        coverage = overlap(x, cx - size, cx + size) * overlap(y, cy - size, cy + size);
    }
    return static_cast<float>(1.0 - coverage);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes = 8) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint64_t uint(int width, const char* what) {
        need(static_cast<std::size_t>(width), what);
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v |= std::uint64_t{bytes_[pos_ + i]} << (8 * i);
        pos_ += static_cast<std::size_t>(width);
        return v;
    }

    void zeros(std::size_t n, const char* what) {
        need(n, what);
        for (std::size_t i = 0; i < n; ++i) {
            if (bytes_[pos_ + i] != 0) fail("non-zero padding in " + std::string(what), pos_ + i);
        }
        pos_ += n;
    }

    void need(std::size_t n, const std::string& what) const {
        if (bytes_.size() - pos_ < n) fail("truncated " + what, pos_);
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t offset) const {
        throw RecordingError("parse error at byte offset " + std::to_string(offset) + ": " + msg);
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

void validate(const EventRecording& rec) {
    if (rec.resolution.width == 0 || rec.resolution.height == 0) {
        throw RecordingError("resolution must be non-zero");
    }
    if (rec.duration == 0) throw RecordingError("duration must be positive");
    for (std::size_t i = 0; i < rec.events.size(); ++i) {
        const auto& e = rec.events[i];
        if (e.x >= rec.resolution.width || e.y >= rec.resolution.height) {
            throw RecordingError(describe_event(i, e) + " lies outside the resolution");
        }
        if (e.t >= rec.duration) {
            throw RecordingError(describe_event(i, e) + " is beyond the recording duration");
        }
        if (i > 0 && e.t < rec.events[i - 1].t) {
            throw RecordingError(describe_event(i, e) + " is out of time order");
        }
    }
    if (rec.labels.empty()) throw RecordingError("recording has no label intervals");
    Timestamp cursor = 0;
    for (std::size_t i = 0; i < rec.labels.size(); ++i) {
        const auto& l = rec.labels[i];
        if (l.start != cursor) {
            throw RecordingError("label interval " + std::to_string(i) +
                                 " does not start where the previous one ended");
        }
        if (l.start >= l.end) {
            throw RecordingError("label interval " + std::to_string(i) + " is empty");
        }
        cursor = l.end;
    }
    if (cursor != rec.duration) throw RecordingError("label intervals do not cover the duration");
}

// ---------------------------------------------------------------------------
// scene

StimulusScene::StimulusScene(Shape shape, Resolution resolution, double centre_y,
                             std::vector<StimulusPhase> phases, Timestamp frame_interval)
    : shape_(shape),
      resolution_(resolution),
      centre_y_(centre_y),
      phases_(std::move(phases)),
      frame_interval_(frame_interval) {
    if (phases_.empty()) throw InvalidStimulus("stimulus has no phases");
    if (frame_interval_ == 0) throw InvalidStimulus("frame interval must be positive");
}

Timestamp StimulusScene::duration() const { return phases_.back().end; }

std::size_t StimulusScene::frame_count() const {
    return static_cast<std::size_t>((duration() + frame_interval_ - 1) / frame_interval_);
}

double StimulusScene::state_at(Timestamp t, bool want_size) const {
    const StimulusPhase* phase = &phases_.front();
    double s = 0.0;
    if (t > phases_.front().start) {
        auto it = std::find_if(phases_.begin(), phases_.end(),
                               [t](const StimulusPhase& p) { return t > p.start && t <= p.end; });
        if (it == phases_.end()) {
            phase = &phases_.back();
            s = 1.0;
        } else {
            phase = &*it;
            s = static_cast<double>(t - it->start) / static_cast<double>(it->end - it->start);
        }
    }
    if (!want_size) return phase->centre_x_from + (phase->centre_x_to - phase->centre_x_from) * s;
    const double from = phase->size_from;
    const double to = phase->size_to;
    if (phase->profile == SpeedProfile::Accelerating && from != to) {
        // projected size of an object moving at constant speed along the line of sight
        return from * to / (to + (from - to) * s);
    }
    return from + (to - from) * s;
}

double StimulusScene::size_at_frame(std::size_t k) const {
    return state_at((k + 1) * frame_interval_, true);
}

double StimulusScene::centre_x_at_frame(std::size_t k) const {
    return state_at((k + 1) * frame_interval_, false);
}

double StimulusScene::area_at_frame(std::size_t k) const {
    const double s = size_at_frame(k);
    return shape_ == Shape::Circle ? std::numbers::pi * s * s : 4.0 * s * s;
}

void StimulusScene::render(std::size_t k, std::span<float> luminance) const {
    if (luminance.size() != resolution_.pixels()) {
        throw std::invalid_argument("render: buffer size does not match resolution");
    }
    const double size = size_at_frame(k);
    const double cx = centre_x_at_frame(k);
    for (int y = 0; y < resolution_.height; ++y) {
        for (int x = 0; x < resolution_.width; ++x) {
            luminance[static_cast<std::size_t>(y) * resolution_.width + x] =
                pixel_luminance(shape_, cx, centre_y_, size, x, y);
        }
    }
}

std::vector<LabelInterval> StimulusScene::labels() const {
    std::vector<LabelInterval> out;
    out.reserve(phases_.size());
    for (const auto& p : phases_) {
        if (!out.empty() && out.back().is_looming == p.is_looming) {
            out.back().end = p.end;
        } else {
            out.push_back({p.start, p.end, p.is_looming});
        }
    }
    return out;
}

namespace {

Timestamp frames_to_us(double seconds, Timestamp frame) {
    const double frames = std::max(1.0, std::round(seconds * 1e6 / static_cast<double>(frame)));
    return static_cast<Timestamp>(frames) * frame;
}

void push_phase(std::vector<StimulusPhase>& phases, StimulusPhase p, Timestamp duration) {
    if (p.start >= duration) return;
    if (p.end > duration) {
        // truncate, keeping the trajectory of the full phase
        const double s = static_cast<double>(duration - p.start) / static_cast<double>(p.end - p.start);
        if (p.profile == SpeedProfile::Accelerating && p.size_from != p.size_to) {
            p.size_to = p.size_from * p.size_to / (p.size_to + (p.size_from - p.size_to) * s);
        } else {
            p.size_to = p.size_from + (p.size_to - p.size_from) * s;
        }
        p.centre_x_to = p.centre_x_from + (p.centre_x_to - p.centre_x_from) * s;
        p.end = duration;
    }
    phases.push_back(p);
}

}  // namespace

StimulusScene make_scene(const StimulusSpec& spec, Resolution res, Timestamp duration) {
    if (duration == 0) throw InvalidStimulus("duration must be positive");
    if (res.width < 3 || res.height < 3) throw InvalidStimulus("resolution must be at least 3x3");
    if (!(spec.contrast_threshold > 0.0 && spec.contrast_threshold < 1.0)) {
        throw InvalidStimulus("contrast threshold must lie in (0, 1)");
    }
    if (spec.frame_interval == 0) throw InvalidStimulus("frame interval must be positive");
    const double cx = res.width / 2.0;
    const double cy = res.height / 2.0;
    const Timestamp dt = spec.frame_interval;

    if (spec.trajectory == Trajectory::Composite) {
        const double r0 = 0.1 * std::min(res.width, res.height);
        const double r1 = 0.45 * std::min(res.width, res.height);
        const double rh = 0.5 * (r0 + r1);
        const Timestamp q = std::max<Timestamp>(
            dt, static_cast<Timestamp>(std::llround(duration / 4.0 / static_cast<double>(dt))) * dt);
        if (4 * q > duration + 3 * dt || 3 * q >= duration) {
            throw InvalidStimulus("composite duration too short for four phases");
        }
        const double x0 = cx - res.width / 4.0;
        std::vector<StimulusPhase> phases{
            {0, q, false, r0, r0, x0, cx, SpeedProfile::Constant},
            {q, 2 * q, true, r0, rh, cx, cx, SpeedProfile::Accelerating},
            {2 * q, 3 * q, false, rh, r0, cx, cx, SpeedProfile::Accelerating},
            {3 * q, duration, true, r0, r1, cx, cx, SpeedProfile::Accelerating},
        };
        return StimulusScene(spec.shape, res, cy, std::move(phases), dt);
    }

    if (!(spec.speed > 0.0)) throw InvalidStimulus("speed must be positive");
    if (!(spec.start_size > 0.0)) throw InvalidStimulus("start size must be positive");
    if (spec.start_size > cx || spec.start_size > cy) {
        throw InvalidStimulus("shape exceeds the frame at t=0");
    }
    if (!(spec.hold_ratio >= 0.0)) throw InvalidStimulus("hold ratio must be non-negative");

    std::vector<StimulusPhase> phases;
    const double lo = spec.start_size;
    const double hi = spec.end_size;
    switch (spec.trajectory) {
        case Trajectory::Loom: {
            if (!(hi > lo)) throw InvalidStimulus("loom end size must exceed start size");
            const Timestamp loom = frames_to_us((hi - lo) / spec.speed, dt);
            const Timestamp hold =
                spec.hold_ratio > 0.0 ? frames_to_us(spec.hold_ratio * (hi - lo) / spec.speed, dt) : 0;
            Timestamp t = 0;
            bool first = true;
            while (t < duration) {
                if (hold > 0 && first) {
                    push_phase(phases, {t, t + hold, false, lo, lo, cx, cx, SpeedProfile::Constant}, duration);
                } else if (hold > 0) {
                    // rest at the final size, snapping back to the start size on the last frame
                    if (hold > dt) {
                        push_phase(phases, {t, t + hold - dt, false, hi, hi, cx, cx, SpeedProfile::Constant}, duration);
                    }
                    push_phase(phases, {t + hold - dt, t + hold, false, lo, lo, cx, cx, SpeedProfile::Constant},
                               duration);
                }
                first = false;
                t += hold;
                push_phase(phases, {t, t + loom, true, lo, hi, cx, cx, spec.profile}, duration);
                t += loom;
            }
            break;
        }
        case Trajectory::Recede: {
            if (!(hi > lo)) throw InvalidStimulus("recession end size must exceed start size");
            if (hi > cx || hi > cy) throw InvalidStimulus("shape exceeds the frame at t=0");
            const Timestamp recede = frames_to_us((hi - lo) / spec.speed, dt);
            push_phase(phases, {0, recede, false, hi, lo, cx, cx, spec.profile}, duration);
            if (recede < duration) {
                push_phase(phases, {recede, duration, false, lo, lo, cx, cx, SpeedProfile::Constant}, duration);
            }
            break;
        }
        case Trajectory::Translate: {
            const double x0 = lo + 1.0;
            const double x1 = res.width - lo - 1.0;
            if (!(x1 > x0)) throw InvalidStimulus("frame too small for translation");
            const Timestamp sweep = frames_to_us((x1 - x0) / spec.speed, dt);
            push_phase(phases, {0, sweep, false, lo, lo, x0, x1, SpeedProfile::Constant}, duration);
            if (sweep < duration) {
                push_phase(phases, {sweep, duration, false, lo, lo, x1, x1, SpeedProfile::Constant}, duration);
            }
            break;
        }
        case Trajectory::Composite:
            break;
    }
    return StimulusScene(spec.shape, res, cy, std::move(phases), dt);
}

EventRecording synthesize_events(const StimulusScene& scene, double threshold, double noise_rate_hz,
                                 std::uint64_t seed) {
    const Resolution res = scene.resolution();
    EventRecording rec;
    rec.resolution = res;
    rec.duration = scene.duration();
    rec.labels = scene.labels();

    // reference luminance = scene state at t = 0
    std::vector<float> ref(res.pixels(), 1.0f);
    const auto& first = scene.phases().front();
    const Box first_box = shape_box(first.centre_x_from, scene.centre_y(), first.size_from, res);
    for (int y = first_box.y0; y < first_box.y1; ++y) {
        for (int x = first_box.x0; x < first_box.x1; ++x) {
            ref[static_cast<std::size_t>(y) * res.width + x] =
                pixel_luminance(scene.shape(), first.centre_x_from, scene.centre_y(), first.size_from, x, y);
        }
    }
    Box previous = first_box;

    std::mt19937_64 rng(seed);
    const double noise_mean =
        noise_rate_hz * static_cast<double>(res.pixels()) * static_cast<double>(scene.frame_interval()) * 1e-6;
    std::poisson_distribution<int> noise_count(noise_mean > 0.0 ? noise_mean : 1.0);
    std::uniform_int_distribution<int> noise_x(0, res.width - 1);
    std::uniform_int_distribution<int> noise_y(0, res.height - 1);
    std::bernoulli_distribution noise_on(0.5);

    const float theta = static_cast<float>(threshold);
    const std::size_t frames = scene.frame_count();
    for (std::size_t k = 0; k < frames; ++k) {
        const Timestamp t = k * scene.frame_interval();
        const double size = scene.size_at_frame(k);
        const double cx = scene.centre_x_at_frame(k);
        const Box current = shape_box(cx, scene.centre_y(), size, res);
        const Box region = merge(previous, current);
        for (int y = region.y0; y < region.y1; ++y) {
            for (int x = region.x0; x < region.x1; ++x) {
                const std::size_t idx = static_cast<std::size_t>(y) * res.width + x;
                const float lum = pixel_luminance(scene.shape(), cx, scene.centre_y(), size, x, y);
                const float diff = lum - ref[idx];
                if (std::abs(diff) > theta) {
                    rec.events.push_back({t, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                                          diff < 0.0f ? Polarity::On : Polarity::Off});
                    ref[idx] = lum;
                }
            }
        }
        previous = current;
        if (noise_mean > 0.0) {
            const int n = noise_count(rng);
            for (int i = 0; i < n; ++i) {
                const auto nx = static_cast<std::uint16_t>(noise_x(rng));
                const auto ny = static_cast<std::uint16_t>(noise_y(rng));
                rec.events.push_back({t, nx, ny, noise_on(rng) ? Polarity::On : Polarity::Off});
            }
        }
    }
    return rec;
}

EventRecording generate_stimulus(const StimulusSpec& spec, Resolution resolution, Timestamp duration) {
    const StimulusScene scene = make_scene(spec, resolution, duration);
    return synthesize_events(scene, spec.contrast_threshold, spec.noise_rate_hz, spec.seed);
}

EventRecording generate_composite(Resolution resolution, Timestamp duration, double contrast_threshold,
                                  double noise_rate_hz, std::uint64_t seed) {
    StimulusSpec spec;
    spec.shape = Shape::Circle;
    spec.trajectory = Trajectory::Composite;
    spec.contrast_threshold = contrast_threshold;
    spec.noise_rate_hz = noise_rate_hz;
    spec.seed = seed;
    return generate_stimulus(spec, resolution, duration);
}

// ---------------------------------------------------------------------------
// persistence

std::vector<std::uint8_t> encode_recording(const EventRecording& rec) {
    validate(rec);
    if (rec.duration > kMaxDuration) throw RecordingError("duration does not fit the header field");
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderBytes + 8 + rec.events.size() * kEventBytes + 8 + rec.labels.size() * kLabelBytes);
    for (const char c : {'L', 'G', 'E', 'V'}) out.push_back(static_cast<std::uint8_t>(c));
    put_u16(out, kFormatVersion);
    put_u16(out, rec.resolution.width);
    put_u16(out, rec.resolution.height);
    put_u64(out, rec.duration, 6);
    put_u64(out, rec.events.size());
    for (const auto& e : rec.events) {
        put_u64(out, e.t);
        put_u16(out, e.x);
        put_u16(out, e.y);
        out.push_back(static_cast<std::uint8_t>(e.polarity));
        out.insert(out.end(), 3, 0);
    }
    put_u64(out, rec.labels.size());
    for (const auto& l : rec.labels) {
        put_u64(out, l.start);
        put_u64(out, l.end);
        out.push_back(l.is_looming ? 1 : 0);
        out.insert(out.end(), 7, 0);
    }
    return out;
}

EventRecording decode_recording(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    in.need(kHeaderBytes, "header");
    if (!(bytes[0] == 'L' && bytes[1] == 'G' && bytes[2] == 'E' && bytes[3] == 'V')) {
        in.fail("bad magic", 0);
    }
    in.uint(4, "magic");
    const auto version = in.uint(2, "version");
    if (version != kFormatVersion) in.fail("unsupported version " + std::to_string(version), 4);
    EventRecording rec;
    rec.resolution.width = static_cast<std::uint16_t>(in.uint(2, "width"));
    rec.resolution.height = static_cast<std::uint16_t>(in.uint(2, "height"));
    rec.duration = in.uint(6, "duration");

    const std::size_t count_at = in.position();
    const auto n_events = in.uint(8, "event count");
    if (n_events > in.remaining() / kEventBytes) in.fail("event count exceeds file size", count_at);
    rec.events.resize(static_cast<std::size_t>(n_events));
    for (auto& e : rec.events) {
        e.t = in.uint(8, "event");
        e.x = static_cast<std::uint16_t>(in.uint(2, "event"));
        e.y = static_cast<std::uint16_t>(in.uint(2, "event"));
        const std::size_t pol_at = in.position();
        const auto pol = in.uint(1, "event");
        if (pol > 1) in.fail("invalid polarity", pol_at);
        e.polarity = static_cast<Polarity>(pol);
        in.zeros(3, "event");
    }
    const std::size_t labels_at = in.position();
    const auto n_labels = in.uint(8, "label count");
    if (n_labels > in.remaining() / kLabelBytes) in.fail("label count exceeds file size", labels_at);
    rec.labels.resize(static_cast<std::size_t>(n_labels));
    for (auto& l : rec.labels) {
        l.start = in.uint(8, "label");
        l.end = in.uint(8, "label");
        const std::size_t flag_at = in.position();
        const auto flag = in.uint(1, "label");
        if (flag > 1) in.fail("invalid looming flag", flag_at);
        l.is_looming = flag == 1;
        in.zeros(7, "label");
    }
    if (in.remaining() != 0) in.fail("trailing bytes", in.position());
    validate(rec);
    return rec;
}

void save_recording(const EventRecording& recording, const std::filesystem::path& destination) {
    const auto bytes = encode_recording(recording);
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw RecordingError("cannot open " + destination.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw RecordingError("failed writing " + destination.string());
}

EventRecording load_recording(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw RecordingError("cannot open " + source.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_recording(bytes);
}

EventRecording concatenate(std::span<const EventRecording> parts) {
    if (parts.empty()) throw RecordingError("nothing to concatenate");
    EventRecording out;
    out.resolution = parts.front().resolution;
    for (const auto& part : parts) {
        if (!(part.resolution == out.resolution)) throw RecordingError("cannot concatenate different resolutions");
        const Timestamp offset = out.duration;
        for (auto e : part.events) {
            e.t += offset;
            out.events.push_back(e);
        }
        for (const auto& l : part.labels) {
            if (!out.labels.empty() && out.labels.back().is_looming == l.is_looming) {
                out.labels.back().end = l.end + offset;
            } else {
                out.labels.push_back({l.start + offset, l.end + offset, l.is_looming});
            }
        }
        out.duration += part.duration;
    }
    validate(out);
    return out;
}

EventRecording downsample(const EventRecording& rec, unsigned factor) {
    if (factor == 0 || rec.resolution.width % factor != 0 || rec.resolution.height % factor != 0) {
        throw std::invalid_argument("downsample factor must divide the resolution");
    }
    EventRecording out;
    out.resolution = {static_cast<std::uint16_t>(rec.resolution.width / factor),
                      static_cast<std::uint16_t>(rec.resolution.height / factor)};
    out.duration = rec.duration;
    out.labels = rec.labels;
    out.events.reserve(rec.events.size());
    for (const auto& e : rec.events) {
        out.events.push_back({e.t, static_cast<std::uint16_t>(e.x / factor),
                              static_cast<std::uint16_t>(e.y / factor), e.polarity});
    }
    std::stable_sort(out.events.begin(), out.events.end());
    out.events.erase(std::unique(out.events.begin(), out.events.end()), out.events.end());
    return out;
}

std::span<const DvsEvent> events_between(const EventRecording& rec, Timestamp from, Timestamp to) {
    auto by_time = [](const DvsEvent& e, Timestamp t) { return e.t < t; };
    auto lo = std::lower_bound(rec.events.begin(), rec.events.end(), from, by_time);
    auto hi = std::lower_bound(lo, rec.events.end(), to, by_time);
    return {lo, hi};
}

std::string to_string(Shape shape) { return shape == Shape::Circle ? "circle" : "square"; }

std::string to_string(Trajectory trajectory) {
    switch (trajectory) {
        case Trajectory::Loom: return "loom";
        case Trajectory::Recede: return "recede";
        case Trajectory::Translate: return "translate";
        case Trajectory::Composite: return "composite";
    }
    return "loom";
}

Shape parse_shape(const std::string& text) {
    if (text == "circle") return Shape::Circle;
    if (text == "square") return Shape::Square;
    throw InvalidStimulus("unknown shape '" + text + "'");
}

Trajectory parse_trajectory(const std::string& text) {
    if (text == "loom") return Trajectory::Loom;
    if (text == "recede") return Trajectory::Recede;
    if (text == "translate") return Trajectory::Translate;
    if (text == "composite") return Trajectory::Composite;
    throw InvalidStimulus("unknown trajectory '" + text + "'");
}

}  // namespace lgmd
