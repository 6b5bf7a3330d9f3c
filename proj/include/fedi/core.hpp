#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fedi {

// All validation failures derive from Error so callers (notably the CLI) can
// map them to a single data-error exit path.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Event stream out of time order.
struct OrderingError : Error {
    using Error::Error;
};

// Event outside the exposure window it was submitted to, or a window that
// cannot be formed.
struct WindowError : Error {
    using Error::Error;
};

// Operation called in the wrong accumulator state (e.g. push before begin).
struct StateError : Error {
    using Error::Error;
};

// Mismatched or invalid sensor geometry / image dimensions.
struct GeometryError : Error {
    using Error::Error;
};

// Invalid run configuration (overlapping exposures, bad manifest, ...).
struct ConfigError : Error {
    using Error::Error;
};

// File format or filesystem failure.
struct IoError : Error {
    using Error::Error;
};

// Timestamps are integer microseconds throughout; no float time on any
// boundary, so segment decompositions tile exactly.
using Timestamp = std::int64_t;

// One brightness-change sample. p is +1 or -1, never 0.
struct Event {
    Timestamp t = 0;
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    std::int8_t p = 1;
};

struct SensorGeometry {
    int width = 0;
    int height = 0;

    std::int64_t pixel_count() const { return std::int64_t(width) * height; }
    bool contains(int px, int py) const {
        return px >= 0 && px < width && py >= 0 && py < height;
    }
    bool operator==(const SensorGeometry&) const = default;
};

void validate(const SensorGeometry& geom);

// Signed log-intensity thresholds. c_on > 0, c_off < 0 (stored negative).
struct ContrastParams {
    double c_on = 0.0;
    double c_off = 0.0;
};

void validate(const ContrastParams& cp);

// Exposure interval [t_start, t_end], duration strictly positive.
struct ExposureWindow {
    Timestamp t_start = 0;
    Timestamp t_end = 0;

    Timestamp duration_us() const { return t_end - t_start; }
    double duration_s() const { return double(t_end - t_start) * 1e-6; }
    // In-window convention, fixed project-wide: (t_start, t_end].
    bool contains(Timestamp t) const { return t > t_start && t <= t_end; }
};

void validate(const ExposureWindow& w);

// Whether the outer integral weights each latent value by elapsed time or by
// global event-count difference. TimeWeighted is the default.
enum class IntegrationMode {
    TimeWeighted,
    CountWeighted,
};

std::string_view to_string(IntegrationMode mode);
IntegrationMode integration_mode_from_string(std::string_view name);

// Row-major normalized intensity image, values in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    static GrayImage constant(SensorGeometry geom, double value);

    double& at(int x, int y) { return data[std::size_t(y) * width + x]; }
    double at(int x, int y) const { return data[std::size_t(y) * width + x]; }
    SensorGeometry geometry() const { return {width, height}; }
    std::size_t size() const { return data.size(); }
};

// Throws unless dimensions and data length agree and every value is finite
// and inside [0, 1].
void validate(const GrayImage& img);

// Per-pixel E(f, T) values dividing a blurry frame into a latent frame.
// Strictly positive; exactly 1 where no in-window events landed.
struct EdiMap {
    int width = 0;
    int height = 0;
    std::vector<double> e;

    static EdiMap ones(SensorGeometry geom);

    double& at(int x, int y) { return e[std::size_t(y) * width + x]; }
    double at(int x, int y) const { return e[std::size_t(y) * width + x]; }
    SensorGeometry geometry() const { return {width, height}; }
};

// A blurry frame together with its exposure interval.
struct FrameRecord {
    GrayImage image;
    ExposureWindow window;
};

// Threshold contributed by a single event: c_on for p = +1, c_off for p = -1.
inline double signed_contrast(int polarity, const ContrastParams& cp) {
    return polarity > 0 ? cp.c_on : cp.c_off;
}

// Exact ON/OFF event counts over (from, to]; input must be sorted by t.
struct PolarityCounts {
    std::int64_t on = 0;
    std::int64_t off = 0;
};

PolarityCounts count_polarities(std::span<const Event> events, Timestamp from,
                                Timestamp to);

// Signed log-intensity change accumulated over (from, to]:
// on_count * c_on + off_count * c_off. Boundary convention: an event exactly
// at `from` is excluded, one exactly at `to` is included.
double cumulative_sum(std::span<const Event> events, const ContrastParams& cp,
                      Timestamp from, Timestamp to);

// Throws OrderingError unless timestamps are nondecreasing.
void require_sorted(std::span<const Event> events);

}  // namespace fedi
