#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "fedi/core.hpp"

namespace fedi {

enum class ScenePattern {
    VerticalEdge,
    SineGrating,
    Checkerboard,
};

std::string_view to_string(ScenePattern pattern);
ScenePattern scene_pattern_from_string(std::string_view name);

// Analytic test scene translating horizontally at a constant velocity.
// Pattern conventions (all intensities in [kDarkLevel, kBrightLevel]):
//   vertical_edge : dark left of column width/4 at t = 0, bright right of it
//   sine_grating  : horizontal sine, wavelength width/2
//   checkerboard  : 8 px cells
// The seed is reserved for randomized variants; the default pipeline is
// noise-free so closed-loop tests stay exact.
struct SceneSpec {
    ScenePattern pattern = ScenePattern::VerticalEdge;
    double velocity_px_per_s = 0.0;
    SensorGeometry geometry;
    Timestamp duration_us = 0;
    double intensity_floor = 1e-3;
    std::uint64_t seed = 0;
};

void validate(const SceneSpec& spec);

inline constexpr double kDarkLevel = 0.15;
inline constexpr double kBrightLevel = 0.85;
inline constexpr int kCheckerCellPx = 8;

// Time-ordered latent frames with matching microsecond timestamps.
struct LatentVideo {
    std::vector<GrayImage> frames;
    std::vector<Timestamp> timestamps;
};

// Exact pattern sample at an arbitrary time (no interpolation).
GrayImage render_frame_at(const SceneSpec& spec, Timestamp t);

// Samples the scene every sample_period microseconds from 0 through
// duration; a final frame exactly at duration is always included.
LatentVideo render_scene(const SceneSpec& spec, Timestamp sample_period_us);

// Ideal event-camera forward model: per pixel, the log intensity
// log(max(L, floor)) is tracked against the last-event reference; between
// samples it is linearly interpolated and one event is emitted per threshold
// crossing, timestamps rounded to whole microseconds. Output sorted by
// (t, y, x).
std::vector<Event> events_from_video(const LatentVideo& video,
                                     const ContrastParams& cp,
                                     double intensity_floor = 1e-3);

// Exposure average of the piecewise-linear latent signal (trapezoidal,
// window endpoints interpolated). The video must cover the window.
GrayImage blur_from_video(const LatentVideo& video,
                          const ExposureWindow& window);

// Everything needed for a closed-loop experiment. Ground truth latents are
// sampled exactly at each frame's t_start.
struct Dataset {
    SensorGeometry geometry;
    ContrastParams contrast;
    IntegrationMode mode = IntegrationMode::TimeWeighted;
    std::vector<Event> events;
    std::vector<FrameRecord> frames;
    std::vector<GrayImage> ground_truth;
};

// Frames at uniform cadence, each exposed for exposure_fraction of the frame
// period. sample_period_us controls the forward-model discretization.
Dataset make_dataset(const SceneSpec& spec, const ContrastParams& cp,
                     double frame_rate_hz, double exposure_fraction,
                     Timestamp sample_period_us = 100);

}  // namespace fedi
