#include "fedi/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fedi {

namespace {

// Horizontal displacement in pixels at time t. Multiply before dividing so
// integer-valued cases stay exact.
double displacement_px(const SceneSpec& spec, Timestamp t) {
    return spec.velocity_px_per_s * double(t) / 1e6;
}

double pattern_value(const SceneSpec& spec, double u, int y) {
    switch (spec.pattern) {
        case ScenePattern::VerticalEdge: {
            const double edge0 = spec.geometry.width / 4.0;
            return u < edge0 ? kDarkLevel : kBrightLevel;
        }
        case ScenePattern::SineGrating: {
            const double wavelength = spec.geometry.width / 2.0;
            const double cycles = u / wavelength;
            const double phase = cycles - std::floor(cycles);
            const double mid = 0.5 * (kDarkLevel + kBrightLevel);
            const double amp = 0.5 * (kBrightLevel - kDarkLevel);
            return mid + amp * std::sin(2.0 * std::numbers::pi * phase);
        }
        case ScenePattern::Checkerboard: {
            const auto cu = std::int64_t(
                std::floor(u / double(kCheckerCellPx)));
            const auto cy = std::int64_t(y / kCheckerCellPx);
            return ((cu + cy) & 1) == 0 ? kBrightLevel : kDarkLevel;
        }
    }
    throw ConfigError("unknown scene pattern");
}

}  // namespace

std::string_view to_string(ScenePattern pattern) {
    switch (pattern) {
        case ScenePattern::VerticalEdge: return "vertical_edge";
        case ScenePattern::SineGrating: return "sine_grating";
        case ScenePattern::Checkerboard: return "checkerboard";
    }
    return "?";
}

ScenePattern scene_pattern_from_string(std::string_view name) {
    if (name == "vertical_edge") return ScenePattern::VerticalEdge;
    if (name == "sine_grating") return ScenePattern::SineGrating;
    if (name == "checkerboard") return ScenePattern::Checkerboard;
    throw ConfigError("unknown scene pattern '" + std::string(name) + "'");
}

void validate(const SceneSpec& spec) {
    validate(spec.geometry);
    if (spec.duration_us <= 0) {
        throw ConfigError("scene duration must be positive");
    }
    if (!(spec.intensity_floor > 0.0) || spec.intensity_floor > 0.1) {
        throw ConfigError("intensity floor must be in (0, 0.1]");
    }
    if (!std::isfinite(spec.velocity_px_per_s)) {
        throw ConfigError("velocity must be finite");
    }
}

GrayImage render_frame_at(const SceneSpec& spec, Timestamp t) {
    validate(spec);
    const double disp = displacement_px(spec, t);
    GrayImage img = GrayImage::constant(spec.geometry, 0.0);
    for (int y = 0; y < spec.geometry.height; ++y) {
        for (int x = 0; x < spec.geometry.width; ++x) {
            const double v = pattern_value(spec, double(x) - disp, y);
            img.at(x, y) = std::max(v, spec.intensity_floor);
        }
    }
    return img;
}

LatentVideo render_scene(const SceneSpec& spec, Timestamp sample_period_us) {
    validate(spec);
    if (sample_period_us < 1) {
        throw ConfigError("sample period must be at least 1 us");
    }
    if (spec.duration_us / sample_period_us > 1'000'000) {
        throw ConfigError("scene would exceed 1e6 sample frames");
    }
    LatentVideo video;
    for (Timestamp t = 0; t < spec.duration_us; t += sample_period_us) {
        video.timestamps.push_back(t);
        video.frames.push_back(render_frame_at(spec, t));
    }
    video.timestamps.push_back(spec.duration_us);
    video.frames.push_back(render_frame_at(spec, spec.duration_us));
    return video;
}

std::vector<Event> events_from_video(const LatentVideo& video,
                                     const ContrastParams& cp,
                                     double intensity_floor) {
    validate(cp);
    if (video.frames.size() < 2) {
        throw ConfigError("event generation needs at least two frames");
    }
    const SensorGeometry geom = video.frames.front().geometry();
    for (const GrayImage& frame : video.frames) {
        if (frame.geometry() != geom) {
            throw GeometryError("video frames have mismatched geometry");
        }
    }

    const std::size_t n_px = std::size_t(geom.pixel_count());
    std::vector<double> r_prev(n_px), r_ref(n_px);
    for (std::size_t i = 0; i < n_px; ++i) {
        r_prev[i] = std::log(std::max(video.frames[0].data[i], intensity_floor));
        r_ref[i] = r_prev[i];
    }

    // Allows crossings that land exactly on a threshold despite rounding.
    constexpr double kCrossEps = 1e-9;

    std::vector<Event> events;
    for (std::size_t j = 1; j < video.frames.size(); ++j) {
        const double t0 = double(video.timestamps[j - 1]);
        const double t1 = double(video.timestamps[j]);
        const GrayImage& frame = video.frames[j];
        for (int y = 0; y < geom.height; ++y) {
            for (int x = 0; x < geom.width; ++x) {
                const std::size_t px = std::size_t(y) * geom.width + x;
                const double r_cur =
                    std::log(std::max(frame.at(x, y), intensity_floor));
                const double span = r_cur - r_prev[px];
                if (span > 0.0) {
                    while (r_cur - r_ref[px] >= cp.c_on - kCrossEps) {
                        const double target = r_ref[px] + cp.c_on;
                        const double f =
                            std::clamp((target - r_prev[px]) / span, 0.0, 1.0);
                        events.push_back(Event{
                            Timestamp(std::llround(t0 + f * (t1 - t0))),
                            std::uint16_t(x), std::uint16_t(y), +1});
                        r_ref[px] = target;
                    }
                } else if (span < 0.0) {
                    while (r_cur - r_ref[px] <= cp.c_off + kCrossEps) {
                        const double target = r_ref[px] + cp.c_off;
                        const double f =
                            std::clamp((target - r_prev[px]) / span, 0.0, 1.0);
                        events.push_back(Event{
                            Timestamp(std::llround(t0 + f * (t1 - t0))),
                            std::uint16_t(x), std::uint16_t(y), -1});
                        r_ref[px] = target;
                    }
                }
                r_prev[px] = r_cur;
            }
        }
    }

    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) {
                         if (a.t != b.t) return a.t < b.t;
                         if (a.y != b.y) return a.y < b.y;
                         return a.x < b.x;
                     });
    return events;
}

GrayImage blur_from_video(const LatentVideo& video,
                          const ExposureWindow& window) {
    validate(window);
    if (video.frames.empty()) {
        throw ConfigError("empty video");
    }
    if (video.timestamps.front() > window.t_start ||
        video.timestamps.back() < window.t_end) {
        throw WindowError("video does not cover the exposure window");
    }

    const SensorGeometry geom = video.frames.front().geometry();
    const std::size_t n_px = std::size_t(geom.pixel_count());
    std::vector<double> acc(n_px, 0.0);

    for (std::size_t j = 0; j + 1 < video.frames.size(); ++j) {
        const double tj = double(video.timestamps[j]);
        const double tj1 = double(video.timestamps[j + 1]);
        const double a = std::max(tj, double(window.t_start));
        const double b = std::min(tj1, double(window.t_end));
        if (b <= a) continue;
        // u = normalized position inside the sample interval; trapezoid of
        // the linear interpolant over [a, b].
        const double inv_len = 1.0 / (tj1 - tj);
        const double u_mid = ((a - tj) + (b - tj)) * 0.5 * inv_len;
        const double w0 = (b - a) * (1.0 - u_mid);
        const double w1 = (b - a) * u_mid;
        const double* lo = video.frames[j].data.data();
        const double* hi = video.frames[j + 1].data.data();
        for (std::size_t px = 0; px < n_px; ++px) {
            acc[px] += w0 * lo[px] + w1 * hi[px];
        }
    }

    GrayImage out = GrayImage::constant(geom, 0.0);
    const double inv_t = 1.0 / double(window.duration_us());
    for (std::size_t px = 0; px < n_px; ++px) {
        out.data[px] = std::clamp(acc[px] * inv_t, 0.0, 1.0);
    }
    return out;
}

Dataset make_dataset(const SceneSpec& spec, const ContrastParams& cp,
                     double frame_rate_hz, double exposure_fraction,
                     Timestamp sample_period_us) {
    validate(spec);
    validate(cp);
    if (!(frame_rate_hz >= 1.0)) {
        throw ConfigError("frame rate must be at least 1 fps");
    }
    if (!(exposure_fraction > 0.0) || exposure_fraction > 1.0) {
        throw ConfigError("exposure fraction must be in (0, 1]");
    }

    const double period_us = 1e6 / frame_rate_hz;
    const auto exposure_us =
        std::max<Timestamp>(1, std::llround(exposure_fraction * period_us));

    Dataset ds;
    ds.geometry = spec.geometry;
    ds.contrast = cp;

    const LatentVideo video = render_scene(spec, sample_period_us);
    ds.events = events_from_video(video, cp, spec.intensity_floor);

    for (std::size_t i = 0;; ++i) {
        const auto t_start = Timestamp(std::llround(double(i) * period_us));
        const ExposureWindow window{t_start, t_start + exposure_us};
        if (window.t_end > spec.duration_us) break;
        ds.frames.push_back(FrameRecord{blur_from_video(video, window), window});
        ds.ground_truth.push_back(render_frame_at(spec, t_start));
    }
    if (ds.frames.empty()) {
        throw ConfigError("scene too short for a single exposure");
    }
    return ds;
}

}  // namespace fedi
