#include "fedi/baseline.hpp"

#include <algorithm>
#include <cmath>

namespace fedi {

namespace {

std::size_t pixel_index(const SensorGeometry& geom, const Event& e) {
    if (!geom.contains(e.x, e.y)) {
        throw GeometryError("event at (" + std::to_string(e.x) + ", " +
                            std::to_string(e.y) + ") outside " +
                            std::to_string(geom.width) + "x" +
                            std::to_string(geom.height) + " sensor");
    }
    return std::size_t(e.y) * geom.width + e.x;
}

}  // namespace

EdiMap compute_edi_baseline(std::span<const Event> events,
                            const ExposureWindow& window,
                            const ContrastParams& cp,
                            const SensorGeometry& geom, IntegrationMode mode) {
    validate(geom);
    validate(window);
    validate(cp);
    require_sorted(events);
    for (const Event& e : events) {
        if (!window.contains(e.t)) {
            throw WindowError("event at t=" + std::to_string(e.t) +
                              " outside exposure (" +
                              std::to_string(window.t_start) + ", " +
                              std::to_string(window.t_end) + "]");
        }
    }

    const std::size_t n_px = std::size_t(geom.pixel_count());
    LatentState state{geom, std::vector<double>(n_px, 0.0),
                      std::vector<double>(n_px, 0.0), 0.0};
    std::vector<double> latent(n_px, 1.0);  // exp(s) held per pixel

    if (mode == IntegrationMode::TimeWeighted) {
        Timestamp t_prev = window.t_start;
        std::size_t i = 0;
        while (i < events.size()) {
            const Timestamp t_seg = events[i].t;
            const double dt = double(t_seg - t_prev);
            if (dt > 0.0) {
                for (std::size_t x = 0; x < n_px; ++x) {
                    state.acc[x] += latent[x] * dt;
                }
                state.weight_total += dt;
            }
            // Apply every event sharing this timestamp before the next segment.
            while (i < events.size() && events[i].t == t_seg) {
                const std::size_t px = pixel_index(geom, events[i]);
                state.s[px] += signed_contrast(events[i].p, cp);
                latent[px] = std::exp(state.s[px]);
                ++i;
            }
            t_prev = t_seg;
        }
        const double dt = double(window.t_end - t_prev);
        if (dt > 0.0) {
            for (std::size_t x = 0; x < n_px; ++x) {
                state.acc[x] += latent[x] * dt;
            }
            state.weight_total += dt;
        }
        EdiMap edi = EdiMap::ones(geom);
        const double inv_t = 1.0 / double(window.duration_us());
        for (std::size_t x = 0; x < n_px; ++x) {
            edi.e[x] = state.acc[x] * inv_t;
        }
        return edi;
    }

    // CountWeighted: add-after-apply, the pre-first-event frame is excluded.
    for (const Event& e : events) {
        const std::size_t px = pixel_index(geom, e);
        state.s[px] += signed_contrast(e.p, cp);
        latent[px] = std::exp(state.s[px]);
        for (std::size_t x = 0; x < n_px; ++x) {
            state.acc[x] += latent[x];
        }
        state.weight_total += 1.0;
    }
    EdiMap edi = EdiMap::ones(geom);
    if (!events.empty()) {
        const double inv_n = 1.0 / double(events.size());
        for (std::size_t x = 0; x < n_px; ++x) {
            edi.e[x] = state.acc[x] * inv_n;
        }
    }
    return edi;
}

GrayImage deblur_with_map(const GrayImage& blurry, const EdiMap& edi) {
    if (blurry.geometry() != edi.geometry()) {
        throw GeometryError("blurry image and EDI map dimensions differ");
    }
    GrayImage out = blurry;
    for (std::size_t x = 0; x < out.data.size(); ++x) {
        const double divisor = std::max(edi.e[x], kEdiFloor);
        out.data[x] = std::clamp(blurry.data[x] / divisor, 0.0, 1.0);
    }
    return out;
}

std::vector<GrayImage> reconstruct_latent(const GrayImage& l0,
                                          std::span<const Event> events,
                                          const ContrastParams& cp,
                                          Timestamp t_ref,
                                          std::span<const Timestamp> targets,
                                          bool clamp_output) {
    validate(cp);
    require_sorted(events);
    const SensorGeometry geom = l0.geometry();
    validate(geom);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] < t_ref) {
            throw WindowError("reconstruction target t=" +
                              std::to_string(targets[i]) +
                              " precedes reference t=" + std::to_string(t_ref));
        }
        if (i > 0 && targets[i] < targets[i - 1]) {
            throw OrderingError("reconstruction targets must be nondecreasing");
        }
    }

    const std::size_t n_px = std::size_t(geom.pixel_count());
    std::vector<double> s(n_px, 0.0);
    std::vector<GrayImage> out;
    out.reserve(targets.size());

    std::size_t i = 0;
    while (i < events.size() && events[i].t <= t_ref) ++i;  // before reference

    for (const Timestamp tau : targets) {
        while (i < events.size() && events[i].t <= tau) {
            const std::size_t px = pixel_index(geom, events[i]);
            s[px] += signed_contrast(events[i].p, cp);
            ++i;
        }
        GrayImage frame = l0;
        for (std::size_t x = 0; x < n_px; ++x) {
            double v = l0.data[x] * std::exp(s[x]);
            frame.data[x] = clamp_output ? std::clamp(v, 0.0, 1.0) : v;
        }
        out.push_back(std::move(frame));
    }
    return out;
}

}  // namespace fedi
