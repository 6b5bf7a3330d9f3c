#include "fedi/core.hpp"

#include <cmath>

namespace fedi {

void validate(const SensorGeometry& geom) {
    if (geom.width < 1 || geom.height < 1) {
        throw GeometryError("sensor geometry must be at least 1x1, got " +
                            std::to_string(geom.width) + "x" +
                            std::to_string(geom.height));
    }
}

void validate(const ContrastParams& cp) {
    if (!(cp.c_on > 0.0) || !std::isfinite(cp.c_on)) {
        throw Error("c_on must be finite and > 0, got " + std::to_string(cp.c_on));
    }
    if (!(cp.c_off < 0.0) || !std::isfinite(cp.c_off)) {
        throw Error("c_off must be finite and < 0, got " + std::to_string(cp.c_off));
    }
}

void validate(const ExposureWindow& w) {
    if (w.t_end <= w.t_start) {
        throw WindowError("exposure window must have positive duration: [" +
                          std::to_string(w.t_start) + ", " +
                          std::to_string(w.t_end) + "]");
    }
}

std::string_view to_string(IntegrationMode mode) {
    return mode == IntegrationMode::TimeWeighted ? "time" : "count";
}

IntegrationMode integration_mode_from_string(std::string_view name) {
    if (name == "time") return IntegrationMode::TimeWeighted;
    if (name == "count") return IntegrationMode::CountWeighted;
    throw ConfigError("unknown integration mode '" + std::string(name) +
                      "' (expected 'time' or 'count')");
}

GrayImage GrayImage::constant(SensorGeometry geom, double value) {
    validate(geom);
    GrayImage img;
    img.width = geom.width;
    img.height = geom.height;
    img.data.assign(std::size_t(geom.pixel_count()), value);
    return img;
}

void validate(const GrayImage& img) {
    validate(SensorGeometry{img.width, img.height});
    if (img.data.size() != std::size_t(img.width) * img.height) {
        throw GeometryError("image data length does not match dimensions");
    }
    for (double v : img.data) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw Error("image intensity out of [0, 1]: " + std::to_string(v));
        }
    }
}

EdiMap EdiMap::ones(SensorGeometry geom) {
    validate(geom);
    EdiMap m;
    m.width = geom.width;
    m.height = geom.height;
    m.e.assign(std::size_t(geom.pixel_count()), 1.0);
    return m;
}

void require_sorted(std::span<const Event> events) {
    for (std::size_t i = 1; i < events.size(); ++i) {
        if (events[i].t < events[i - 1].t) {
            throw OrderingError("event timestamps decrease at index " +
                                std::to_string(i));
        }
    }
}

PolarityCounts count_polarities(std::span<const Event> events, Timestamp from,
                                Timestamp to) {
    if (from > to) {
        throw WindowError("interval start after end");
    }
    require_sorted(events);
    PolarityCounts counts;
    for (const Event& e : events) {
        if (e.t <= from) continue;
        if (e.t > to) break;
        if (e.p > 0) {
            ++counts.on;
        } else {
            ++counts.off;
        }
    }
    return counts;
}

double cumulative_sum(std::span<const Event> events, const ContrastParams& cp,
                      Timestamp from, Timestamp to) {
    const PolarityCounts counts = count_polarities(events, from, to);
    return double(counts.on) * cp.c_on + double(counts.off) * cp.c_off;
}

}  // namespace fedi
