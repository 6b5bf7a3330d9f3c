#pragma once

#include <chrono>
#include <cstdint>
#include <span>

#include "fedi/core.hpp"

namespace fedi {

// Peak signal-to-noise ratio against peak 1.0 (normalized intensities).
// Identical images yield +infinity; serialized reports encode that as the
// sentinel kPsnrInfinity.
double psnr(const GrayImage& a, const GrayImage& b);

inline constexpr double kPsnrInfinity = 999.0;

// Sentinel-mapped value for text/JSON output.
double psnr_for_report(double psnr_db);

// Variance of the 4-neighbor Laplacian over interior pixels; a cheap
// no-reference sharpness proxy (higher = sharper). Needs at least 3x3.
double laplacian_variance(const GrayImage& img);

// Per-frame engine timings as recorded by a driver.
struct FrameTiming {
    std::uint64_t events = 0;
    std::chrono::nanoseconds step1{0};
    std::chrono::nanoseconds step2{0};
};

struct ThroughputReport {
    std::uint64_t events_total = 0;
    double wall_time_s = 0.0;
    double ev_per_sec = 0.0;
    double per_frame_step1_s = 0.0;
    double per_frame_step2_s = 0.0;
    std::size_t peak_queue_depth = 0;
};

// Aggregates per-frame timings; wall time covers push/finalize work only.
// With more than one frame the first is treated as warm-up and excluded
// from every aggregate, counts included, so the ev_per_sec identity holds.
ThroughputReport record_throughput(std::span<const FrameTiming> frames);

}  // namespace fedi
