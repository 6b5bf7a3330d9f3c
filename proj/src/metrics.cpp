#include "fedi/metrics.hpp"

#include <cmath>
#include <limits>

namespace fedi {

double psnr(const GrayImage& a, const GrayImage& b) {
    if (a.geometry() != b.geometry()) {
        throw GeometryError("psnr inputs have mismatched dimensions");
    }
    if (a.data.empty()) {
        throw GeometryError("psnr of an empty image");
    }
    double mse = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        mse += d * d;
    }
    mse /= double(a.data.size());
    if (mse == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(1.0 / mse);
}

double psnr_for_report(double psnr_db) {
    return std::isfinite(psnr_db) ? psnr_db : kPsnrInfinity;
}

double laplacian_variance(const GrayImage& img) {
    if (img.width < 3 || img.height < 3) {
        throw GeometryError("laplacian variance needs at least a 3x3 image");
    }
    const std::size_t n = std::size_t(img.width - 2) * (img.height - 2);
    double sum = 0.0, sum_sq = 0.0;
    for (int y = 1; y + 1 < img.height; ++y) {
        for (int x = 1; x + 1 < img.width; ++x) {
            const double lap = img.at(x - 1, y) + img.at(x + 1, y) +
                               img.at(x, y - 1) + img.at(x, y + 1) -
                               4.0 * img.at(x, y);
            sum += lap;
            sum_sq += lap * lap;
        }
    }
    const double mean = sum / double(n);
    return sum_sq / double(n) - mean * mean;
}

ThroughputReport record_throughput(std::span<const FrameTiming> frames) {
    if (frames.empty()) {
        throw Error("throughput report over an empty session");
    }
    // Skip the warm-up frame when there is anything after it.
    const std::size_t first = frames.size() > 1 ? 1 : 0;
    ThroughputReport report;
    std::chrono::nanoseconds step1{0}, step2{0};
    for (std::size_t i = first; i < frames.size(); ++i) {
        report.events_total += frames[i].events;
        step1 += frames[i].step1;
        step2 += frames[i].step2;
    }
    const std::size_t count = frames.size() - first;
    const auto to_s = [](std::chrono::nanoseconds d) {
        return std::chrono::duration_cast<std::chrono::duration<double>>(d)
            .count();
    };
    report.wall_time_s = to_s(step1 + step2);
    report.ev_per_sec = report.wall_time_s > 0.0
                            ? double(report.events_total) / report.wall_time_s
                            : 0.0;
    report.per_frame_step1_s = to_s(step1) / double(count);
    report.per_frame_step2_s = to_s(step2) / double(count);
    return report;
}

}  // namespace fedi
