#include "fedi/fast_edi.hpp"

#include <cmath>
#include <limits>

#include "fedi/baseline.hpp"

namespace fedi {

using Clock = std::chrono::steady_clock;

EdiAccumulator::EdiAccumulator(SensorGeometry geom, IntegrationMode mode)
    : geom_(geom), mode_(mode) {
    validate(geom_);
    const std::size_t n_px = std::size_t(geom_.pixel_count());
    s_.assign(n_px, 0.0);
    lists_.resize(n_px);
}

void EdiAccumulator::set_list_cap(std::size_t cap) {
    if (exposing_) {
        throw StateError("cannot change list cap during an exposure");
    }
    list_cap_ = cap;
    if (cap > 0 && spill_.empty()) {
        spill_.assign(std::size_t(geom_.pixel_count()), 0.0);
    }
}

void EdiAccumulator::begin_exposure(Timestamp t_start) {
    if (exposing_) {
        throw StateError("begin_exposure while an exposure is already open");
    }
    // end_exposure already reset the touched pixels; nothing to scrub here.
    exposing_ = true;
    t_start_ = t_start;
    last_t_ = std::numeric_limits<Timestamp>::min();
    counter_ = 0;
    step1_elapsed_ = std::chrono::nanoseconds{0};
}

bool EdiAccumulator::push_event(const Event& e, const ContrastParams& cp) {
    if (!exposing_) {
        throw StateError("push_event with no open exposure");
    }
    if (e.t < last_t_) {
        throw OrderingError("event timestamp decreased: " + std::to_string(e.t) +
                            " after " + std::to_string(last_t_));
    }
    last_t_ = e.t;
    ++stats_.events_in;
    if (e.t <= t_start_) {
        ++stats_.events_dropped_pre_exposure;
        return false;
    }
    if (!geom_.contains(e.x, e.y)) {
        throw GeometryError("event at (" + std::to_string(e.x) + ", " +
                            std::to_string(e.y) + ") outside sensor");
    }

    const std::size_t px = std::size_t(e.y) * geom_.width + e.x;
    auto& list = lists_[px];
    if (list.empty()) {
        touched_.push_back(std::uint32_t(px));
    }
    s_[px] += signed_contrast(e.p, cp);
    const double v = std::exp(s_[px]);
    ++counter_;
    const std::int64_t marker = mode_ == IntegrationMode::TimeWeighted
                                    ? std::int64_t(e.t)
                                    : std::int64_t(counter_);
    if (list_cap_ > 0 && list.size() >= list_cap_) {
        // Overwriting the tail stretches its predecessor's marker gap up to
        // the new marker, so fold the difference term into the spill: the
        // tail's own contribution minus what the predecessor now overcounts.
        PixelEntry& tail = list.back();
        const double prev_v =
            list.size() >= 2 ? list[list.size() - 2].v : 1.0;
        spill_[px] += (tail.v - prev_v) * double(marker - tail.marker);
        tail = PixelEntry{v, marker};
    } else {
        list.push_back(PixelEntry{v, marker});
    }
    return true;
}

DeblurResult EdiAccumulator::end_exposure(Timestamp t_end,
                                          const GrayImage& blurry,
                                          const ContrastParams& cp) {
    validate(cp);
    if (!exposing_) {
        throw StateError("end_exposure with no open exposure");
    }
    if (t_end <= t_start_) {
        throw WindowError("t_end " + std::to_string(t_end) +
                          " not after t_start " + std::to_string(t_start_));
    }
    if (counter_ > 0 && t_end < last_t_) {
        throw WindowError("t_end " + std::to_string(t_end) +
                          " precedes last pushed event at " +
                          std::to_string(last_t_));
    }
    if (blurry.geometry() != geom_) {
        throw GeometryError("blurry frame geometry does not match accumulator");
    }

    const auto step2_begin = Clock::now();

    EdiMap edi = EdiMap::ones(geom_);
    if (mode_ == IntegrationMode::TimeWeighted) {
        const double inv_t = 1.0 / double(t_end - t_start_);
        for (const std::uint32_t px : touched_) {
            const auto& list = lists_[px];
            const std::size_t n = list.size();
            double acc = double(list[0].marker - t_start_);  // latent 1 until first event
            for (std::size_t i = 0; i + 1 < n; ++i) {
                acc += list[i].v * double(list[i + 1].marker - list[i].marker);
            }
            acc += list[n - 1].v * double(t_end - list[n - 1].marker);
            if (!spill_.empty()) acc += spill_[px];
            const double e = acc * inv_t;
            if (!(e > 0.0) || !std::isfinite(e)) {
                throw Error("EDI value not finite positive at pixel " +
                            std::to_string(px));
            }
            edi.e[px] = e;
        }
    } else if (counter_ > 0) {
        const double n_total = double(counter_);
        const double inv_n = 1.0 / n_total;
        for (const std::uint32_t px : touched_) {
            const auto& list = lists_[px];
            const std::size_t n = list.size();
            // (k1 - 1) frames saw this pixel still at latent 1; the final
            // entry is counted from its own addition through event N.
            double acc = double(list[0].marker - 1);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                acc += list[i].v * double(list[i + 1].marker - list[i].marker);
            }
            acc += list[n - 1].v * (n_total - double(list[n - 1].marker) + 1.0);
            if (!spill_.empty()) acc += spill_[px];
            const double e = acc * inv_n;
            if (!(e > 0.0) || !std::isfinite(e)) {
                throw Error("EDI value not finite positive at pixel " +
                            std::to_string(px));
            }
            edi.e[px] = e;
        }
    }

    DeblurResult result;
    result.latent = deblur_with_map(blurry, edi);
    result.edi_map = std::move(edi);
    result.events_processed = counter_;
    result.step1_time = step1_elapsed_;
    result.step2_time =
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() -
                                                             step2_begin);

    // Back to idle: scrub only what this exposure touched, keep capacity.
    for (const std::uint32_t px : touched_) {
        s_[px] = 0.0;
        lists_[px].clear();
        if (!spill_.empty()) spill_[px] = 0.0;
    }
    touched_.clear();
    exposing_ = false;
    ++stats_.frames_emitted;
    stats_.peak_list_bytes =
        std::max(stats_.peak_list_bytes,
                 reserved_entry_capacity() * sizeof(PixelEntry));
    return result;
}

std::size_t EdiAccumulator::total_entries() const {
    std::size_t n = 0;
    for (const auto& list : lists_) n += list.size();
    return n;
}

std::size_t EdiAccumulator::reserved_entry_capacity() const {
    std::size_t n = 0;
    for (const auto& list : lists_) n += list.capacity();
    return n;
}

void EdiAccumulator::note_dropped(std::uint64_t n) {
    stats_.events_in += n;
    stats_.events_dropped_pre_exposure += n;
}

std::vector<DeblurResult> run_offline(std::span<const Event> events,
                                      std::span<const FrameRecord> frames,
                                      const ContrastParams& cp,
                                      const SensorGeometry& geom,
                                      IntegrationMode mode) {
    validate(geom);
    validate(cp);
    require_sorted(events);
    for (std::size_t i = 0; i < frames.size(); ++i) {
        validate(frames[i].window);
        if (i > 0 && frames[i].window.t_start < frames[i - 1].window.t_end) {
            throw ConfigError("exposure windows overlap at frame " +
                              std::to_string(i));
        }
    }

    EdiAccumulator acc(geom, mode);
    std::vector<DeblurResult> results;
    results.reserve(frames.size());

    std::size_t i = 0;
    for (const FrameRecord& frame : frames) {
        const ExposureWindow& w = frame.window;
        std::uint64_t dropped = 0;
        while (i < events.size() && events[i].t <= w.t_start) {
            ++dropped;
            ++i;
        }
        acc.note_dropped(dropped);
        acc.begin_exposure(w.t_start);
        const auto push_begin = Clock::now();
        while (i < events.size() && events[i].t <= w.t_end) {
            acc.push_event(events[i], cp);
            ++i;
        }
        acc.add_step1_time(std::chrono::duration_cast<std::chrono::nanoseconds>(
            Clock::now() - push_begin));
        results.push_back(acc.end_exposure(w.t_end, frame.image, cp));
    }
    acc.note_dropped(events.size() - i);  // after the final exposure
    return results;
}

double throughput_probe(EdiAccumulator& acc, std::span<const Event> batch,
                        const ContrastParams& cp) {
    if (!acc.exposing()) {
        throw StateError("throughput_probe requires an open exposure");
    }
    if (batch.empty()) return 0.0;
    const auto begin = Clock::now();
    for (const Event& e : batch) {
        acc.push_event(e, cp);
    }
    const auto elapsed = Clock::now() - begin;
    acc.add_step1_time(
        std::chrono::duration_cast<std::chrono::nanoseconds>(elapsed));
    const double seconds =
        std::chrono::duration_cast<std::chrono::duration<double>>(elapsed)
            .count();
    return seconds > 0.0 ? double(batch.size()) / seconds
                         : std::numeric_limits<double>::infinity();
}

}  // namespace fedi
