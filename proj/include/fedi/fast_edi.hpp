#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "fedi/core.hpp"

namespace fedi {

// One list entry: the latent pixel value exp(s) at the moment of an event,
// paired with its marker (event timestamp in TimeWeighted mode, the global
// event ordinal after increment in CountWeighted mode). Markers are
// nondecreasing within one pixel's list.
struct PixelEntry {
    double v = 1.0;
    std::int64_t marker = 0;
};

// Session counters. peak_list_bytes tracks the container footprint that the
// per-event memory growth costs; it is sampled at each finalize.
struct StreamStats {
    std::uint64_t events_in = 0;
    std::uint64_t events_dropped_pre_exposure = 0;
    std::uint64_t frames_emitted = 0;
    std::size_t peak_list_bytes = 0;
};

struct DeblurResult {
    GrayImage latent;
    EdiMap edi_map;
    std::uint64_t events_processed = 0;
    std::chrono::nanoseconds step1_time{0};
    std::chrono::nanoseconds step2_time{0};
};

// Streaming two-step EDI over per-pixel growable lists.
//
// Step 1 (push_event, during exposure): the event's threshold folds into the
// pixel's running log sum s, and <exp(s), marker> is appended to that pixel's
// list -- amortized O(1), exactly one pixel touched per event.
//
// Step 2 (end_exposure): per touched pixel, E is the sum of each stored
// latent value times the marker gap to its successor, plus the boundary
// terms; untouched pixels get E = 1. Finalize cost is O(N_ev + N_x) instead
// of the frame-wise O(N_ev * N_x).
//
// One accumulator serves one logical stream, single-threaded by contract; it
// may move between threads but never be shared concurrently. List capacity is
// retained across frames so steady-state operation does not allocate.
class EdiAccumulator {
public:
    EdiAccumulator(SensorGeometry geom,
                   IntegrationMode mode = IntegrationMode::TimeWeighted);

    // Opens a new exposure at t_start. The accumulator must be idle.
    void begin_exposure(Timestamp t_start);

    // Streams one event. Events at or before t_start are rejected (counted,
    // state untouched, returns false). Timestamps must be nondecreasing
    // within the exposure; a decrease throws OrderingError.
    bool push_event(const Event& e, const ContrastParams& cp);

    // Closes the exposure, computes the EDI map and the deblurred frame, and
    // returns the accumulator to idle with list capacity retained.
    DeblurResult end_exposure(Timestamp t_end, const GrayImage& blurry,
                              const ContrastParams& cp);

    bool exposing() const { return exposing_; }
    IntegrationMode mode() const { return mode_; }
    SensorGeometry geometry() const { return geom_; }
    Timestamp exposure_start() const { return t_start_; }
    const StreamStats& stats() const { return stats_; }

    // Events accepted in the current exposure (the global addition counter).
    std::uint64_t events_this_exposure() const { return counter_; }

    // Total stored entries / reserved capacity across all pixel lists.
    std::size_t total_entries() const;
    std::size_t reserved_entry_capacity() const;

    // Per-pixel list cap; 0 (default) means unlimited. When a list is full,
    // the tail entry's pending contribution is folded into a per-pixel spill
    // term and the tail is overwritten, bounding memory on pathological hot
    // pixels.
    void set_list_cap(std::size_t cap);
    std::size_t list_cap() const { return list_cap_; }

    // Batch drivers record the wall time of their push loops here; it is
    // reported as step1_time by the next end_exposure. Reset by
    // begin_exposure.
    void add_step1_time(std::chrono::nanoseconds d) { step1_elapsed_ += d; }

    // Inter-frame drops observed by an external router (see run_offline).
    void note_dropped(std::uint64_t n);

private:
    SensorGeometry geom_;
    IntegrationMode mode_;
    std::vector<double> s_;
    std::vector<std::vector<PixelEntry>> lists_;
    std::vector<double> spill_;  // allocated only when a cap is set
    std::vector<std::uint32_t> touched_;
    std::uint64_t counter_ = 0;
    Timestamp t_start_ = 0;
    Timestamp last_t_ = 0;
    bool exposing_ = false;
    std::size_t list_cap_ = 0;
    std::chrono::nanoseconds step1_elapsed_{0};
    StreamStats stats_;
};

// Batch driver over a recorded dataset: routes each frame's in-window events
// through one reused accumulator. Events outside every exposure are dropped
// and counted. Frames must be time-sorted with non-overlapping windows.
std::vector<DeblurResult> run_offline(std::span<const Event> events,
                                      std::span<const FrameRecord> frames,
                                      const ContrastParams& cp,
                                      const SensorGeometry& geom,
                                      IntegrationMode mode);

// Pushes the batch on the calling thread and returns events per second of
// wall time. An empty batch returns 0.
double throughput_probe(EdiAccumulator& acc, std::span<const Event> batch,
                        const ContrastParams& cp);

}  // namespace fedi
