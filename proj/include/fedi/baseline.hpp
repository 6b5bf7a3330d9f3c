#pragma once

#include <span>
#include <vector>

#include "fedi/core.hpp"

namespace fedi {

// Working state of the array-like reference implementation: per-pixel signed
// log change s, the per-pixel weighted accumulator, and the total weight
// (elapsed microseconds or event count, depending on mode).
struct LatentState {
    SensorGeometry geometry;
    std::vector<double> s;
    std::vector<double> acc;
    double weight_total = 0.0;
};

// Reference EDI: per event, the whole latent frame exp(s(.)) is added into
// the accumulator (frame-wise outer integral), so cost is O(N_ev * N_x).
// Deliberately straightforward; serves as the correctness oracle for the
// streaming engine and as the slow side of the speedup benchmark.
//
// The reference time f is fixed at window.t_start. Events must be sorted and
// inside (t_start, t_end].
//
// TimeWeighted: the window is partitioned at distinct event timestamps;
// each segment contributes exp(s) * dt per pixel, E = acc / T. Duplicate
// timestamps form zero-width segments that contribute nothing but still
// update s.
//
// CountWeighted: each event first updates s, then the whole frame exp(s(.))
// is added once; E = acc / N. With no events, E is identically 1.
EdiMap compute_edi_baseline(std::span<const Event> events,
                            const ExposureWindow& window,
                            const ContrastParams& cp,
                            const SensorGeometry& geom, IntegrationMode mode);

// L(x) = clamp(B(x) / max(E(x), 1e-12), 0, 1). The floor guards exp
// underflow; mathematically E > 0 always.
GrayImage deblur_with_map(const GrayImage& blurry, const EdiMap& edi);

inline constexpr double kEdiFloor = 1e-12;

// Latent frames at the requested timestamps (all >= t_ref, nondecreasing):
// L(tau, x) = l0(x) * exp(sum of signed thresholds over (t_ref, tau]).
// Propagation happens in unclamped space; clamping to [0, 1] is applied only
// to the output. Pass clamp_output = false for the raw values (used by the
// blur-consistency checks).
std::vector<GrayImage> reconstruct_latent(const GrayImage& l0,
                                          std::span<const Event> events,
                                          const ContrastParams& cp,
                                          Timestamp t_ref,
                                          std::span<const Timestamp> targets,
                                          bool clamp_output = true);

}  // namespace fedi
