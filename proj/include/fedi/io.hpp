#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fedi/contrast.hpp"
#include "fedi/core.hpp"

namespace fedi {

// Plain-text event format: one "t_us x y p" line per event, '#' lines are
// comments, p is 1 for ON and 0 for OFF. Timestamps must be nondecreasing.
// Text was chosen over a binary container for auditability; benchmarks load
// files fully before timing, so parsing never touches the ev/s numbers.
std::vector<Event> read_events(const std::filesystem::path& path,
                               std::optional<SensorGeometry> geom = {});

void write_events(std::span<const Event> events,
                  const std::filesystem::path& path);

// Binary 8-bit PGM (P5, maxval 255). Reading maps v -> v/255; writing maps
// x -> round(255 * clamp(x, 0, 1)) half-up, so a round trip moves a pixel by
// at most 1/510.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

struct ManifestFrame {
    std::string image;
    Timestamp t_start_us = 0;
    Timestamp t_end_us = 0;
    std::optional<std::string> ground_truth;
};

// Dataset descriptor. Paths are relative to the manifest's directory.
struct DatasetManifest {
    SensorGeometry geometry;
    std::string event_file;
    std::vector<ManifestFrame> frames;
    std::optional<HardwareParams> hardware;
    std::optional<ContrastParams> contrast_override;
    IntegrationMode mode = IntegrationMode::TimeWeighted;
};

void validate(const DatasetManifest& manifest);

// Strict JSON parse: unknown keys are rejected so a typo in a hardware
// parameter cannot silently fall back to a default.
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path);

// A manifest plus everything it references, loaded and validated.
struct LoadedDataset {
    DatasetManifest manifest;
    std::filesystem::path base_dir;
    std::vector<Event> events;
    std::vector<FrameRecord> frames;
    std::vector<std::optional<GrayImage>> ground_truth;
};

LoadedDataset load_dataset(const std::filesystem::path& manifest_path);

// Contrast for a loaded dataset: the explicit override wins, otherwise the
// hardware block is run through contrast_from_hardware.
ContrastParams resolve_contrast(const DatasetManifest& manifest);

}  // namespace fedi
