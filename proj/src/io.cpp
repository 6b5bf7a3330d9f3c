#include "fedi/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace fedi {

namespace {

using nlohmann::json;

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line,
                            const std::string& what) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": " + what);
}

// Parses one integer field, advancing past leading spaces.
template <typename T>
bool parse_field(const char*& cursor, const char* end, T& out) {
    while (cursor < end && *cursor == ' ') ++cursor;
    const auto [next, ec] = std::from_chars(cursor, end, out);
    if (ec != std::errc{}) return false;
    cursor = next;
    return true;
}

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.contains(key)) {
            throw IoError("unknown key '" + key + "' in " + where);
        }
    }
}

json geometry_to_json(const SensorGeometry& geom) {
    return json{{"width", geom.width}, {"height", geom.height}};
}

}  // namespace

std::vector<Event> read_events(const std::filesystem::path& path,
                               std::optional<SensorGeometry> geom) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open event file " + path.string());
    }
    std::vector<Event> events;
    std::string line;
    std::size_t line_no = 0;
    Timestamp last_t = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const char* cursor = line.data();
        const char* end = line.data() + line.size();
        std::int64_t t = 0;
        int x = 0, y = 0, p = 0;
        if (!parse_field(cursor, end, t) || !parse_field(cursor, end, x) ||
            !parse_field(cursor, end, y) || !parse_field(cursor, end, p)) {
            fail_line(path, line_no, "malformed event line");
        }
        while (cursor < end && *cursor == ' ') ++cursor;
        if (cursor != end) {
            fail_line(path, line_no, "trailing characters after event");
        }
        if (t < 0) {
            fail_line(path, line_no, "negative timestamp");
        }
        if (p != 0 && p != 1) {
            fail_line(path, line_no, "polarity must be 0 or 1");
        }
        if (x < 0 || y < 0 || x > 0xFFFF || y > 0xFFFF) {
            fail_line(path, line_no, "coordinate out of range");
        }
        if (geom && !geom->contains(x, y)) {
            fail_line(path, line_no,
                      "coordinate outside " + std::to_string(geom->width) + "x" +
                          std::to_string(geom->height) + " sensor");
        }
        if (t < last_t) {
            fail_line(path, line_no, "timestamp decreased");
        }
        last_t = t;
        events.push_back(Event{t, std::uint16_t(x), std::uint16_t(y),
                               std::int8_t(p == 1 ? +1 : -1)});
    }
    return events;
}

void write_events(std::span<const Event> events,
                  const std::filesystem::path& path) {
    require_sorted(events);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "# t_us x y p\n";
    char buf[64];
    for (const Event& e : events) {
        const int n = std::snprintf(buf, sizeof buf, "%lld %u %u %d\n",
                                    static_cast<long long>(e.t), unsigned(e.x),
                                    unsigned(e.y), e.p > 0 ? 1 : 0);
        out.write(buf, n);
    }
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open PGM " + path.string());
    }
    // Header tokens may be separated by arbitrary whitespace and '#' comments.
    auto next_token = [&]() -> std::string {
        std::string token;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') {
                while ((c = in.get()) != EOF && c != '\n') {
                }
                continue;
            }
            if (std::isspace(c)) {
                if (!token.empty()) break;
                continue;
            }
            token.push_back(char(c));
        }
        return token;
    };

    if (next_token() != "P5") {
        throw IoError(path.string() + ": not a binary PGM (P5) file");
    }
    int width = 0, height = 0, maxval = 0;
    try {
        width = std::stoi(next_token());
        height = std::stoi(next_token());
        maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        throw IoError(path.string() + ": malformed PGM header");
    }
    if (width < 1 || height < 1) {
        throw IoError(path.string() + ": bad PGM dimensions");
    }
    if (maxval != 255) {
        throw IoError(path.string() + ": only maxval 255 is supported, got " +
                      std::to_string(maxval));
    }

    const std::size_t n = std::size_t(width) * height;
    std::vector<unsigned char> bytes(n);
    in.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(n));
    if (std::size_t(in.gcount()) != n) {
        throw IoError(path.string() + ": truncated PGM payload");
    }

    GrayImage img;
    img.width = width;
    img.height = height;
    img.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        img.data[i] = double(bytes[i]) / 255.0;
    }
    return img;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    validate(SensorGeometry{img.width, img.height});
    if (img.data.size() != std::size_t(img.width) * img.height) {
        throw GeometryError("image data length does not match dimensions");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> bytes(img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double v = std::clamp(img.data[i], 0.0, 1.0);
        bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              std::streamsize(bytes.size()));
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

void validate(const DatasetManifest& manifest) {
    validate(manifest.geometry);
    if (manifest.event_file.empty()) {
        throw ConfigError("manifest is missing an event file");
    }
    for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
        const ManifestFrame& f = manifest.frames[i];
        validate(ExposureWindow{f.t_start_us, f.t_end_us});
        if (i > 0 && f.t_start_us < manifest.frames[i - 1].t_end_us) {
            throw ConfigError("manifest frames unsorted or overlapping at index " +
                              std::to_string(i));
        }
    }
    if (manifest.hardware) {
        validate(*manifest.hardware);
    }
    if (manifest.contrast_override) {
        validate(*manifest.contrast_override);
    }
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open manifest " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw IoError("manifest " + path.string() + ": " + e.what());
    }

    try {
        require_keys(doc,
                     {"geometry", "event_file", "frames", "hardware",
                      "contrast_override", "mode"},
                     "manifest");
        DatasetManifest m;
        const json& g = doc.at("geometry");
        require_keys(g, {"width", "height"}, "geometry");
        m.geometry = {g.at("width").get<int>(), g.at("height").get<int>()};
        m.event_file = doc.at("event_file").get<std::string>();
        m.mode = integration_mode_from_string(doc.at("mode").get<std::string>());
        for (const json& jf : doc.at("frames")) {
            require_keys(jf, {"image", "t_start_us", "t_end_us", "ground_truth"},
                         "frame");
            ManifestFrame f;
            f.image = jf.at("image").get<std::string>();
            f.t_start_us = jf.at("t_start_us").get<Timestamp>();
            f.t_end_us = jf.at("t_end_us").get<Timestamp>();
            if (jf.contains("ground_truth")) {
                f.ground_truth = jf.at("ground_truth").get<std::string>();
            }
            m.frames.push_back(std::move(f));
        }
        if (doc.contains("hardware")) {
            const json& h = doc.at("hardware");
            require_keys(h,
                         {"kappa_n", "kappa_p", "cap_c1", "cap_c2", "i_d",
                          "i_on", "i_off"},
                         "hardware");
            m.hardware = HardwareParams{
                h.at("kappa_n").get<double>(), h.at("kappa_p").get<double>(),
                h.at("cap_c1").get<double>(),  h.at("cap_c2").get<double>(),
                h.at("i_d").get<double>(),     h.at("i_on").get<double>(),
                h.at("i_off").get<double>()};
        }
        if (doc.contains("contrast_override")) {
            const json& c = doc.at("contrast_override");
            require_keys(c, {"c_on", "c_off"}, "contrast_override");
            m.contrast_override = ContrastParams{c.at("c_on").get<double>(),
                                                 c.at("c_off").get<double>()};
        }
        validate(m);
        return m;
    } catch (const json::exception& e) {
        throw IoError("manifest " + path.string() + ": " + e.what());
    }
}

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path) {
    validate(manifest);
    json doc;
    doc["geometry"] = geometry_to_json(manifest.geometry);
    doc["event_file"] = manifest.event_file;
    doc["mode"] = std::string(to_string(manifest.mode));
    doc["frames"] = json::array();
    for (const ManifestFrame& f : manifest.frames) {
        json jf{{"image", f.image},
                {"t_start_us", f.t_start_us},
                {"t_end_us", f.t_end_us}};
        if (f.ground_truth) {
            jf["ground_truth"] = *f.ground_truth;
        }
        doc["frames"].push_back(std::move(jf));
    }
    if (manifest.hardware) {
        const HardwareParams& h = *manifest.hardware;
        doc["hardware"] = json{{"kappa_n", h.kappa_n}, {"kappa_p", h.kappa_p},
                               {"cap_c1", h.cap_c1},   {"cap_c2", h.cap_c2},
                               {"i_d", h.i_d},         {"i_on", h.i_on},
                               {"i_off", h.i_off}};
    }
    if (manifest.contrast_override) {
        doc["contrast_override"] = json{{"c_on", manifest.contrast_override->c_on},
                                        {"c_off", manifest.contrast_override->c_off}};
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << doc.dump(2) << "\n";
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

LoadedDataset load_dataset(const std::filesystem::path& manifest_path) {
    LoadedDataset ds;
    ds.manifest = read_manifest(manifest_path);
    ds.base_dir = manifest_path.parent_path();
    ds.events = read_events(ds.base_dir / ds.manifest.event_file,
                            ds.manifest.geometry);
    for (const ManifestFrame& f : ds.manifest.frames) {
        GrayImage img = read_pgm(ds.base_dir / f.image);
        if (img.geometry() != ds.manifest.geometry) {
            throw ConfigError("frame " + f.image +
                              " does not match manifest geometry");
        }
        ds.frames.push_back(
            FrameRecord{std::move(img), ExposureWindow{f.t_start_us, f.t_end_us}});
        if (f.ground_truth) {
            GrayImage gt = read_pgm(ds.base_dir / *f.ground_truth);
            if (gt.geometry() != ds.manifest.geometry) {
                throw ConfigError("ground truth " + *f.ground_truth +
                                  " does not match manifest geometry");
            }
            ds.ground_truth.push_back(std::move(gt));
        } else {
            ds.ground_truth.push_back(std::nullopt);
        }
    }
    return ds;
}

ContrastParams resolve_contrast(const DatasetManifest& manifest) {
    if (manifest.contrast_override) {
        return *manifest.contrast_override;
    }
    if (manifest.hardware) {
        return contrast_from_hardware(*manifest.hardware);
    }
    throw ConfigError(
        "manifest provides neither contrast_override nor hardware parameters");
}

}  // namespace fedi
