#include "bzgate/render.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bzgate/errors.hpp"

namespace bzgate {

namespace {

constexpr uint8_t kGeometryGray = 60;

inline uint8_t shade(double u, double threshold) {
    if (!(u > threshold)) return 0;
    const double c = u < 0.0 ? 0.0 : (u > 1.0 ? 1.0 : u);
    return static_cast<uint8_t>(std::floor(255.0 * c + 0.5));
}

} // namespace

std::vector<uint8_t> render_snapshot(const Field& u, double display_threshold) {
    std::vector<uint8_t> px(u.size());
    for (size_t i = 0; i < px.size(); ++i) px[i] = shade(u.data[i], display_threshold);
    return px;
}

std::vector<uint8_t> render_snapshot_overlay(const Field& u, const ExcitabilityField& phi,
                                             double display_threshold) {
    if (!u.same_shape(phi)) throw DimensionMismatch("state and excitability field differ in size");
    std::vector<uint8_t> px(u.size());
    for (size_t i = 0; i < px.size(); ++i) {
        const uint8_t s = shade(u.data[i], display_threshold);
        px[i] = s > 0 ? s : (phi.data[i] <= kSubExcitableMax ? kGeometryGray : 0);
    }
    return px;
}

void TimelapseAccumulator::absorb(const Field& u, double display_threshold) {
    absorb_pixels(u.width, u.height, render_snapshot(u, display_threshold));
}

void TimelapseAccumulator::absorb_pixels(int w, int h, const std::vector<uint8_t>& frame) {
    if (pixels.empty()) {
        width = w;
        height = h;
        pixels.assign(static_cast<size_t>(w) * h, 0);
    }
    if (w != width || h != height || frame.size() != pixels.size())
        throw DimensionMismatch("time-lapse frames differ in size");
    for (size_t i = 0; i < pixels.size(); ++i)
        if (frame[i] > pixels[i]) pixels[i] = frame[i];
}

void write_pgm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& pixels) {
    if (pixels.size() != static_cast<size_t>(width) * height)
        throw DimensionMismatch("pixel buffer does not match stated image size");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << "P5\n" << width << " " << height << "\n255\n";
    f.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (!f) throw std::runtime_error("short write to '" + path + "'");
}

std::string frame_filename(const std::string& gate, const std::string& bits, int64_t step) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06lld", static_cast<long long>(step));
    return gate + "_inputs_" + bits + "_step_" + buf + ".pgm";
}

std::string timelapse_filename(const std::string& gate, const std::string& bits) {
    return gate + "_inputs_" + bits + "_timelapse.pgm";
}

} // namespace bzgate
