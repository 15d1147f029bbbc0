#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bzgate/solver.hpp"

namespace bzgate {

struct RenderConfig {
    double display_threshold = 0.04;
    int snapshot_every = 150;
    int frame_every = 10;
    bool overlay_geometry = false;
};

// Grayscale view of the activator field: pixel = round-half-up of
// 255*clamp(u,0,1) where u exceeds the display threshold, else 0.
std::vector<uint8_t> render_snapshot(const Field& u, double display_threshold = 0.04);

// Same, with the medium sketched in: any non-background cell of phi that
// holds no displayable excitation renders at a fixed mid-gray.
std::vector<uint8_t> render_snapshot_overlay(const Field& u, const ExcitabilityField& phi,
                                             double display_threshold = 0.04);

// Pixelwise maximum over absorbed snapshots: the union of wave positions.
struct TimelapseAccumulator {
    int width = 0, height = 0;
    std::vector<uint8_t> pixels;

    void absorb(const Field& u, double display_threshold = 0.04);
    void absorb_pixels(int w, int h, const std::vector<uint8_t>& frame);
};

// Binary PGM (P5), maxval 255, no comment lines.
void write_pgm(const std::string& path, int width, int height,
               const std::vector<uint8_t>& pixels);

std::string frame_filename(const std::string& gate, const std::string& bits, int64_t step);
std::string timelapse_filename(const std::string& gate, const std::string& bits);

} // namespace bzgate
