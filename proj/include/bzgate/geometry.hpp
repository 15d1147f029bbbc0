#pragma once

#include <string>
#include <vector>

#include "bzgate/solver.hpp"

namespace bzgate {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

// Axis-aligned cell rectangle [x, x+w) x [y, y+h) in node units.
struct Rect {
    int x = 0, y = 0, w = 0, h = 0;
    bool contains(int cx, int cy) const {
        return cx >= x && cx < x + w && cy >= y && cy < y + h;
    }
    Vec2 center() const { return {x + (w - 1) / 2.0, y + (h - 1) / 2.0}; }
    long area() const { return static_cast<long>(w) * h; }
};

// Centerline polyline; a node belongs to the channel if its Euclidean
// distance to the polyline is <= width/2.
struct ChannelSpec {
    std::string name;
    double width = 30.0;
    std::vector<Vec2> vertices;
};

struct JunctionSpec {
    std::string id;
    Vec2 center;
    double radius = 15.0;
    ExcitabilityClass cls = ExcitabilityClass::SubExcitable;
};

enum class PortKind { Input, Output };

// Input ports carry a stimulus rect (area 10), output ports a detector
// rect spanning the channel cross-section.
struct PortSpec {
    std::string name;
    PortKind kind = PortKind::Input;
    Rect rect;
};

enum class ConstraintKind { EqualLength, StrictlyLonger, MinArrivalGap };

// Path endpoints name ports or junctions; written "from>to" in circuit files.
struct PathRef {
    std::string from, to;
};

struct PathConstraint {
    ConstraintKind kind = ConstraintKind::EqualLength;
    PathRef a, b;
    // EqualLength: tolerance; StrictlyLonger: required gap; MinArrivalGap: minimum |difference|.
    double value = 5.0;
};

struct CircuitSpec {
    std::string name;
    int width = 0, height = 0;
    double phi_excitable = 0.05;
    double phi_subexcitable = 0.0766;
    double phi_background = 0.5;
    std::vector<ChannelSpec> channels;
    std::vector<JunctionSpec> junctions;
    std::vector<PortSpec> ports;
    std::vector<PathConstraint> constraints;

    const JunctionSpec* find_junction(const std::string& id) const;
    const PortSpec* find_port(const std::string& name) const;
};

// Paint background, then channel footprints, then sub-excitable junction
// discs (open discs, strict < radius). Throws GeometryError if a channel
// footprint or disc leaves the bounding box.
ExcitabilityField rasterize(const CircuitSpec& c);

// Length in nodes of the unique shortest centerline route between two
// stations (ports anchor at their rect center projected onto their
// channel). Throws NoRoute / AmbiguousRoute.
double path_length(const CircuitSpec& c, const std::string& from, const std::string& to);

// Structural rule violations: port rect placement, junction placement,
// channel shape, phi bands, overlaps. Empty for a well-formed circuit.
std::vector<std::string> structural_violations(const CircuitSpec& c);

// structural_violations plus every PathConstraint evaluated; the shipped
// layouts must come back empty.
std::vector<std::string> validate(const CircuitSpec& c);

} // namespace bzgate
