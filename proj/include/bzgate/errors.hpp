#pragma once

#include <stdexcept>
#include <string>

namespace bzgate {

// Field values left the physically meaningful range (NaN/Inf or |.| > 2).
struct NumericalBlowUp : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Root bracketing failed in a scalar solve.
struct NoRoot : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A circuit description violates a structural rule (overlaps, out of
// bounds, bad port placement, unsatisfied length constraint, ...).
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Circuit file could not be parsed; message carries line number.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Path query between two stations has no admissible route.
struct NoRoute : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Path query has two admissible routes of equal length.
struct AmbiguousRoute : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A wave failed to reach any detector before the step budget ran out.
struct NoPropagation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Image frames of different sizes were combined.
struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Experiment configuration is inconsistent with the circuit.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gate name outside the shipped set.
struct UnknownGate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An oracle evaluation was missing a bit for some input port.
struct MissingInputBit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// probe_table called on a gate without segment probes.
struct NoProbes : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bzgate
