#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bzgate/gates.hpp"
#include "bzgate/geometry.hpp"
#include "bzgate/render.hpp"
#include "bzgate/solver.hpp"

namespace bzgate {

struct ExperimentConfig {
    SolverParams params;
    double detect_threshold = 0.10;
    double quiescence_epsilon = 0.01;
    int quiescence_window = 500;
    // 0 derives the cap from the calibrated wave speed and the longest
    // port-to-port route (never below 1000).
    int64_t max_steps = 0;
    int snapshot_every = 150;
    int frame_every = 10;
    bool timelapse = false;
    bool frames = false;
    std::string out_dir;     // empty: no image output
    std::string gate_label;  // used in image file names
    std::string bits_label;
};

enum class Termination { Quiescence, StepCap };

struct PortResult {
    std::string name;
    bool fired = false;
    int64_t arrival_step = -1;  // first threshold crossing; -1 if never
    double peak_u = 0.0;
};

struct ExperimentResult {
    std::vector<PortResult> outputs;  // declared output-port order
    std::vector<PortResult> probes;   // layout probe order
    Termination terminated_by = Termination::Quiescence;
    int64_t steps = 0;
    std::vector<std::string> images_written;
};

// Set u=1.0 over the stimulus rect of every input port whose bit is 1.
// Throws ConfigError when the bits do not match the input ports.
void apply_stimuli(MediumState& state, const CircuitSpec& circuit, const BitAssignment& inputs);

struct WatchRect {
    std::string name;
    Rect rect;
};

// Integrate the stimulated circuit to quiescence or the step cap,
// recording detector peaks, first arrivals, and optional imagery.
ExperimentResult run_experiment(const CircuitSpec& circuit, const BitAssignment& inputs,
                                const ExperimentConfig& config,
                                const std::vector<WatchRect>& probes = {});

struct RowReport {
    BitAssignment inputs;
    std::string bits;  // inputs in declared order
    BitAssignment expected;
    BitAssignment observed;
    bool match = false;
    std::map<std::string, int64_t> arrivals;
    BitAssignment probe_expected;
    BitAssignment probe_observed;
    bool probes_match = true;
    Termination terminated_by = Termination::Quiescence;
    int64_t steps = 0;
    double wall_seconds = 0.0;
    std::string error;  // non-empty when the experiment itself failed
};

struct VerificationReport {
    std::string gate;
    std::vector<RowReport> rows;
    bool pass = false;  // all rows match, including probes
    std::vector<std::string> notes;
};

VerificationReport verify_gate(const GateLayout& layout, const ExperimentConfig& config);

std::string render_report_text(const VerificationReport& report, bool include_wall_clock = true);
// One JSON object per row, newline separated.
std::string render_report_records(const VerificationReport& report);

// Wave speed in nodes/step on a straight 30-wide channel, measured
// between detectors 200 nodes apart. Throws NoPropagation if the wave
// never arrives (e.g. a non-excitable channel phi).
double calibrate_wave_speed(const SolverParams& params = {}, double phi_channel = 0.05,
                            double detect_threshold = 0.10);

// Step cap: ceil(2 * longest port-to-port route / speed) + 5000.
int64_t derive_max_steps(const CircuitSpec& circuit, double speed);

struct FragmentTestResult {
    bool survived = false;
    double width_change_ratio = 0.0;
    double right_peak = 0.0;  // peak u in each half when its fragment crossed the mark
    double left_peak = 0.0;
};

// Seed a 3x20 bar at the center of a 500x500 uniform-phi grid and track
// the two emitted fragments until they have traveled `travel` nodes.
// seed_w is along the travel axis, seed_h across it; the width ratio is
// measured against seed_h.
FragmentTestResult fragment_survival_test(double phi, int travel,
                                          const SolverParams& params = {},
                                          int seed_w = 3, int seed_h = 20);

} // namespace bzgate
