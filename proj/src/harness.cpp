#include "bzgate/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "json.hpp"

#include "bzgate/errors.hpp"
#include "bzgate/render.hpp"

namespace bzgate {

namespace {

// Quiet-reference for quiescence detection, one value per distinct
// excitability level. Reactive cells track their rest state; the
// non-excitable surround is pinned to a sentinel above any legal u, so
// its permanent small-amplitude ringing (it sits past the stiff-term
// stability edge of the explicit scheme, but cannot carry a wave)
// never gates quiescence.
Field rest_field(const ExcitabilityField& phi, const SolverParams& p) {
    Field rest(phi.width, phi.height);
    std::map<double, double> cache;
    for (std::size_t i = 0; i < phi.data.size(); ++i) {
        double ph = phi.data[i];
        auto it = cache.find(ph);
        if (it == cache.end()) {
            const double r = classify_excitability(ph) == ExcitabilityClass::NonExcitable
                                 ? 2.0
                                 : find_rest_state(ph, p).u;
            it = cache.emplace(ph, r).first;
        }
        rest.data[i] = it->second;
    }
    return rest;
}

struct Watch {
    std::string name;
    Rect rect;
    bool fired = false;
    int64_t arrival = -1;
    double peak = 0.0;

    void scan(const Field& u, int64_t step, double threshold) {
        int x1 = std::min(rect.x + rect.w, u.width);
        int y1 = std::min(rect.y + rect.h, u.height);
        for (int y = std::max(0, rect.y); y < y1; ++y)
            for (int x = std::max(0, rect.x); x < x1; ++x) {
                double v = u.at(x, y);
                if (v > peak) peak = v;
                if (!fired && v >= threshold) {
                    fired = true;
                    arrival = step;
                }
            }
    }
};

std::string join_path(const std::string& dir, const std::string& file) {
    if (dir.empty()) return file;
    return (std::filesystem::path(dir) / file).string();
}

} // namespace

void apply_stimuli(MediumState& state, const CircuitSpec& circuit,
                   const BitAssignment& inputs) {
    std::size_t input_ports = 0;
    for (const auto& port : circuit.ports) {
        if (port.kind != PortKind::Input) continue;
        ++input_ports;
        auto it = inputs.find(port.name);
        if (it == inputs.end())
            throw ConfigError("no bit assigned to input port '" + port.name + "'");
        if (it->second != 0 && it->second != 1)
            throw ConfigError("bit for port '" + port.name + "' must be 0 or 1");
        if (it->second == 0) continue;
        int x1 = port.rect.x + port.rect.w;
        int y1 = port.rect.y + port.rect.h;
        if (port.rect.x < 0 || port.rect.y < 0 || x1 > state.u.width || y1 > state.u.height)
            throw ConfigError("stimulus rect of port '" + port.name + "' leaves the grid");
        for (int y = port.rect.y; y < y1; ++y)
            for (int x = port.rect.x; x < x1; ++x)
                state.u.at(x, y) = 1.0;
    }
    if (inputs.size() != input_ports)
        throw ConfigError("input assignment names " + std::to_string(inputs.size()) +
                          " ports, circuit has " + std::to_string(input_ports));
}

ExperimentResult run_experiment(const CircuitSpec& circuit, const BitAssignment& inputs,
                                const ExperimentConfig& config,
                                const std::vector<WatchRect>& probes) {
    config.params.validate();
    ExcitabilityField phi = rasterize(circuit);
    Field rest = rest_field(phi, config.params);

    MediumState cur(phi.width, phi.height);
    MediumState next(phi.width, phi.height);
    apply_stimuli(cur, circuit, inputs);

    std::vector<Watch> outs;
    for (const auto& port : circuit.ports)
        if (port.kind == PortKind::Output)
            outs.push_back(Watch{port.name, port.rect});
    std::vector<Watch> probe_watch;
    for (const auto& pr : probes)
        probe_watch.push_back(Watch{pr.name, pr.rect});

    int64_t cap = config.max_steps;
    if (cap <= 0) cap = derive_max_steps(circuit, calibrate_wave_speed(config.params));
    if (cap < 1000) cap = 1000;

    const std::string gate_label = config.gate_label.empty() ? circuit.name : config.gate_label;

    ExperimentResult result;
    TimelapseAccumulator lapse;
    RenderConfig rc;
    rc.snapshot_every = config.snapshot_every;
    rc.frame_every = config.frame_every;
    bool writing = (config.timelapse || config.frames) && !config.out_dir.empty();
    if (writing) std::filesystem::create_directories(config.out_dir);

    auto scan_all = [&](const Field& u, int64_t step) {
        for (auto& w : outs) w.scan(u, step, config.detect_threshold);
        for (auto& w : probe_watch) w.scan(u, step, config.detect_threshold);
    };
    auto images = [&](const MediumState& s) {
        if (!writing) return;
        if (config.timelapse && s.step_index % config.snapshot_every == 0)
            lapse.absorb(s.u, rc.display_threshold);
        if (config.frames && s.step_index % config.frame_every == 0) {
            std::string name = frame_filename(gate_label, config.bits_label, s.step_index);
            write_pgm(join_path(config.out_dir, name), s.u.width, s.u.height,
                      render_snapshot(s.u, rc.display_threshold));
            result.images_written.push_back(name);
        }
    };

    scan_all(cur.u, 0);
    images(cur);

    int64_t quiet = 0;
    result.terminated_by = Termination::StepCap;
    while (cur.step_index < cap) {
        double excess = 0.0;
        step_into(cur, next, phi, config.params, &rest, &excess);
        std::swap(cur, next);
        scan_all(cur.u, cur.step_index);
        images(cur);
        if (excess < config.quiescence_epsilon) {
            if (++quiet >= config.quiescence_window) {
                result.terminated_by = Termination::Quiescence;
                break;
            }
        } else {
            quiet = 0;
        }
    }
    result.steps = cur.step_index;

    if (writing && config.timelapse) {
        std::string name = timelapse_filename(gate_label, config.bits_label);
        write_pgm(join_path(config.out_dir, name), lapse.width, lapse.height, lapse.pixels);
        result.images_written.push_back(name);
    }

    for (const auto& w : outs)
        result.outputs.push_back(PortResult{w.name, w.fired, w.arrival, w.peak});
    for (const auto& w : probe_watch)
        result.probes.push_back(PortResult{w.name, w.fired, w.arrival, w.peak});
    return result;
}

VerificationReport verify_gate(const GateLayout& gate, const ExperimentConfig& base) {
    VerificationReport report;
    report.gate = gate.name;
    report.notes = gate.report_notes;
    report.pass = true;

    ExperimentConfig config = base;
    config.gate_label = gate.name;
    if (config.max_steps <= 0)
        config.max_steps = derive_max_steps(gate.circuit, calibrate_wave_speed(config.params));

    std::vector<WatchRect> probe_rects;
    for (const auto& pr : gate.probes)
        probe_rects.push_back(WatchRect{pr.segment, pr.rect});

    for (const auto& row_inputs : gate.verification_rows) {
        RowReport row;
        row.inputs = row_inputs;
        row.bits = bits_string(gate, row_inputs);
        row.expected = expected_outputs(gate, row_inputs);
        for (const auto& pr : gate.probes)
            row.probe_expected[pr.segment] = pr.expr(row_inputs);
        config.bits_label = row.bits;

        auto t0 = std::chrono::steady_clock::now();
        try {
            ExperimentResult res = run_experiment(gate.circuit, row_inputs, config, probe_rects);
            row.terminated_by = res.terminated_by;
            row.steps = res.steps;
            for (const auto& out : res.outputs) {
                row.observed[out.name] = out.fired ? 1 : 0;
                if (out.fired) row.arrivals[out.name] = out.arrival_step;
            }
            for (const auto& pb : res.probes)
                row.probe_observed[pb.name] = pb.fired ? 1 : 0;
            row.match = (row.observed == row.expected);
            row.probes_match = (row.probe_observed == row.probe_expected);
        } catch (const std::exception& e) {
            row.error = e.what();
            row.match = false;
            row.probes_match = gate.probes.empty();
        }
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!row.match || !row.probes_match) report.pass = false;
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string render_report_text(const VerificationReport& report, bool include_wall_clock) {
    std::ostringstream out;
    out << "gate: " << report.gate << "\n";
    for (const auto& row : report.rows) {
        out << "  inputs " << row.bits << "  expected";
        for (const auto& [k, v] : row.expected) out << " " << k << "=" << v;
        out << "  observed";
        for (const auto& [k, v] : row.observed) out << " " << k << "=" << v;
        out << "  " << (row.match ? "ok" : "MISMATCH");
        if (!row.probe_expected.empty())
            out << "  probes " << (row.probes_match ? "ok" : "MISMATCH");
        out << "  steps=" << row.steps << "  "
            << (row.terminated_by == Termination::Quiescence ? "quiescent" : "step-cap");
        if (!row.arrivals.empty()) {
            out << "  arrivals";
            for (const auto& [k, v] : row.arrivals) out << " " << k << "=" << v;
        }
        if (include_wall_clock) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2fs", row.wall_seconds);
            out << "  wall=" << buf;
        }
        if (!row.error.empty()) out << "  error: " << row.error;
        out << "\n";
        if (!row.probes_match && row.error.empty()) {
            for (const auto& [seg, want] : row.probe_expected) {
                auto it = row.probe_observed.find(seg);
                int got = it == row.probe_observed.end() ? -1 : it->second;
                if (got != want)
                    out << "    probe " << seg << " expected " << want << " observed " << got
                        << "\n";
            }
        }
    }
    for (const auto& note : report.notes) out << "  note: " << note << "\n";
    out << "result: " << (report.pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string render_report_records(const VerificationReport& report) {
    std::ostringstream out;
    for (const auto& row : report.rows) {
        nlohmann::ordered_json rec;
        rec["gate"] = report.gate;
        rec["inputs"] = row.bits;
        rec["expected"] = row.expected;
        rec["observed"] = row.observed;
        rec["match"] = row.match;
        rec["arrival_steps"] = row.arrivals;
        rec["termination"] =
            row.terminated_by == Termination::Quiescence ? "quiescence" : "step_cap";
        rec["steps"] = row.steps;
        if (!row.probe_expected.empty()) {
            rec["probes_expected"] = row.probe_expected;
            rec["probes_observed"] = row.probe_observed;
            rec["probes_match"] = row.probes_match;
        }
        if (!row.error.empty()) rec["error"] = row.error;
        out << rec.dump() << "\n";
    }
    return out.str();
}

double calibrate_wave_speed(const SolverParams& params, double phi_channel,
                            double detect_threshold) {
    params.validate();
    // Straight 30-wide channel, 400 nodes long, detectors 200 apart.
    const int width = 422, height = 62;
    const double chan_y = 30.0;
    ExcitabilityField phi(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double d = std::abs(y - chan_y);
            if (x < 10) d = std::hypot(double(x - 10), d);
            if (x > 410) d = std::hypot(double(x - 410), d);
            phi.at(x, y) = d <= 15.0 ? phi_channel : 0.5;
        }
    Field rest = rest_field(phi, params);

    MediumState cur(width, height), next(width, height);
    for (int y = 26; y <= 35; ++y) cur.u.at(12, y) = 1.0;

    const int x_near = 150, x_far = 350;
    int64_t t_near = -1, t_far = -1;
    auto crossed = [&](int x0) {
        for (int y = 15; y <= 45; ++y)
            for (int x = x0; x < x0 + 3; ++x)
                if (cur.u.at(x, y) >= detect_threshold) return true;
        return false;
    };

    const int64_t cap = 200000;
    int64_t quiet = 0;
    while (cur.step_index < cap) {
        double excess = 0.0;
        step_into(cur, next, phi, params, &rest, &excess);
        std::swap(cur, next);
        if (t_near < 0 && crossed(x_near)) t_near = cur.step_index;
        if (t_far < 0 && crossed(x_far)) {
            t_far = cur.step_index;
            break;
        }
        if (excess < 0.01) {
            if (++quiet >= 500) break;  // medium died before reaching the far detector
        } else {
            quiet = 0;
        }
    }
    if (t_near < 0 || t_far < 0 || t_far <= t_near)
        throw NoPropagation("no wave crossed the calibration channel at phi=" +
                            std::to_string(phi_channel));
    return double(x_far - x_near) / double(t_far - t_near);
}

int64_t derive_max_steps(const CircuitSpec& circuit, double wave_speed) {
    if (wave_speed <= 0.0) throw ConfigError("wave speed must be positive");
    double longest = 0.0;
    for (std::size_t i = 0; i < circuit.ports.size(); ++i)
        for (std::size_t j = i + 1; j < circuit.ports.size(); ++j) {
            try {
                longest = std::max(longest, path_length(circuit, circuit.ports[i].name,
                                                        circuit.ports[j].name));
            } catch (const NoRoute&) {
            } catch (const AmbiguousRoute&) {
            }
        }
    if (longest <= 0.0) longest = double(circuit.width + circuit.height);
    int64_t cap = int64_t(std::ceil(2.0 * longest / wave_speed)) + 5000;
    return std::max<int64_t>(cap, 1000);
}

FragmentTestResult fragment_survival_test(double phi_value, int travel,
                                          const SolverParams& params, int seed_w, int seed_h) {
    params.validate();
    const int n = 500;
    if (seed_w < 1 || seed_h < 1 || seed_w > 100 || seed_h > 400)
        throw ConfigError("seed rect must fit comfortably inside the 500x500 test grid");
    const int x0 = n / 2 - seed_w / 2, x1 = x0 + seed_w - 1;
    const int y0 = n / 2 - seed_h / 2, y1 = y0 + seed_h - 1;
    if (travel <= 0 || x1 + travel > n - 5 || x0 - travel < 4)
        throw ConfigError("travel must keep both measurement marks inside the test grid");
    ExcitabilityField phi(n, n);
    std::fill(phi.data.begin(), phi.data.end(), phi_value);
    Field rest = rest_field(phi, params);

    MediumState cur(n, n), next(n, n);
    // vertical seed bar at the grid centre; fragments leave along +-x
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) cur.u.at(x, y) = 1.0;

    const double display = 0.04;
    const int right_mark = x1 + travel, left_mark = x0 - travel;

    FragmentTestResult result;
    bool right_done = false, left_done = false;
    int right_front_prev = -1, left_front_prev = -1;
    int64_t last_advance = 0;
    const int64_t cap = 200000;

    while (cur.step_index < cap && !(right_done && left_done)) {
        double excess = 0.0;
        step_into(cur, next, phi, params, &rest, &excess);
        std::swap(cur, next);
        if (cur.step_index % 25 != 0) continue;

        int right_front = -1, left_front = n;
        bool any = false;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                if (cur.u.at(x, y) <= display) continue;
                any = true;
                if (x > right_front) right_front = x;
                if (x < left_front) left_front = x;
            }
        if (!any) break;  // everything died
        if (right_front != right_front_prev || left_front != left_front_prev) {
            last_advance = cur.step_index;
            right_front_prev = right_front;
            left_front_prev = left_front;
        } else if (cur.step_index - last_advance > 4000) {
            break;  // stalled: remaining activity is not a travelling wave
        }

        if (!right_done && right_front >= right_mark) {
            right_done = true;
            double peak = 0.0;
            int ymin = n, ymax = -1;
            for (int y = 0; y < n; ++y)
                for (int x = 250; x < n; ++x) {
                    double v = cur.u.at(x, y);
                    if (v > peak) peak = v;
                    if (v > display) {
                        ymin = std::min(ymin, y);
                        ymax = std::max(ymax, y);
                    }
                }
            result.right_peak = peak;
            if (ymax >= ymin) result.width_change_ratio = double(ymax - ymin + 1) / seed_h;
        }
        if (!left_done && left_front >= 0 && left_front <= left_mark) {
            left_done = true;
            double peak = 0.0;
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < 250; ++x) peak = std::max(peak, cur.u.at(x, y));
            result.left_peak = peak;
        }
    }
    result.survived = right_done && left_done && result.right_peak >= 0.5 &&
                      result.left_peak >= 0.5;
    return result;
}

} // namespace bzgate
