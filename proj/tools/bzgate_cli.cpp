// Command-line front end: run single experiments, verify truth tables,
// calibrate the medium, and inspect or validate circuit layouts.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bzgate/circuit_io.hpp"
#include "bzgate/errors.hpp"
#include "bzgate/gates.hpp"
#include "bzgate/harness.hpp"

namespace {

constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSimulation = 3;

struct GlobalOptions {
    double phi_sub = -1.0;          // <0: keep the layout's value
    double dt = -1.0;               // <0: keep the solver default
    long long max_steps = -1;       // <0: derive from wave speed
    double detect_threshold = -1.0; // <0: keep the harness default
    std::string seed_rect;          // "WxH" for fragment-test
};

void apply_globals(const GlobalOptions& g, bzgate::ExperimentConfig& config) {
    if (g.dt >= 0.0) config.params.dt = g.dt;
    if (g.max_steps >= 0) config.max_steps = g.max_steps;
    if (g.detect_threshold >= 0.0) config.detect_threshold = g.detect_threshold;
}

bzgate::GateLayout layout_with_overrides(const std::string& name, const GlobalOptions& g) {
    bzgate::GateLayout layout = bzgate::get_layout(name);
    if (g.phi_sub >= 0.0) layout.circuit.phi_subexcitable = g.phi_sub;
    return layout;
}

std::pair<int, int> parse_seed_rect(const std::string& text) {
    int w = 0, h = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%dx%d%c", &w, &h, &extra) != 2 || w < 1 || h < 1)
        throw bzgate::ParseError("seed rect must look like WxH, e.g. 3x20");
    return {w, h};
}

int cmd_run(const std::string& gate, const std::string& bits, const std::string& out_dir,
            bool timelapse, bool frames, const GlobalOptions& g) {
    bzgate::GateLayout layout = layout_with_overrides(gate, g);
    bzgate::BitAssignment inputs = bzgate::parse_bits(layout, bits);

    bzgate::ExperimentConfig config;
    apply_globals(g, config);
    config.timelapse = timelapse;
    config.frames = frames;
    config.out_dir = out_dir;
    config.gate_label = layout.name;
    config.bits_label = bits;
    if ((timelapse || frames) && out_dir.empty())
        throw bzgate::ConfigError("--timelapse/--frames need --out DIR");

    std::vector<bzgate::WatchRect> probe_rects;
    for (const auto& p : layout.probes) probe_rects.push_back({p.segment, p.rect});

    bzgate::ExperimentResult res = bzgate::run_experiment(layout.circuit, inputs, config, probe_rects);
    bzgate::BitAssignment expected = bzgate::expected_outputs(layout, inputs);

    nlohmann::ordered_json rec;
    rec["gate"] = layout.name;
    rec["inputs"] = bits;
    rec["expected"] = expected;
    nlohmann::ordered_json observed;
    bool match = true;
    for (const auto& out : res.outputs) {
        observed[out.name] = out.fired ? 1 : 0;
        auto it = expected.find(out.name);
        if (it == expected.end() || it->second != (out.fired ? 1 : 0)) match = false;
    }
    rec["observed"] = observed;
    rec["match"] = match;
    nlohmann::ordered_json arrivals;
    for (const auto& out : res.outputs)
        if (out.fired) arrivals[out.name] = out.arrival_step;
    rec["arrival_steps"] = arrivals;
    if (!res.probes.empty()) {
        nlohmann::ordered_json probes;
        for (const auto& p : res.probes) probes[p.name] = p.fired ? 1 : 0;
        rec["probes"] = probes;
    }
    rec["termination"] =
        res.terminated_by == bzgate::Termination::Quiescence ? "quiescence" : "step_cap";
    rec["steps"] = res.steps;
    if (!res.images_written.empty()) rec["images"] = res.images_written;
    std::cout << rec.dump() << "\n";
    return 0;
}

int cmd_verify(const std::string& gate, const std::string& report_path, const GlobalOptions& g) {
    bzgate::GateLayout layout = layout_with_overrides(gate, g);
    bzgate::ExperimentConfig config;
    apply_globals(g, config);
    bzgate::VerificationReport report = bzgate::verify_gate(layout, config);
    std::cout << bzgate::render_report_text(report);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) throw bzgate::ConfigError("cannot open report file '" + report_path + "'");
        out << bzgate::render_report_records(report);
    }
    return report.pass ? 0 : kExitVerification;
}

int cmd_calibrate(const GlobalOptions& g) {
    bzgate::ExperimentConfig config;
    apply_globals(g, config);
    double speed = bzgate::calibrate_wave_speed(config.params);
    std::printf("wave speed: %.6f nodes/step (%.2f nodes per time unit)\n", speed,
                speed / config.params.dt);
    for (const auto& name : bzgate::shipped_gate_names()) {
        bzgate::GateLayout layout = layout_with_overrides(name, g);
        std::printf("step cap %-18s %lld\n", layout.name.c_str(),
                    static_cast<long long>(bzgate::derive_max_steps(layout.circuit, speed)));
    }
    return 0;
}

int cmd_export_layout(const std::string& gate, const GlobalOptions& g) {
    bzgate::GateLayout layout = layout_with_overrides(gate, g);
    std::cout << bzgate::serialize_circuit(layout.circuit);
    return 0;
}

int cmd_validate(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "cannot open circuit file '" << path << "'\n";
        return kExitUsage;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        bzgate::CircuitSpec circuit = bzgate::parse_circuit(text);
        std::cout << "ok: " << circuit.channels.size() << " channels, "
                  << circuit.junctions.size() << " junctions, " << circuit.ports.size()
                  << " ports\n";
        return 0;
    } catch (const bzgate::ParseError& e) {
        // structural failures already carry the "invalid circuit:" banner
        const std::string what = e.what();
        if (what.rfind("invalid circuit:", 0) == 0)
            std::cerr << what << "\n";
        else
            std::cerr << "invalid circuit: " << what << "\n";
        return kExitVerification;
    }
}

int cmd_fragment_test(double phi, int travel, const GlobalOptions& g) {
    bzgate::ExperimentConfig config;
    apply_globals(g, config);
    int seed_w = 3, seed_h = 20;
    if (!g.seed_rect.empty()) std::tie(seed_w, seed_h) = parse_seed_rect(g.seed_rect);
    bzgate::FragmentTestResult res =
        bzgate::fragment_survival_test(phi, travel, config.params, seed_w, seed_h);
    std::printf("phi=%g travel=%d seed=%dx%d\n", phi, travel, seed_w, seed_h);
    std::printf("survived: %s\n", res.survived ? "yes" : "no");
    std::printf("width ratio: %.3f\n", res.width_change_ratio);
    std::printf("peak u right/left: %.3f %.3f\n", res.right_peak, res.left_peak);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"excitation-wave logic gate simulator"};
    app.require_subcommand(1);
    // let the global options above also appear after the subcommand name
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--phi-sub", g.phi_sub, "override the sub-excitable phi of gate layouts");
    app.add_option("--dt", g.dt, "override the integrator time step");
    app.add_option("--max-steps", g.max_steps, "fixed step cap instead of the derived one");
    app.add_option("--detect-threshold", g.detect_threshold, "detector firing threshold on u");
    app.add_option("--seed-rect", g.seed_rect, "fragment-test seed size as WxH");

    std::string gate, bits, out_dir, report_path, circuit_path;
    bool timelapse = false, frames = false;
    double phi = 0.0766;
    int travel = 200;

    CLI::App* run = app.add_subcommand("run", "run one experiment");
    run->add_option("--gate", gate, "gate name")->required();
    run->add_option("--inputs", bits, "input bits in declared port order")->required();
    run->add_option("--out", out_dir, "directory for image output");
    run->add_flag("--timelapse", timelapse, "write a time-lapse image");
    run->add_flag("--frames", frames, "write periodic frame images");

    CLI::App* verify = app.add_subcommand("verify", "verify a gate's truth table");
    verify->add_option("--gate", gate, "gate name")->required();
    verify->add_option("--report", report_path, "write the row records to this file");

    CLI::App* calibrate = app.add_subcommand("calibrate", "measure wave speed and step caps");

    CLI::App* export_layout = app.add_subcommand("export-layout", "print a circuit description");
    export_layout->add_option("--gate", gate, "gate name")->required();

    CLI::App* validate = app.add_subcommand("validate", "check a circuit description file");
    validate->add_option("--circuit", circuit_path, "circuit file")->required();

    CLI::App* fragment = app.add_subcommand("fragment-test", "wave-fragment survival test");
    fragment->add_option("--phi", phi, "uniform excitability");
    fragment->add_option("--travel", travel, "distance each fragment must cover");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(gate, bits, out_dir, timelapse, frames, g);
        if (verify->parsed()) return cmd_verify(gate, report_path, g);
        if (calibrate->parsed()) return cmd_calibrate(g);
        if (export_layout->parsed()) return cmd_export_layout(gate, g);
        if (validate->parsed()) return cmd_validate(circuit_path);
        if (fragment->parsed()) return cmd_fragment_test(phi, travel, g);
    } catch (const bzgate::UnknownGate& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const bzgate::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const bzgate::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return kExitSimulation;
    }
    return kExitUsage;
}
