// End-to-end checks of the installed command line: every assertion here
// drives the real binary through a shell, exactly as a user would.

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef BZGATE_CLI_PATH
#error "BZGATE_CLI_PATH must point at the built binary"
#endif

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("bzgate_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CliResult run_cli(const std::string& args) {
    static int serial = 0;
    const auto out_file = scratch_dir() / ("out" + std::to_string(serial));
    const auto err_file = scratch_dir() / ("err" + std::to_string(serial));
    ++serial;

    const std::string cmd = std::string(BZGATE_CLI_PATH) + " " + args + " > " +
                            out_file.string() + " 2> " + err_file.string();
    const int status = std::system(cmd.c_str());

    CliResult r;
    r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    fs::remove(out_file);
    fs::remove(err_file);
    return r;
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    SUBCASE("no subcommand") {
        const auto r = run_cli("");
        CHECK(r.exit_code == 2);
    }
    SUBCASE("malformed input bits") {
        const auto r = run_cli("run --gate toffoli --inputs 999");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("usage error") != std::string::npos);
        CHECK(r.err.find("0 or 1") != std::string::npos);
    }
    SUBCASE("wrong bit count") {
        const auto r = run_cli("run --gate toffoli --inputs 01");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("takes 3 input bits") != std::string::npos);
    }
    SUBCASE("unknown gate") {
        const auto r = run_cli("verify --gate nonexistent");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("unknown gate") != std::string::npos);
    }
    SUBCASE("image flags without a target directory") {
        const auto r = run_cli("run --gate margolus --inputs 11 --timelapse");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("--out") != std::string::npos);
    }
}

TEST_CASE("help is exit 0 and lists the subcommands") {
    const auto r = run_cli("--help");
    CHECK(r.exit_code == 0);
    for (const char* sub :
         {"run", "verify", "calibrate", "export-layout", "validate", "fragment-test"})
        CHECK(r.out.find(sub) != std::string::npos);
}

TEST_CASE("export-layout emits a description the validator accepts") {
    const auto exported = run_cli("export-layout --gate margolus");
    REQUIRE(exported.exit_code == 0);
    CHECK(exported.out.rfind("grid 234 350", 0) == 0);
    CHECK(exported.out.find("channel xline") != std::string::npos);
    CHECK(exported.out.find("port x kind input stim") != std::string::npos);

    const auto file = scratch_dir() / "margolus.circuit";
    std::ofstream(file, std::ios::binary) << exported.out;
    const auto validated = run_cli("validate --circuit " + file.string());
    CHECK(validated.exit_code == 0);
    CHECK(validated.out.rfind("ok:", 0) == 0);
    fs::remove(file);
}

TEST_CASE("validate rejects bad input") {
    SUBCASE("missing file") {
        const auto r = run_cli("validate --circuit /nonexistent/f.circuit");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("cannot open") != std::string::npos);
    }
    SUBCASE("unparseable file") {
        const auto file = scratch_dir() / "broken.circuit";
        std::ofstream(file, std::ios::binary) << "grid 10\n";
        const auto r = run_cli("validate --circuit " + file.string());
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("invalid circuit") != std::string::npos);
        fs::remove(file);
    }
    SUBCASE("structurally broken circuit") {
        const auto file = scratch_dir() / "loose_port.circuit";
        std::ofstream(file, std::ios::binary)
            << "grid 300 80\n"
            << "channel lane width 30 : (20,40) (280,40)\n"
            << "port in kind input stim (18,38,2,5)\n"
            << "port out kind output detect (248,25,3,31)\n"
            << "port ghost kind input stim (2,2,5,2)\n";
        const auto r = run_cli("validate --circuit " + file.string());
        CHECK(r.exit_code == 1);
        CHECK(r.err.find("invalid circuit:") != std::string::npos);
        CHECK(r.err.find("ghost") != std::string::npos);
        fs::remove(file);
    }
}

TEST_CASE("a capped run reports observations as one JSON record") {
    const auto r = run_cli("run --gate margolus --inputs 10 --max-steps 2500");
    REQUIRE(r.exit_code == 0);

    const auto rec = nlohmann::json::parse(r.out);
    CHECK(rec["gate"] == "margolus");
    CHECK(rec["inputs"] == "10");
    CHECK(rec["expected"]["b"] == 1);
    CHECK(rec["termination"] == "step_cap");
    CHECK(rec["steps"] == 2500);
    // far too few steps for any output to fire...
    CHECK(rec["match"] == false);
    CHECK(rec["arrival_steps"].empty());
    // ...but the wave has already passed the first probe on the x feed
    CHECK(rec["probes"]["xj1"] == 1);
    CHECK(rec["probes"]["yj1"] == 0);
}

TEST_CASE("image output lands in the requested directory") {
    const auto dir = scratch_dir() / "imgs";
    const auto r = run_cli("run --gate margolus --inputs 00 --max-steps 1200 --out " +
                           dir.string() + " --timelapse --frames");
    REQUIRE(r.exit_code == 0);

    const auto rec = nlohmann::json::parse(r.out);
    CHECK(rec["termination"] == "quiescence");
    REQUIRE(rec.contains("images"));
    REQUIRE(!rec["images"].empty());

    size_t frames = 0, lapses = 0;
    for (const auto& name : rec["images"]) {
        const auto path = dir / name.get<std::string>();
        CAPTURE(path.string());
        REQUIRE(fs::exists(path));
        CHECK(fs::file_size(path) > 0);
        const auto text = name.get<std::string>();
        if (text.find("_timelapse") != std::string::npos)
            ++lapses;
        else
            ++frames;
        CHECK(text.rfind("margolus_inputs_00_", 0) == 0);
    }
    CHECK(lapses == 1);
    CHECK(frames >= 10);
    fs::remove_all(dir);
}

TEST_CASE("fragment test prints its verdict") {
    const auto r = run_cli("fragment-test --phi 0.095 --travel 60");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("phi=0.095 travel=60 seed=3x20") != std::string::npos);
    CHECK(r.out.find("survived: no") != std::string::npos);

    SUBCASE("seed rect override is screened") {
        const auto bad = run_cli("--seed-rect 3by20 fragment-test --phi 0.05 --travel 50");
        CHECK(bad.exit_code == 2);
        CHECK(bad.err.find("WxH") != std::string::npos);
    }
}

TEST_CASE("calibrate reports speed and per-gate step caps") {
    const auto r = run_cli("calibrate");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("wave speed: 0.0") != std::string::npos);
    CHECK(r.out.find("nodes per time unit") != std::string::npos);
    for (const char* gate : {"margolus", "fredkin", "toffoli", "linked_toffoli"})
        CHECK(r.out.find(std::string("step cap ") + gate) != std::string::npos);
}
