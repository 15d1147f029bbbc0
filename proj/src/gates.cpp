#include "bzgate/gates.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "bzgate/errors.hpp"

namespace bzgate {
namespace {

int bit(const BitAssignment& bits, const std::string& name) {
    auto it = bits.find(name);
    if (it == bits.end()) throw MissingInputBit("no bit named '" + name + "'");
    return it->second ? 1 : 0;
}

Vec2 unit(Vec2 v) {
    const double n = std::hypot(v.x, v.y);
    return {v.x / n, v.y / n};
}

// Ramp channel merging into a junction disc along the line entry->crossing.
// Build-time guarantees:
//   delta <= ramp_half        the disc actually captures the ramp wave
//   exit inside the through channel, downstream of the centre
//   mouth_edge >= through_half + mouth_gap   one-way merge (mouth_gap >= 0):
//                                            fronts passing on the through
//                                            channel cannot enter the ramp
//   mouth_edge <= catch_max                  two-way merge (catch_max >= 0):
//                                            a passing front is meant to
//                                            split into the ramp
// The nose is the ramp's final vertex, 4 nodes past the perpendicular foot,
// so the painted ramp always reaches the disc interior.
struct MergeJoin {
    Vec2 nose;
    double delta;
    double exit_lateral;
    double mouth_edge;
};

MergeJoin merge_join(Vec2 entry, Vec2 crossing, Vec2 centre, double radius,
                     double ramp_half, Vec2 through_dir, double through_half,
                     double mouth_gap, double catch_max = -1.0) {
    const Vec2 dir = unit({crossing.x - entry.x, crossing.y - entry.y});
    const double t_foot =
        (centre.x - entry.x) * dir.x + (centre.y - entry.y) * dir.y;
    const Vec2 foot{entry.x + t_foot * dir.x, entry.y + t_foot * dir.y};
    const double delta = std::hypot(centre.x - foot.x, centre.y - foot.y);

    auto fail = [&](const char* what, double got, double want) {
        std::ostringstream m;
        m << "merge at (" << centre.x << "," << centre.y << "): " << what
          << " " << got << " vs " << want;
        throw GeometryError(m.str());
    };
    if (delta > ramp_half) fail("impact parameter exceeds ramp half-width", delta, ramp_half);

    const double q = std::sqrt(radius * radius - delta * delta);
    const Vec2 perp{-through_dir.y, through_dir.x};
    const Vec2 exit{entry.x + (t_foot + q) * dir.x, entry.y + (t_foot + q) * dir.y};
    const double exit_lateral =
        std::abs((exit.x - centre.x) * perp.x + (exit.y - centre.y) * perp.y);
    const double exit_along =
        (exit.x - centre.x) * through_dir.x + (exit.y - centre.y) * through_dir.y;
    if (exit_lateral > through_half)
        fail("far-rim exit misses the through channel", exit_lateral, through_half);
    if (exit_along <= 0.0) fail("far-rim exit lands upstream", exit_along, 0.0);

    const Vec2 mouth{entry.x + (t_foot - q) * dir.x, entry.y + (t_foot - q) * dir.y};
    const double mouth_edge =
        std::abs((mouth.x - centre.x) * perp.x + (mouth.y - centre.y) * perp.y) - ramp_half;
    if (mouth_gap >= 0.0 && mouth_edge < through_half + mouth_gap)
        fail("ramp mouth within reach of passing fronts", mouth_edge, through_half + mouth_gap);
    if (catch_max >= 0.0 && mouth_edge > catch_max)
        fail("ramp mouth too far out for the catch", mouth_edge, catch_max);

    return {{entry.x + (t_foot + 4.0) * dir.x, entry.y + (t_foot + 4.0) * dir.y},
            delta, exit_lateral, mouth_edge};
}

ChannelSpec chan(std::string name, double width, std::vector<Vec2> vertices) {
    ChannelSpec c;
    c.name = std::move(name);
    c.width = width;
    c.vertices = std::move(vertices);
    return c;
}

JunctionSpec sub(std::string id, Vec2 centre, double radius) {
    return {std::move(id), centre, radius, ExcitabilityClass::SubExcitable};
}

JunctionSpec exc(std::string id, Vec2 centre) {
    return {std::move(id), centre, 15.0, ExcitabilityClass::Excitable};
}

PortSpec stim(std::string name, Rect r) { return {std::move(name), PortKind::Input, r}; }
PortSpec det(std::string name, Rect r) { return {std::move(name), PortKind::Output, r}; }

PathConstraint equal_paths(std::string af, std::string at, std::string bf, std::string bt,
                           double tol = 5.0) {
    return {ConstraintKind::EqualLength, {std::move(af), std::move(at)},
            {std::move(bf), std::move(bt)}, tol};
}

PathConstraint longer_path(std::string af, std::string at, std::string bf, std::string bt,
                           double gap) {
    return {ConstraintKind::StrictlyLonger, {std::move(af), std::move(at)},
            {std::move(bf), std::move(bt)}, gap};
}

using Expr = std::function<int(const BitAssignment&)>;

ProbeSpec probe(std::string segment, Rect r, std::string text, Expr fn) {
    return {std::move(segment), r, std::move(text), std::move(fn)};
}

std::vector<BitAssignment> rows_for(const std::vector<std::string>& order) {
    const size_t k = order.size();
    std::vector<BitAssignment> rows;
    rows.reserve(size_t{1} << k);
    for (size_t idx = 0; idx < (size_t{1} << k); ++idx) {
        BitAssignment row;
        for (size_t i = 0; i < k; ++i)
            row[order[i]] = static_cast<int>((idx >> (k - 1 - i)) & 1u);
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// margolus: two diagonals crossing in one disc, product dropped onto a
// vertical that forks at an excitable junction.
//   a = !x&y   b = x&!y   c = d = x&y

BitAssignment margolus_forward_oracle(const BitAssignment& in) {
    const int x = bit(in, "x"), y = bit(in, "y");
    return {{"a", (x ^ 1) & y}, {"b", x & (y ^ 1)}, {"c", x & y}, {"d", x & y}};
}

BitAssignment margolus_reverse_oracle(const BitAssignment& in) {
    const int a = bit(in, "a"), b = bit(in, "b"), c = bit(in, "c"), d = bit(in, "d");
    return {{"x", ((a ^ 1) & b) | c}, {"y", (a & (b ^ 1)) | d}};
}

GateLayout margolus_layout(bool reversed) {
    CircuitSpec c;
    c.name = reversed ? "margolus_reversed" : "margolus";
    c.width = 234;
    c.height = 350;
    c.channels = {
        chan("xline", 30, {{47, 16}, {47, 28}, {117, 98}, {187, 168}, {187, 208}}),
        chan("yline", 30, {{187, 16}, {187, 28}, {117, 98}, {47, 168}, {47, 208}}),
        // w24 keeps the disc's vert mouth out of reach of the diagonal
        // transits (contact 22.3 vs catch reach 19)
        chan("vert", 24, {{117, 98}, {117, 168}}),
        chan("cbr", 30, {{117, 168}, {147, 198}, {147, 306}}),
        // longer than cbr on purpose: reversed d trails reversed c by ~91
        // nodes so the second wave crosses recovered medium at j1
        chan("dbr", 30,
             {{117, 168}, {87, 198}, {87, 226}, {57, 256}, {57, 276}, {87, 306}, {87, 330}}),
    };
    c.junctions = {sub("j1", {117, 98}, 46), exc("j2", {117, 168})};

    if (!reversed) {
        c.ports = {
            stim("x", {42, 18, 10, 1}),   stim("y", {182, 18, 10, 1}),
            det("a", {32, 190, 31, 3}),   det("b", {172, 190, 31, 3}),
            det("c", {132, 288, 31, 3}),  det("d", {72, 324, 31, 3}),
        };
        c.constraints = {equal_paths("x", "j1", "y", "j1")};
    } else {
        c.ports = {
            stim("a", {51, 159, 10, 1}),  stim("b", {174, 159, 10, 1}),
            stim("c", {142, 248, 10, 1}), stim("d", {82, 314, 10, 1}),
            det("x", {32, 16, 31, 3}),    det("y", {172, 16, 31, 3}),
        };
        c.constraints = {
            equal_paths("a", "j1", "b", "j1"),
            longer_path("c", "j1", "a", "j1", 70.0),
            longer_path("d", "j1", "c", "j1", 75.0),
        };
    }

    GateLayout g;
    g.name = c.name;
    g.circuit = std::move(c);
    if (!reversed) {
        g.input_order = {"x", "y"};
        g.output_order = {"a", "b", "c", "d"};
        g.oracle = margolus_forward_oracle;
        g.probes = {
            probe("xj1", {57, 38, 24, 24}, "x",
                  [](const BitAssignment& s) { return bit(s, "x"); }),
            probe("yj1", {153, 38, 24, 24}, "y",
                  [](const BitAssignment& s) { return bit(s, "y"); }),
            probe("j1a", {57, 134, 24, 24}, "!x&y",
                  [](const BitAssignment& s) { return (bit(s, "x") ^ 1) & bit(s, "y"); }),
            probe("j1b", {153, 134, 24, 24}, "x&!y",
                  [](const BitAssignment& s) { return bit(s, "x") & (bit(s, "y") ^ 1); }),
            probe("j1j2", {102, 146, 31, 6}, "x&y",
                  [](const BitAssignment& s) { return bit(s, "x") & bit(s, "y"); }),
            probe("j2c", {132, 227, 31, 6}, "x&y",
                  [](const BitAssignment& s) { return bit(s, "x") & bit(s, "y"); }),
            probe("j2d", {72, 212, 31, 6}, "x&y",
                  [](const BitAssignment& s) { return bit(s, "x") & bit(s, "y"); }),
        };
    } else {
        g.input_order = {"a", "b", "c", "d"};
        g.output_order = {"x", "y"};
        g.oracle = margolus_reverse_oracle;
        g.report_notes = {
            "reversed stimuli are path-staggered so successive waves cross "
            "the junction disc after local recovery"};
    }
    g.verification_rows = rows_for(g.input_order);
    return g;
}

// ---------------------------------------------------------------------------
// routing junction: three merge ramps feeding one vertical through a large
// diode disc. Exactly one input is driven at a time.
//   p1 -> p3_out, p2 -> p3_out, p3 -> p2_out, p1_out never fires

BitAssignment routing_oracle(const BitAssignment& in) {
    const int p1 = bit(in, "p1"), p2 = bit(in, "p2"), p3 = bit(in, "p3");
    return {{"p1_out", 0}, {"p2_out", p3}, {"p3_out", p1 | p2}};
}

GateLayout routing_layout() {
    CircuitSpec c;
    c.name = "routing_junction";
    c.width = 260;
    c.height = 420;

    // mouth_gap 4: climbing fronts on the vertical reach 13+4, the ramp
    // mouths must clear that or a caught echo re-fires an output
    const MergeJoin jJ =
        merge_join({130, 102}, {66, 190}, {66, 170}, 38, 12, {0, 1}, 13, 4.0);
    const Vec2 p1dir = unit({130.0 - 231.0, 102.0 - 70.0});
    const MergeJoin jm1 =
        merge_join({244, 118}, {158.1, 93.1}, {182, 89}, 30, 12, p1dir, 12, -1.0);
    const MergeJoin jm2 =
        merge_join({124, 16}, {66, 101}, {66, 80}, 40, 12, {0, 1}, 13, 4.0);
    const MergeJoin jm3 =
        merge_join({124, 364}, {66, 279}, {66, 300}, 40, 12, {0, -1}, 13, 4.0);

    c.channels = {
        chan("V", 26, {{66, 16}, {66, 404}}),
        chan("p1line", 24, {{231, 16}, {231, 70}, {130, 102}, jJ.nose}),
        chan("arm1", 24, {{244, 118}, jm1.nose}),
        chan("arm2", 24, {{124, 16}, jm2.nose}),
        chan("arm3", 24, {{124, 384}, {124, 364}, jm3.nose}),
    };
    c.junctions = {
        sub("J", {66, 170}, 38),
        sub("M1", {182, 89}, 30),
        sub("M2", {66, 80}, 40),
        sub("M3", {66, 300}, 40),
    };
    c.ports = {
        stim("p1", {239, 116, 10, 1}),   stim("p2", {120, 20, 10, 1}),
        stim("p3", {120, 379, 10, 1}),   det("p1_out", {219, 40, 25, 3}),
        det("p2_out", {53, 30, 27, 3}),  det("p3_out", {53, 386, 27, 3}),
    };

    GateLayout g;
    g.name = c.name;
    g.circuit = std::move(c);
    g.input_order = {"p1", "p2", "p3"};
    g.output_order = {"p1_out", "p2_out", "p3_out"};
    g.oracle = routing_oracle;
    g.verification_rows = {
        {{"p1", 1}, {"p2", 0}, {"p3", 0}},
        {{"p1", 0}, {"p2", 1}, {"p3", 0}},
        {{"p1", 0}, {"p2", 0}, {"p3", 1}},
    };
    g.report_notes = {
        "verified for one active input at a time; simultaneous inputs are "
        "outside the routing contract"};
    return g;
}

// ---------------------------------------------------------------------------
// fredkin: controlled swap.
//   a = (x&z)|(y&!z)   b = (x&!z)|(y&z)   c = z

BitAssignment fredkin_forward_oracle(const BitAssignment& in) {
    const int z = bit(in, "z"), x = bit(in, "x"), y = bit(in, "y");
    return {{"a", (x & z) | (y & (z ^ 1))}, {"b", (x & (z ^ 1)) | (y & z)}, {"c", z}};
}

// Driving the outputs backwards does not invert the truth table; the wave
// circuit run in reverse realises these functions instead.
BitAssignment fredkin_reverse_oracle(const BitAssignment& in) {
    const int a = bit(in, "a"), b = bit(in, "b"), cc = bit(in, "c");
    return {{"z", a | b | cc}, {"x", a}, {"y", b}};
}

GateLayout fredkin_layout(bool reversed) {
    CircuitSpec c;
    c.name = reversed ? "fredkin_reversed" : "fredkin";
    c.width = 532;
    c.height = 532;

    const MergeJoin j9m =
        merge_join({272, 288}, {313, 345}, {313, 328}, 38, 10, {0, 1}, 15, 4.0);
    const MergeJoin j7m =
        merge_join({208, 288}, {121, 401}, {121, 385}, 38, 10, {0, 1}, 15, 4.0);
    const MergeJoin j10m =
        merge_join({240, 325}, {121, 486}, {121, 470}, 38, 10, {0, 1}, 15, 4.0);
    const MergeJoin j11m =
        merge_join({240, 378}, {313, 487}, {313, 470}, 40, 10, {0, 1}, 15, 4.0);

    c.channels = {
        chan("cline", 30,
             {{206, 16}, {206, 52}, {312, 52}, {378, 118}, {417, 157}, {417, 240},
              {467, 290}, {417, 340}, {417, 505}}),
        chan("xline", 30, {{36, 16}, {36, 52}, {240, 256}}),
        chan("yline", 30, {{444, 16}, {444, 52}, {240, 256}}),
        chan("culA", 24, {{206, 52}, {121, 137}, {86, 172}, {36, 172}}),
        chan("culB", 24, {{194, 64}, {313, 183}, {348, 218}, {378, 218}}),
        chan("avert", 30, {{121, 137}, {121, 505}}),
        chan("bvert", 30, {{313, 183}, {313, 505}}),
        chan("ch9", 24, {{240, 256}, {240, 325}}),
        chan("tails", 20, {j9m.nose, {272, 288}, {240, 256}, {208, 288}, j7m.nose}),
        chan("cross", 20, {j10m.nose, {240, 325}, {240, 378}, j11m.nose}),
    };
    c.junctions = {
        exc("j1", {206, 52}),
        // r36: a transiting front must not ignite the perpendicular channel
        // crossing the disc (contact 17.7 vs fragment reach 14)
        sub("j2", {378, 118}, 36),
        exc("j3", {194, 64}),
        sub("j4", {121, 137}, 40),
        sub("j5", {313, 183}, 40),
        sub("j6", {240, 256}, 44),
        sub("j7", {121, 385}, 38),
        exc("j8", {240, 325}),
        sub("j9", {313, 328}, 38),
        sub("j10", {121, 470}, 38),
        sub("j11", {313, 470}, 40),
    };

    if (!reversed) {
        c.ports = {
            stim("z", {201, 18, 10, 1}),  stim("x", {31, 18, 10, 1}),
            stim("y", {439, 18, 10, 1}),  det("a", {106, 501, 31, 3}),
            det("b", {298, 502, 31, 3}),  det("c", {402, 490, 31, 3}),
        };
        c.constraints = {
            equal_paths("x", "j4", "z", "j4"),
            equal_paths("z", "j5", "y", "j5"),
            equal_paths("x", "j6", "y", "j6"),
            // y must clear the crossing disc before z transits it
            longer_path("z", "j2", "y", "j2", 30.0),
        };
    } else {
        c.ports = {
            stim("a", {116, 511, 10, 1}), stim("b", {308, 512, 10, 1}),
            stim("c", {412, 498, 10, 1}), det("z", {191, 18, 31, 3}),
            det("x", {21, 24, 31, 3}),    det("y", {429, 24, 31, 3}),
        };
    }

    GateLayout g;
    g.name = c.name;
    g.circuit = std::move(c);
    if (!reversed) {
        g.input_order = {"z", "x", "y"};
        g.output_order = {"a", "b", "c"};
        g.oracle = fredkin_forward_oracle;
        auto B = [](const char* n) {
            return [n](const BitAssignment& s) { return bit(s, n); };
        };
        g.probes = {
            probe("zj1", {191, 32, 31, 3}, "z", B("z")),
            probe("j1j3", {196, 54, 8, 8}, "z", B("z")),
            probe("j1j2", {247, 40, 24, 24}, "z", B("z")),
            probe("yj2", {407, 61, 24, 24}, "y", B("y")),
            probe("j2j5", {342, 144, 10, 10}, "y", B("y")),
            probe("j2c", {405, 170, 24, 24}, "z", B("z")),
            probe("j3j4", {160, 74, 24, 24}, "z", B("z")),
            probe("j3j5", {226, 96, 24, 24}, "z", B("z")),
            probe("xj4", {51, 67, 24, 24}, "x", B("x")),
            probe("j4j6", {168, 184, 24, 24}, "x&!z",
                  [](const BitAssignment& s) { return bit(s, "x") & (bit(s, "z") ^ 1); }),
            probe("j4j7", {106, 260, 31, 6}, "x&z",
                  [](const BitAssignment& s) { return bit(s, "x") & bit(s, "z"); }),
            probe("j5j6", {272, 213, 10, 10}, "y&!z",
                  [](const BitAssignment& s) { return bit(s, "y") & (bit(s, "z") ^ 1); }),
            probe("j5j9", {298, 258, 31, 6}, "y&z",
                  [](const BitAssignment& s) { return bit(s, "y") & bit(s, "z"); }),
            probe("j6j7", {155, 328, 24, 24}, "!x&y&!z",
                  [](const BitAssignment& s) {
                      return (bit(s, "x") ^ 1) & bit(s, "y") & (bit(s, "z") ^ 1);
                  }),
            probe("j6j9", {272, 290, 12, 12}, "x&!y&!z",
                  [](const BitAssignment& s) {
                      return bit(s, "x") & (bit(s, "y") ^ 1) & (bit(s, "z") ^ 1);
                  }),
            probe("j7j10", {106, 424, 31, 4}, "(x&z)|(!x&y&!z)",
                  [](const BitAssignment& s) {
                      const int x = bit(s, "x"), y = bit(s, "y"), z = bit(s, "z");
                      return (x & z) | ((x ^ 1) & y & (z ^ 1));
                  }),
            probe("j9j11", {298, 394, 31, 6}, "(y&z)|(x&!y&!z)",
                  [](const BitAssignment& s) {
                      const int x = bit(s, "x"), y = bit(s, "y"), z = bit(s, "z");
                      return (y & z) | (x & (y ^ 1) & (z ^ 1));
                  }),
            probe("j6j8", {228, 302, 25, 6}, "x&y&!z",
                  [](const BitAssignment& s) {
                      return bit(s, "x") & bit(s, "y") & (bit(s, "z") ^ 1);
                  }),
            probe("j8j10", {171, 385, 24, 24}, "x&y&!z",
                  [](const BitAssignment& s) {
                      return bit(s, "x") & bit(s, "y") & (bit(s, "z") ^ 1);
                  }),
            probe("j8j11", {230, 342, 21, 6}, "x&y&!z",
                  [](const BitAssignment& s) {
                      return bit(s, "x") & bit(s, "y") & (bit(s, "z") ^ 1);
                  }),
            probe("culA_tail", {46, 160, 10, 25}, "z&!x",
                  [](const BitAssignment& s) { return bit(s, "z") & (bit(s, "x") ^ 1); }),
            probe("culB_tail", {352, 206, 10, 25}, "z&!y",
                  [](const BitAssignment& s) { return bit(s, "z") & (bit(s, "y") ^ 1); }),
        };
        g.report_notes = {
            "a/b follow a=(x&z)|(y&!z), b=(x&!z)|(y&z); zxy=101 and zxy=110 "
            "are the only rows where transposing the a and b labels changes "
            "the table"};
    } else {
        g.input_order = {"a", "b", "c"};
        g.output_order = {"z", "x", "y"};
        g.oracle = fredkin_reverse_oracle;
    }
    g.verification_rows = rows_for(g.input_order);
    return g;
}

// ---------------------------------------------------------------------------
// toffoli: controlled-controlled-not.
//   a = x   b = y^(z&x)   c = z

BitAssignment toffoli_forward_oracle(const BitAssignment& in) {
    const int z = bit(in, "z"), x = bit(in, "x"), y = bit(in, "y");
    return {{"a", x}, {"b", y ^ (z & x)}, {"c", z}};
}

BitAssignment toffoli_reverse_oracle(const BitAssignment& in) {
    const int a = bit(in, "a"), b = bit(in, "b"), cc = bit(in, "c");
    return {{"z", b | cc}, {"x", a | b}, {"y", b}};
}

// Both directions share the geometry; the S-bend between j5 and j6 adds
// ~94 nodes to the p path so the reversed climb and the caught y branch
// cross j5's disc well apart (about 105 nodes, past local recovery).
CircuitSpec toffoli_circuit(bool reversed) {
    CircuitSpec c;
    c.name = reversed ? "toffoli_reversed" : "toffoli";
    c.width = 720;
    c.height = 580;

    const MergeJoin j6m = merge_join({326, 430}, {366, 492}, {366, 480}, 30, 12,
                                     {0, 1}, 12, -1.0, 12.0);

    c.channels = {
        chan("zline", 30, {{126, 16}, {126, 176}, {311, 176}}),
        chan("xline", 30, {{366, 16}, {366, 46}, {246, 46}, {246, 241}}),
        chan("yline", 24,
             {{682, 16}, {682, 46}, {616, 46}, {366, 296}, {326, 336}, {326, 430}, j6m.nose}),
        chan("pline", 24,
             {{246, 176}, {311, 241}, {366, 296}, {456, 386}, {456, 416}, {366, 416},
              {366, 545}}),
        chan("aline", 30, {{246, 96}, {400, 96}, {400, 152}, {138, 414}, {138, 500}}),
        chan("cline", 30, {{186, 176}, {86, 276}, {86, 500}}),
    };
    c.junctions = {
        exc("j1", {186, 176}),
        exc("j2", {246, 96}),
        sub("j3", {246, 176}, 36),
        sub("j4", {311, 241}, 42),
        sub("j5", {366, 296}, 38),
        sub("j6", {366, 480}, 30),
    };

    if (!reversed) {
        c.ports = {
            stim("z", {121, 18, 10, 1}),  stim("x", {361, 18, 10, 1}),
            stim("y", {677, 18, 10, 1}),  det("a", {123, 470, 31, 3}),
            det("b", {354, 520, 25, 3}),  det("c", {71, 470, 31, 3}),
        };
        c.constraints = {
            equal_paths("z", "j3", "x", "j3"),
            equal_paths("x", "j5", "y", "j5"),
        };
    } else {
        c.ports = {
            stim("a", {133, 490, 10, 1}), stim("b", {361, 532, 10, 1}),
            stim("c", {81, 490, 10, 1}),  det("z", {111, 24, 31, 3}),
            det("x", {351, 24, 31, 3}),   det("y", {670, 24, 25, 3}),
        };
    }
    return c;
}

GateLayout toffoli_layout(bool reversed) {
    GateLayout g;
    g.circuit = toffoli_circuit(reversed);
    g.name = g.circuit.name;
    if (!reversed) {
        g.input_order = {"z", "x", "y"};
        g.output_order = {"a", "b", "c"};
        g.oracle = toffoli_forward_oracle;
        auto B = [](const char* n) {
            return [n](const BitAssignment& s) { return bit(s, n); };
        };
        // when z&x and not y, the product passing the output merge throws a
        // late echo back up the y channel; yj5 and j5j6 fold that in
        g.probes = {
            probe("zj1", {111, 100, 31, 3}, "z", B("z")),
            probe("j1j3", {188, 161, 6, 31}, "z", B("z")),
            probe("j1c", {124, 214, 24, 24}, "z", B("z")),
            probe("xj2", {296, 31, 24, 31}, "x", B("x")),
            probe("j2j3", {231, 112, 31, 6}, "x", B("x")),
            probe("j2j4", {320, 81, 24, 31}, "x", B("x")),
            probe("j3j4", {276, 206, 6, 6}, "z&x",
                  [](const BitAssignment& s) { return bit(s, "z") & bit(s, "x"); }),
            probe("j4a", {198, 330, 24, 24}, "x", B("x")),
            probe("yj5", {479, 159, 24, 24}, "y|(z&x)",
                  [](const BitAssignment& s) {
                      return bit(s, "y") | (bit(s, "z") & bit(s, "x"));
                  }),
            probe("j5j6", {314, 378, 25, 12}, "y^(z&x)",
                  [](const BitAssignment& s) {
                      return bit(s, "y") ^ (bit(s, "z") & bit(s, "x"));
                  }),
            probe("j5j7", {444, 392, 25, 6}, "z&x&!y",
                  [](const BitAssignment& s) {
                      return bit(s, "z") & bit(s, "x") & (bit(s, "y") ^ 1);
                  }),
            probe("j6b", {354, 512, 25, 4}, "y^(z&x)",
                  [](const BitAssignment& s) {
                      return bit(s, "y") ^ (bit(s, "z") & bit(s, "x"));
                  }),
            probe("culE", {291, 161, 10, 31}, "z&!x",
                  [](const BitAssignment& s) { return bit(s, "z") & (bit(s, "x") ^ 1); }),
            probe("culF", {231, 221, 31, 6}, "x&!z",
                  [](const BitAssignment& s) { return bit(s, "x") & (bit(s, "z") ^ 1); }),
        };
    } else {
        g.input_order = {"a", "b", "c"};
        g.output_order = {"z", "x", "y"};
        g.oracle = toffoli_reverse_oracle;
    }
    g.verification_rows = rows_for(g.input_order);
    return g;
}

// ---------------------------------------------------------------------------
// linked toffoli pair: one forward copy T and one mirrored copy T* driven
// from its output side, joined port to port through armlet merges. The two
// verified rows exercise a forward-only and a reverse-only pattern.

BitAssignment linked_oracle(const BitAssignment& in) {
    const int x = bit(in, "x"), y = bit(in, "y"), z = bit(in, "z");
    const int a = bit(in, "a"), b = bit(in, "b"), cc = bit(in, "c");
    return {{"a_out", x},      {"b_out", y ^ (z & x)}, {"c_out", z},
            {"x_out", a | b},  {"y_out", b},           {"z_out", b | cc}};
}

GateLayout linked_layout() {
    CircuitSpec c;
    c.name = "linked_toffoli";
    c.width = 1520;
    c.height = 800;

    // T is the toffoli geometry shifted by (+20,+80); T* mirrors it about
    // x = 1499/2 with the runs trimmed so nothing bridges the halves
    const MergeJoin t6m = merge_join({346, 510}, {386, 572}, {386, 560}, 30, 12,
                                     {0, 1}, 12, -1.0, 12.0);
    const MergeJoin s6m = merge_join({1153, 510}, {1113, 572}, {1113, 560}, 30, 12,
                                     {0, 1}, 12, -1.0, 12.0);
    const MergeJoin mz = merge_join({648, 58}, {576.8, 36}, {600, 36}, 30, 12,
                                    {-1, 0}, 15, -1.0);
    const MergeJoin mx = merge_join({772, 62}, {712, 90}, {730, 90}, 30, 12,
                                    {-1, 0}, 15, -1.0);
    const MergeJoin my = merge_join({760, 170}, {701, 126}, {718, 126}, 30, 12,
                                    {-1, 0}, 12, -1.0);
    const MergeJoin ma = merge_join({830, 720}, {895, 680}, {880, 680}, 30, 12,
                                    {1, 0}, 15, -1.0);
    const MergeJoin mb = merge_join({850, 570}, {915, 610}, {900, 610}, 30, 12,
                                    {1, 0}, 12, -1.0);
    const MergeJoin mc = merge_join({866, 784}, {935, 760}, {920, 760}, 30, 12,
                                    {1, 0}, 15, -1.0);

    c.channels = {
        chan("t_z", 30, {{700, 36}, {146, 36}, {146, 256}, {331, 256}}),
        chan("t_x", 30, {{740, 90}, {386, 90}, {386, 126}, {266, 126}, {266, 321}}),
        chan("t_y", 24,
             {{740, 126}, {636, 126}, {386, 376}, {346, 416}, {346, 510}, t6m.nose}),
        chan("t_p", 24,
             {{266, 256}, {331, 321}, {386, 376}, {476, 466}, {476, 496}, {386, 496},
              {386, 610}, {700, 610}}),
        chan("t_a", 30,
             {{266, 176}, {420, 176}, {420, 232}, {158, 494}, {158, 680}, {700, 680}}),
        chan("t_c", 30, {{206, 256}, {106, 356}, {106, 760}, {700, 760}}),
        chan("s_z", 30, {{799, 36}, {1353, 36}, {1353, 256}, {1168, 256}}),
        chan("s_x", 30, {{784, 90}, {1113, 90}, {1113, 126}, {1233, 126}, {1233, 321}}),
        chan("s_y", 24,
             {{784, 126}, {863, 126}, {1113, 376}, {1153, 416}, {1153, 510}, s6m.nose}),
        chan("s_p", 24,
             {{1233, 256}, {1168, 321}, {1113, 376}, {1023, 466}, {1023, 496},
              {1113, 496}, {1113, 610}, {799, 610}}),
        chan("s_a", 30,
             {{1233, 176}, {1079, 176}, {1079, 232}, {1341, 494}, {1341, 680}, {799, 680}}),
        chan("s_c", 30, {{1293, 256}, {1393, 356}, {1393, 760}, {799, 760}}),
        chan("m_z", 24, {{648, 58}, mz.nose}),
        chan("m_x", 24, {{772, 62}, mx.nose}),
        chan("m_y", 24, {{760, 170}, my.nose}),
        chan("m_a", 24, {{830, 720}, ma.nose}),
        chan("m_b", 24, {{850, 570}, mb.nose}),
        chan("m_c", 24, {{866, 784}, mc.nose}),
    };
    c.junctions = {
        exc("t_j1", {206, 256}),  exc("t_j2", {266, 176}),
        sub("t_j3", {266, 256}, 36), sub("t_j4", {331, 321}, 42),
        sub("t_j5", {386, 376}, 38), sub("t_j6", {386, 560}, 30),
        exc("s_j1", {1293, 256}), exc("s_j2", {1233, 176}),
        sub("s_j3", {1233, 256}, 36), sub("s_j4", {1168, 321}, 42),
        sub("s_j5", {1113, 376}, 38), sub("s_j6", {1113, 560}, 30),
        sub("M_z", {600, 36}, 30),  sub("M_x", {730, 90}, 30),
        sub("M_y", {718, 126}, 30), sub("M_a", {880, 680}, 30),
        sub("M_b", {900, 610}, 30), sub("M_c", {920, 760}, 30),
    };
    c.ports = {
        stim("z", {645, 56, 10, 1}),    stim("x", {769, 64, 10, 1}),
        stim("y", {757, 168, 10, 1}),   stim("a", {827, 718, 10, 1}),
        stim("b", {847, 568, 10, 1}),   stim("c", {863, 782, 10, 1}),
        det("a_out", {680, 665, 3, 31}), det("b_out", {680, 598, 3, 25}),
        det("c_out", {680, 745, 3, 31}), det("z_out", {804, 21, 3, 31}),
        det("x_out", {790, 75, 3, 31}),  det("y_out", {790, 114, 3, 25}),
    };

    GateLayout g;
    g.name = c.name;
    g.circuit = std::move(c);
    g.input_order = {"x", "y", "z", "a", "b", "c"};
    g.output_order = {"a_out", "b_out", "c_out", "x_out", "y_out", "z_out"};
    g.oracle = linked_oracle;

    auto B = [](const char* n) {
        return [n](const BitAssignment& s) { return bit(s, n); };
    };
    auto OR = [](const char* m, const char* n) {
        return [m, n](const BitAssignment& s) { return bit(s, m) | bit(s, n); };
    };
    g.probes = {
        probe("t_zj1", {131, 180, 31, 3}, "z", B("z")),
        probe("t_j1j3", {208, 241, 6, 31}, "z", B("z")),
        probe("t_j1c", {144, 294, 24, 24}, "z", B("z")),
        probe("t_xj2", {316, 111, 24, 31}, "x", B("x")),
        probe("t_j2j3", {251, 192, 31, 6}, "x", B("x")),
        probe("t_j2j4", {340, 161, 24, 31}, "x", B("x")),
        probe("t_j3j4", {296, 286, 6, 6}, "z&x",
              [](const BitAssignment& s) { return bit(s, "z") & bit(s, "x"); }),
        probe("t_j4a", {218, 410, 24, 24}, "x", B("x")),
        probe("t_yj5", {499, 239, 24, 24}, "y|(z&x)",
              [](const BitAssignment& s) {
                  return bit(s, "y") | (bit(s, "z") & bit(s, "x"));
              }),
        probe("t_j5j6", {334, 458, 25, 12}, "y^(z&x)",
              [](const BitAssignment& s) {
                  return bit(s, "y") ^ (bit(s, "z") & bit(s, "x"));
              }),
        probe("t_j5j7", {464, 472, 25, 6}, "z&x&!y",
              [](const BitAssignment& s) {
                  return bit(s, "z") & bit(s, "x") & (bit(s, "y") ^ 1);
              }),
        probe("t_j6b", {374, 592, 25, 4}, "y^(z&x)",
              [](const BitAssignment& s) {
                  return bit(s, "y") ^ (bit(s, "z") & bit(s, "x"));
              }),
        probe("t_culE", {311, 241, 10, 31}, "z&!x",
              [](const BitAssignment& s) { return bit(s, "z") & (bit(s, "x") ^ 1); }),
        probe("t_culF", {251, 301, 31, 6}, "x&!z",
              [](const BitAssignment& s) { return bit(s, "x") & (bit(s, "z") ^ 1); }),
        // T* side, driven by a/b/c; the excitable branch junctions spread a
        // climbing wave into every opening, so several rails carry b too
        probe("s_zj1", {1338, 180, 31, 3}, "b|c", OR("b", "c")),
        probe("s_j1j3", {1286, 241, 6, 31}, "b|c", OR("b", "c")),
        probe("s_j1c", {1332, 294, 24, 24}, "b|c", OR("b", "c")),
        probe("s_xj2", {1160, 111, 24, 31}, "a|b", OR("a", "b")),
        probe("s_j2j3", {1218, 192, 31, 6}, "a|b", OR("a", "b")),
        probe("s_j2j4", {1136, 161, 24, 31}, "a|b", OR("a", "b")),
        probe("s_j3j4", {1198, 286, 6, 6}, "b", B("b")),
        probe("s_j4a", {1258, 410, 24, 24}, "a|b", OR("a", "b")),
        probe("s_yj5", {977, 239, 24, 24}, "b", B("b")),
        probe("s_j5j6", {1141, 458, 25, 12}, "b", B("b")),
        probe("s_j5j7", {1011, 472, 25, 6}, "b", B("b")),
        probe("s_j6b", {1101, 592, 25, 4}, "b", B("b")),
        probe("s_culE", {1179, 241, 10, 31}, "b|c", OR("b", "c")),
        probe("s_culF", {1218, 301, 31, 6}, "a|b", OR("a", "b")),
    };
    g.verification_rows = {
        {{"x", 0}, {"y", 1}, {"z", 1}, {"a", 0}, {"b", 0}, {"c", 0}},
        {{"x", 0}, {"y", 0}, {"z", 0}, {"a", 0}, {"b", 1}, {"c", 1}},
    };
    g.report_notes = {
        "rows cover one forward-only and one reverse-only pattern; mixed "
        "simultaneous drive is outside the verified contract"};
    return g;
}

} // namespace

std::vector<std::string> shipped_gate_names() {
    return {"margolus",         "margolus_reversed", "fredkin", "fredkin_reversed",
            "toffoli",          "toffoli_reversed",  "routing_junction",
            "linked_toffoli"};
}

GateLayout get_layout(const std::string& name) {
    if (name == "margolus") return margolus_layout(false);
    if (name == "margolus_reversed") return margolus_layout(true);
    if (name == "fredkin") return fredkin_layout(false);
    if (name == "fredkin_reversed") return fredkin_layout(true);
    if (name == "toffoli") return toffoli_layout(false);
    if (name == "toffoli_reversed") return toffoli_layout(true);
    if (name == "routing_junction") return routing_layout();
    if (name == "linked_toffoli") return linked_layout();
    std::string names;
    for (const auto& n : shipped_gate_names()) names += " " + n;
    throw UnknownGate("unknown gate '" + name + "'; shipped gates:" + names);
}

BitAssignment expected_outputs(const GateLayout& gate, const BitAssignment& inputs) {
    return gate.oracle(inputs);
}

std::vector<std::pair<std::string, std::string>> probe_table(const GateLayout& gate) {
    if (gate.probes.empty())
        throw NoProbes("gate '" + gate.name + "' ships no interior probes");
    std::vector<std::pair<std::string, std::string>> rows;
    rows.reserve(gate.probes.size());
    for (const auto& p : gate.probes) rows.emplace_back(p.segment, p.expr_text);
    return rows;
}

std::vector<BitAssignment> all_input_rows(const GateLayout& gate) {
    return rows_for(gate.input_order);
}

std::string bits_string(const GateLayout& gate, const BitAssignment& inputs) {
    std::string s;
    s.reserve(gate.input_order.size());
    for (const auto& name : gate.input_order)
        s.push_back(bit(inputs, name) ? '1' : '0');
    return s;
}

BitAssignment parse_bits(const GateLayout& gate, const std::string& bits) {
    if (bits.size() != gate.input_order.size()) {
        std::ostringstream m;
        m << "gate '" << gate.name << "' takes " << gate.input_order.size()
          << " input bits, got \"" << bits << "\"";
        throw ParseError(m.str());
    }
    BitAssignment out;
    for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1')
            throw ParseError("input bits must be 0 or 1, got \"" + bits + "\"");
        out[gate.input_order[i]] = bits[i] - '0';
    }
    return out;
}

} // namespace bzgate
