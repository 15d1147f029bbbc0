#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bzgate/errors.hpp"
#include "bzgate/gates.hpp"

using namespace bzgate;

namespace {

// Literal input->output tables, typed out by hand from the gate definitions.
// Bit strings follow input_order / output_order of the layout in question.
struct TableRow {
    const char* in;
    const char* out;
};

BitAssignment from_bits(const std::vector<std::string>& order, const std::string& bits) {
    REQUIRE(order.size() == bits.size());
    BitAssignment m;
    for (size_t i = 0; i < order.size(); ++i) m[order[i]] = bits[i] - '0';
    return m;
}

std::string to_bits(const std::vector<std::string>& order, const BitAssignment& m) {
    std::string s;
    for (const auto& name : order) {
        auto it = m.find(name);
        REQUIRE(it != m.end());
        s.push_back(it->second ? '1' : '0');
    }
    return s;
}

void check_table(const GateLayout& g, const std::vector<TableRow>& table) {
    REQUIRE(table.size() == (size_t{1} << g.input_order.size()));
    for (const auto& row : table) {
        CAPTURE(row.in);
        const auto in = from_bits(g.input_order, row.in);
        CHECK(to_bits(g.output_order, g.oracle(in)) == row.out);
        CHECK(to_bits(g.output_order, expected_outputs(g, in)) == row.out);
    }
}

const std::vector<TableRow> kMargolus = {
    // x y -> a b c d    (a = !x&y, b = x&!y, c = d = x&y)
    {"00", "0000"},
    {"01", "1000"},
    {"10", "0100"},
    {"11", "0011"},
};

const std::vector<TableRow> kMargolusReversed = {
    // a b c d -> x y    (x = !a&b | c, y = a&!b | d)
    {"0000", "00"}, {"0001", "01"}, {"0010", "10"}, {"0011", "11"},
    {"0100", "10"}, {"0101", "11"}, {"0110", "10"}, {"0111", "11"},
    {"1000", "01"}, {"1001", "01"}, {"1010", "11"}, {"1011", "11"},
    {"1100", "00"}, {"1101", "01"}, {"1110", "10"}, {"1111", "11"},
};

const std::vector<TableRow> kFredkin = {
    // z x y -> a b c    (z=1 passes x,y straight; z=0 swaps them)
    {"000", "000"}, {"001", "100"}, {"010", "010"}, {"011", "110"},
    {"100", "001"}, {"101", "011"}, {"110", "101"}, {"111", "111"},
};

const std::vector<TableRow> kFredkinReversed = {
    // a b c -> z x y    (z = a|b|c, x = a, y = b)
    {"000", "000"}, {"001", "100"}, {"010", "101"}, {"011", "101"},
    {"100", "110"}, {"101", "110"}, {"110", "111"}, {"111", "111"},
};

const std::vector<TableRow> kToffoli = {
    // z x y -> a b c    (a = x, b = y ^ (z&x), c = z)
    {"000", "000"}, {"001", "010"}, {"010", "100"}, {"011", "110"},
    {"100", "001"}, {"101", "011"}, {"110", "111"}, {"111", "101"},
};

const std::vector<TableRow> kToffoliReversed = {
    // a b c -> z x y    (z = b|c, x = a|b, y = b)
    {"000", "000"}, {"001", "100"}, {"010", "111"}, {"011", "111"},
    {"100", "010"}, {"101", "110"}, {"110", "111"}, {"111", "111"},
};

// lookup helpers reused by the linked-pair cross-check
std::string table_lookup(const std::vector<TableRow>& table, const std::string& in) {
    for (const auto& row : table)
        if (in == row.in) return row.out;
    FAIL("no table row for input ", in);
    return {};
}

} // namespace

TEST_CASE("shipped gate registry") {
    const auto names = shipped_gate_names();
    const std::set<std::string> expect = {
        "margolus",         "margolus_reversed", "fredkin", "fredkin_reversed",
        "toffoli",          "toffoli_reversed",  "routing_junction",
        "linked_toffoli"};
    CHECK(names.size() == expect.size());
    CHECK(std::set<std::string>(names.begin(), names.end()) == expect);

    for (const auto& n : names) {
        CAPTURE(n);
        const auto g = get_layout(n);
        CHECK(g.name == n);
        CHECK(g.circuit.name == n);
        CHECK(g.oracle != nullptr);
        CHECK(!g.input_order.empty());
        CHECK(!g.output_order.empty());
        // every named bit is a real port of the right kind
        for (const auto& in : g.input_order) {
            const auto* p = g.circuit.find_port(in);
            REQUIRE(p != nullptr);
            CHECK(p->kind == PortKind::Input);
        }
        for (const auto& out : g.output_order) {
            const auto* p = g.circuit.find_port(out);
            REQUIRE(p != nullptr);
            CHECK(p->kind == PortKind::Output);
        }
    }

    CHECK_THROWS_AS(get_layout("margolis"), UnknownGate);
    CHECK_THROWS_WITH_AS(get_layout(""), doctest::Contains("unknown gate"), UnknownGate);
}

TEST_CASE("margolus truth tables") {
    const auto fwd = get_layout("margolus");
    check_table(fwd, kMargolus);
    CHECK(fwd.verification_rows.size() == 4);

    const auto rev = get_layout("margolus_reversed");
    check_table(rev, kMargolusReversed);
    CHECK(rev.verification_rows.size() == 16);

    SUBCASE("reverse undoes forward on every input pair") {
        for (const auto& row : kMargolus) {
            const auto mid = fwd.oracle(from_bits(fwd.input_order, row.in));
            CHECK(to_bits(rev.output_order, rev.oracle(mid)) == row.in);
        }
    }
}

TEST_CASE("fredkin truth tables") {
    check_table(get_layout("fredkin"), kFredkin);
    check_table(get_layout("fredkin_reversed"), kFredkinReversed);

    // control bit is conserved, and the swap is a permutation of {x, y}
    const auto g = get_layout("fredkin");
    for (const auto& in : all_input_rows(g)) {
        const auto out = g.oracle(in);
        CHECK(out.at("c") == in.at("z"));
        CHECK(out.at("a") + out.at("b") == in.at("x") + in.at("y"));
    }
}

TEST_CASE("toffoli truth tables") {
    check_table(get_layout("toffoli"), kToffoli);
    check_table(get_layout("toffoli_reversed"), kToffoliReversed);

    // b differs from y exactly when both controls are high
    const auto g = get_layout("toffoli");
    for (const auto& in : all_input_rows(g)) {
        const auto out = g.oracle(in);
        CHECK((out.at("b") ^ in.at("y")) == (in.at("z") & in.at("x")));
    }
}

TEST_CASE("routing junction is a one-way merge") {
    const auto g = get_layout("routing_junction");
    CHECK(g.input_order == std::vector<std::string>{"p1", "p2", "p3"});

    // total function: p1 never echoes, p3 forwards to p2, p1|p2 forward to p3
    for (const auto& in : all_input_rows(g)) {
        const auto out = g.oracle(in);
        CHECK(out.at("p1_out") == 0);
        CHECK(out.at("p2_out") == in.at("p3"));
        CHECK(out.at("p3_out") == (in.at("p1") | in.at("p2")));
    }

    // verified rows are the three single-source excitations, in port order
    REQUIRE(g.verification_rows.size() == 3);
    CHECK(bits_string(g, g.verification_rows[0]) == "100");
    CHECK(bits_string(g, g.verification_rows[1]) == "010");
    CHECK(bits_string(g, g.verification_rows[2]) == "001");
}

TEST_CASE("linked toffoli pair oracle splits into the two one-way tables") {
    const auto g = get_layout("linked_toffoli");
    REQUIRE(g.input_order ==
            std::vector<std::string>{"x", "y", "z", "a", "b", "c"});

    for (const auto& in : all_input_rows(g)) {
        const auto out = g.oracle(in);
        const std::string zxy = {char('0' + in.at("z")), char('0' + in.at("x")),
                                 char('0' + in.at("y"))};
        const std::string abc = {char('0' + in.at("a")), char('0' + in.at("b")),
                                 char('0' + in.at("c"))};
        const std::string t_out = table_lookup(kToffoli, zxy);          // a b c
        const std::string s_out = table_lookup(kToffoliReversed, abc);  // z x y
        CAPTURE(zxy);
        CAPTURE(abc);
        CHECK(out.at("a_out") == t_out[0] - '0');
        CHECK(out.at("b_out") == t_out[1] - '0');
        CHECK(out.at("c_out") == t_out[2] - '0');
        CHECK(out.at("z_out") == s_out[0] - '0');
        CHECK(out.at("x_out") == s_out[1] - '0');
        CHECK(out.at("y_out") == s_out[2] - '0');
    }

    REQUIRE(g.verification_rows.size() == 2);
    CHECK(bits_string(g, g.verification_rows[0]) == "011000");
    CHECK(bits_string(g, g.verification_rows[1]) == "000011");

    // one-way rows: the driven half fires, the idle half stays dark
    const auto fwd = g.oracle(g.verification_rows[0]);
    CHECK(fwd.at("b_out") == 1);
    CHECK(fwd.at("c_out") == 1);
    CHECK(fwd.at("a_out") == 0);
    CHECK(fwd.at("x_out") + fwd.at("y_out") + fwd.at("z_out") == 0);
    const auto bwd = g.oracle(g.verification_rows[1]);
    CHECK(bwd.at("x_out") == 1);
    CHECK(bwd.at("y_out") == 1);
    CHECK(bwd.at("z_out") == 1);
    CHECK(bwd.at("a_out") + bwd.at("b_out") + bwd.at("c_out") == 0);
}

TEST_CASE("input row enumeration and bit strings") {
    for (const auto& name : shipped_gate_names()) {
        CAPTURE(name);
        const auto g = get_layout(name);
        const auto rows = all_input_rows(g);
        const size_t k = g.input_order.size();
        REQUIRE(rows.size() == (size_t{1} << k));

        for (size_t idx = 0; idx < rows.size(); ++idx) {
            // row index written in binary, first-named input = leftmost bit
            std::string want(k, '0');
            for (size_t i = 0; i < k; ++i)
                if (idx & (size_t{1} << (k - 1 - i))) want[i] = '1';
            const auto bits = bits_string(g, rows[idx]);
            CHECK(bits == want);
            CHECK(parse_bits(g, bits) == rows[idx]);
        }
    }
}

TEST_CASE("bit string parsing rejects malformed input") {
    const auto g = get_layout("toffoli");
    CHECK_THROWS_AS(parse_bits(g, "01"), ParseError);
    CHECK_THROWS_AS(parse_bits(g, "0110"), ParseError);
    CHECK_THROWS_AS(parse_bits(g, ""), ParseError);
    CHECK_THROWS_WITH_AS(parse_bits(g, "999"), doctest::Contains("must be 0 or 1"),
                         ParseError);
    CHECK_THROWS_WITH_AS(parse_bits(g, "01"), doctest::Contains("takes 3 input bits"),
                         ParseError);

    CHECK_THROWS_AS(bits_string(g, BitAssignment{{"z", 1}}), MissingInputBit);
    CHECK_THROWS_AS(expected_outputs(g, BitAssignment{{"z", 1}, {"x", 0}}),
                    MissingInputBit);
}

TEST_CASE("interior probes") {
    const auto g = get_layout("margolus");
    const auto table = probe_table(g);
    REQUIRE(table.size() == 7);
    CHECK(table.front().first == "xj1");
    CHECK(table.front().second == "x");

    std::set<std::string> segs;
    for (const auto& [seg, expr] : table) {
        CHECK(!expr.empty());
        CHECK(segs.insert(seg).second); // segment names are unique
    }

    SUBCASE("probe predicates match the wave algebra on every input row") {
        std::map<std::string, std::function<int(int, int)>> want = {
            {"xj1", [](int x, int) { return x; }},
            {"yj1", [](int, int y) { return y; }},
            {"j1a", [](int x, int y) { return (x ^ 1) & y; }},
            {"j1b", [](int x, int y) { return x & (y ^ 1); }},
            {"j1j2", [](int x, int y) { return x & y; }},
            {"j2c", [](int x, int y) { return x & y; }},
            {"j2d", [](int x, int y) { return x & y; }},
        };
        for (const auto& p : g.probes) {
            CAPTURE(p.segment);
            REQUIRE(want.count(p.segment) == 1);
            for (const auto& in : all_input_rows(g))
                CHECK(p.expr(in) == want[p.segment](in.at("x"), in.at("y")));
        }
    }

    SUBCASE("probe rectangles sit inside the circuit") {
        for (const auto& name : shipped_gate_names()) {
            const auto lay = get_layout(name);
            for (const auto& p : lay.probes) {
                CAPTURE(name);
                CAPTURE(p.segment);
                CHECK(p.rect.x >= 0);
                CHECK(p.rect.y >= 0);
                CHECK(p.rect.x + p.rect.w <= lay.circuit.width);
                CHECK(p.rect.y + p.rect.h <= lay.circuit.height);
                for (const auto& in : lay.verification_rows) {
                    const int v = p.expr(in);
                    CHECK((v == 0 || v == 1));
                }
            }
        }
    }

    CHECK(probe_table(get_layout("fredkin")).size() == 22);
    CHECK(probe_table(get_layout("toffoli")).size() == 14);
    CHECK(probe_table(get_layout("linked_toffoli")).size() == 28);
    CHECK_THROWS_AS(probe_table(get_layout("margolus_reversed")), NoProbes);
    CHECK_THROWS_AS(probe_table(get_layout("routing_junction")), NoProbes);
}
