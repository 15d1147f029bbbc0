#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bzgate/geometry.hpp"

namespace bzgate {

using BitAssignment = std::map<std::string, int>;

// Named detector rectangle on an interior channel segment plus the
// Boolean function of the inputs it is expected to realise.
struct ProbeSpec {
    std::string segment;
    Rect rect;
    std::string expr_text;
    std::function<int(const BitAssignment&)> expr;
};

struct GateLayout {
    std::string name;
    CircuitSpec circuit;
    std::vector<std::string> input_order;   // bit order for CLI bitstrings
    std::vector<std::string> output_order;
    std::function<BitAssignment(const BitAssignment&)> oracle;
    std::vector<ProbeSpec> probes;
    // Rows verified by verify_gate; all 2^k assignments unless the gate
    // defines a narrower behavioural contract (routing junction, linked
    // pair).
    std::vector<BitAssignment> verification_rows;
    std::vector<std::string> report_notes;
};

std::vector<std::string> shipped_gate_names();

// Throws UnknownGate for names outside the shipped set.
GateLayout get_layout(const std::string& name);

// Pure oracle evaluation; throws MissingInputBit.
BitAssignment expected_outputs(const GateLayout& gate, const BitAssignment& inputs);

// (segment name, expression text) pairs; throws NoProbes.
std::vector<std::pair<std::string, std::string>> probe_table(const GateLayout& gate);

std::vector<BitAssignment> all_input_rows(const GateLayout& gate);
std::string bits_string(const GateLayout& gate, const BitAssignment& inputs);
BitAssignment parse_bits(const GateLayout& gate, const std::string& bits);

} // namespace bzgate
