#pragma once

#include <string>

#include "bzgate/geometry.hpp"

namespace bzgate {

// Line-oriented circuit description:
//   grid W H
//   phi excitable V | phi subexcitable V | phi background V
//   channel NAME width W : (x1,y1) (x2,y2) ...
//   junction ID center (x,y) radius R class excitable|subexcitable
//   port NAME kind input stim (x,y,w,h) | port NAME kind output detect (x,y,w,h)
//   constraint equal A>B C>D tol T | constraint longer A>B C>D gap G | constraint gap A>B C>D min G
// '#' starts a comment. Coordinates are 0-based (column,row), row 0 on top.
// Structural rule violations surface as ParseError. The in-memory name
// field is a label only; the file format does not carry it.
CircuitSpec parse_circuit(const std::string& text);

// Canonical form: declarations in grammar order, sorted by name within
// each kind. parse(serialize(c)) reproduces c (minus the name label).
std::string serialize_circuit(const CircuitSpec& c);

CircuitSpec load_circuit_file(const std::string& path);

} // namespace bzgate
