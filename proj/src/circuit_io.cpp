#include "bzgate/circuit_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bzgate/errors.hpp"

namespace bzgate {

namespace {

struct LineCursor {
    int lineno = 0;
    std::vector<std::string> tokens;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("line " + std::to_string(lineno) + ": " + why);
    }
    bool done() const { return pos >= tokens.size(); }
    const std::string& next(const std::string& what) {
        if (done()) fail("expected " + what);
        return tokens[pos++];
    }
    void expect(const std::string& literal) {
        if (next("'" + literal + "'") != literal) {
            --pos;
            fail("expected '" + literal + "', got '" + tokens[pos] + "'");
        }
    }
};

double parse_num(LineCursor& c, const std::string& what) {
    const std::string& t = c.next(what);
    size_t used = 0;
    double v = 0;
    try {
        v = std::stod(t, &used);
    } catch (...) {
        c.fail("bad number for " + what + ": '" + t + "'");
    }
    if (used != t.size()) c.fail("bad number for " + what + ": '" + t + "'");
    return v;
}

int parse_int(LineCursor& c, const std::string& what) {
    const double v = parse_num(c, what);
    if (v != std::floor(v)) c.fail(what + " must be an integer");
    return static_cast<int>(v);
}

// "(a,b)" or "(a,b,c,d)" as one token.
std::vector<double> parse_tuple(LineCursor& c, size_t arity, const std::string& what) {
    const std::string t = c.next(what);
    if (t.size() < 2 || t.front() != '(' || t.back() != ')')
        c.fail(what + " must look like (a,b): got '" + t + "'");
    std::vector<double> vals;
    std::string body = t.substr(1, t.size() - 2);
    std::stringstream ss(body);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        try {
            size_t used = 0;
            vals.push_back(std::stod(piece, &used));
            if (used != piece.size()) throw std::invalid_argument(piece);
        } catch (...) {
            c.fail("bad number '" + piece + "' in " + what);
        }
    }
    if (vals.size() != arity)
        c.fail(what + " needs " + std::to_string(arity) + " numbers");
    return vals;
}

PathRef parse_path(LineCursor& c, const std::string& what) {
    const std::string t = c.next(what);
    const auto gt = t.find('>');
    if (gt == std::string::npos || gt == 0 || gt + 1 == t.size())
        c.fail(what + " must look like from>to: got '" + t + "'");
    if (t.find('>', gt + 1) != std::string::npos)
        c.fail(what + " must name exactly two stations: got '" + t + "'");
    return {t.substr(0, gt), t.substr(gt + 1)};
}

// Shortest decimal that parses back to the same double, so
// parse(serialize(c)) reproduces the geometry bit for bit.
std::string fmt(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

} // namespace

CircuitSpec parse_circuit(const std::string& text) {
    CircuitSpec spec;
    bool saw_grid = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        LineCursor c{lineno};
        std::istringstream ts(raw);
        std::string tok;
        while (ts >> tok) c.tokens.push_back(tok);
        if (c.tokens.empty()) continue;

        const std::string kind = c.next("declaration");
        if (kind == "grid") {
            spec.width = parse_int(c, "grid width");
            spec.height = parse_int(c, "grid height");
            saw_grid = true;
        } else if (kind == "phi") {
            const std::string which = c.next("phi class");
            const double v = parse_num(c, "phi value");
            if (which == "excitable") spec.phi_excitable = v;
            else if (which == "subexcitable") spec.phi_subexcitable = v;
            else if (which == "background") spec.phi_background = v;
            else c.fail("unknown phi class '" + which + "'");
        } else if (kind == "channel") {
            ChannelSpec ch;
            ch.name = c.next("channel name");
            c.expect("width");
            ch.width = parse_num(c, "channel width");
            c.expect(":");
            while (!c.done()) {
                const auto v = parse_tuple(c, 2, "vertex");
                ch.vertices.push_back({v[0], v[1]});
            }
            spec.channels.push_back(std::move(ch));
        } else if (kind == "junction") {
            JunctionSpec j;
            j.id = c.next("junction id");
            c.expect("center");
            const auto ctr = parse_tuple(c, 2, "junction center");
            j.center = {ctr[0], ctr[1]};
            c.expect("radius");
            j.radius = parse_num(c, "junction radius");
            c.expect("class");
            const std::string cls = c.next("junction class");
            if (cls == "excitable") j.cls = ExcitabilityClass::Excitable;
            else if (cls == "subexcitable") j.cls = ExcitabilityClass::SubExcitable;
            else c.fail("unknown junction class '" + cls + "'");
            spec.junctions.push_back(std::move(j));
        } else if (kind == "port") {
            PortSpec p;
            p.name = c.next("port name");
            c.expect("kind");
            const std::string pk = c.next("port kind");
            if (pk == "input") p.kind = PortKind::Input;
            else if (pk == "output") p.kind = PortKind::Output;
            else c.fail("unknown port kind '" + pk + "'");
            c.expect(p.kind == PortKind::Input ? "stim" : "detect");
            const auto r = parse_tuple(c, 4, "port rect");
            for (double v : r)
                if (v != std::floor(v)) c.fail("port rect values must be integers");
            p.rect = {int(r[0]), int(r[1]), int(r[2]), int(r[3])};
            spec.ports.push_back(std::move(p));
        } else if (kind == "constraint") {
            PathConstraint pc;
            const std::string ck = c.next("constraint kind");
            pc.a = parse_path(c, "first path");
            pc.b = parse_path(c, "second path");
            if (ck == "equal") {
                pc.kind = ConstraintKind::EqualLength;
                c.expect("tol");
            } else if (ck == "longer") {
                pc.kind = ConstraintKind::StrictlyLonger;
                c.expect("gap");
            } else if (ck == "gap") {
                pc.kind = ConstraintKind::MinArrivalGap;
                c.expect("min");
            } else {
                c.fail("unknown constraint kind '" + ck + "'");
            }
            pc.value = parse_num(c, "constraint value");
            spec.constraints.push_back(std::move(pc));
        } else {
            c.fail("unknown declaration '" + kind + "'");
        }
        if (!c.done()) c.fail("trailing tokens after declaration");
    }
    if (!saw_grid) throw ParseError("missing grid declaration");

    const auto problems = structural_violations(spec);
    if (!problems.empty()) {
        std::string msg = "invalid circuit:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ParseError(msg);
    }
    return spec;
}

std::string serialize_circuit(const CircuitSpec& c) {
    std::ostringstream out;
    out << "grid " << c.width << " " << c.height << "\n";
    out << "phi excitable " << fmt(c.phi_excitable) << "\n";
    out << "phi subexcitable " << fmt(c.phi_subexcitable) << "\n";
    out << "phi background " << fmt(c.phi_background) << "\n";

    auto channels = c.channels;
    std::sort(channels.begin(), channels.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    for (const auto& ch : channels) {
        out << "channel " << ch.name << " width " << fmt(ch.width) << " :";
        for (const auto& v : ch.vertices) out << " (" << fmt(v.x) << "," << fmt(v.y) << ")";
        out << "\n";
    }

    auto junctions = c.junctions;
    std::sort(junctions.begin(), junctions.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (const auto& j : junctions) {
        out << "junction " << j.id << " center (" << fmt(j.center.x) << "," << fmt(j.center.y)
            << ") radius " << fmt(j.radius) << " class "
            << (j.cls == ExcitabilityClass::Excitable ? "excitable" : "subexcitable") << "\n";
    }

    auto ports = c.ports;
    std::sort(ports.begin(), ports.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    for (const auto& p : ports) {
        out << "port " << p.name << " kind "
            << (p.kind == PortKind::Input ? "input stim (" : "output detect (") << p.rect.x << ","
            << p.rect.y << "," << p.rect.w << "," << p.rect.h << ")\n";
    }

    std::vector<std::string> lines;
    for (const auto& pc : c.constraints) {
        std::ostringstream line;
        line << "constraint "
             << (pc.kind == ConstraintKind::EqualLength    ? "equal"
                 : pc.kind == ConstraintKind::StrictlyLonger ? "longer"
                                                             : "gap")
             << " " << pc.a.from << ">" << pc.a.to << " " << pc.b.from << ">" << pc.b.to << " "
             << (pc.kind == ConstraintKind::EqualLength    ? "tol"
                 : pc.kind == ConstraintKind::StrictlyLonger ? "gap"
                                                             : "min")
             << " " << fmt(pc.value);
        lines.push_back(line.str());
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) out << l << "\n";
    return out.str();
}

CircuitSpec load_circuit_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open circuit file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    CircuitSpec spec = parse_circuit(buf.str());
    spec.name = path;
    return spec;
}

} // namespace bzgate
