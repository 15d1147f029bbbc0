#include "bzgate/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace bzgate {

namespace {

constexpr double kJunctionOnCenterlineTol = 0.75;  // station snap distance
constexpr double kPortAnchorTol = 2.0;             // port center to centerline
constexpr double kTieEps = 1e-6;                   // shortest-route tie detection

double sq(double v) { return v * v; }

} // namespace

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double len2 = abx * abx + aby * aby;
    double t = 0.0;
    if (len2 > 0.0) {
        t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
        t = std::clamp(t, 0.0, 1.0);
    }
    return std::sqrt(sq(p.x - (a.x + t * abx)) + sq(p.y - (a.y + t * aby)));
}

const JunctionSpec* CircuitSpec::find_junction(const std::string& id) const {
    for (const auto& j : junctions)
        if (j.id == id) return &j;
    return nullptr;
}

const PortSpec* CircuitSpec::find_port(const std::string& name) const {
    for (const auto& p : ports)
        if (p.name == name) return &p;
    return nullptr;
}

namespace {

// Distance from p to the whole polyline plus the arc-length position of
// the nearest point.
struct Projection {
    double dist = std::numeric_limits<double>::infinity();
    double s = 0.0;
};

Projection project_onto(const std::vector<Vec2>& poly, Vec2 p) {
    Projection best;
    double cum = 0.0;
    for (size_t k = 0; k + 1 < poly.size(); ++k) {
        const Vec2 a = poly[k], b = poly[k + 1];
        const double abx = b.x - a.x, aby = b.y - a.y;
        const double len = std::sqrt(abx * abx + aby * aby);
        double t = 0.0;
        if (len > 0.0) {
            t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / (len * len);
            t = std::clamp(t, 0.0, 1.0);
        }
        const double d = std::sqrt(sq(p.x - (a.x + t * abx)) + sq(p.y - (a.y + t * aby)));
        if (d < best.dist) {
            best.dist = d;
            best.s = cum + t * len;
        }
        cum += len;
    }
    return best;
}

double polyline_distance(const std::vector<Vec2>& poly, Vec2 p) {
    return project_onto(poly, p).dist;
}

// Paint every lattice cell within radius of segment ab. Returns false via
// `oob` name if a member cell falls outside the grid.
template <typename SetCell>
void paint_segment(Vec2 a, Vec2 b, double radius, SetCell&& set_cell) {
    const int x0 = static_cast<int>(std::floor(std::min(a.x, b.x) - radius - 1));
    const int x1 = static_cast<int>(std::ceil(std::max(a.x, b.x) + radius + 1));
    const int y0 = static_cast<int>(std::floor(std::min(a.y, b.y) - radius - 1));
    const int y1 = static_cast<int>(std::ceil(std::max(a.y, b.y) + radius + 1));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (point_segment_distance({double(x), double(y)}, a, b) <= radius + 1e-9)
                set_cell(x, y);
}

} // namespace

ExcitabilityField rasterize(const CircuitSpec& c) {
    ExcitabilityField phi(c.width, c.height, c.phi_background);
    for (const auto& ch : c.channels) {
        const double r = ch.width / 2.0;
        for (size_t k = 0; k + 1 < ch.vertices.size(); ++k) {
            paint_segment(ch.vertices[k], ch.vertices[k + 1], r, [&](int x, int y) {
                if (x < 0 || x >= c.width || y < 0 || y >= c.height)
                    throw GeometryError("channel '" + ch.name + "' footprint leaves the bounding box");
                phi.at(x, y) = c.phi_excitable;
            });
        }
    }
    for (const auto& j : c.junctions) {
        if (j.cls != ExcitabilityClass::SubExcitable) continue;
        const int x0 = static_cast<int>(std::floor(j.center.x - j.radius));
        const int x1 = static_cast<int>(std::ceil(j.center.x + j.radius));
        const int y0 = static_cast<int>(std::floor(j.center.y - j.radius));
        const int y1 = static_cast<int>(std::ceil(j.center.y + j.radius));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (sq(x - j.center.x) + sq(y - j.center.y) >= sq(j.radius)) continue;
                if (x < 0 || x >= c.width || y < 0 || y >= c.height)
                    throw GeometryError("junction '" + j.id + "' disc leaves the bounding box");
                phi.at(x, y) = c.phi_subexcitable;
            }
        }
    }
    return phi;
}

namespace {

// Routing graph: ports and junctions become stations threaded onto the
// channels that carry them; edges join stations adjacent along a channel.
struct StationGraph {
    std::map<std::string, std::vector<std::pair<std::string, double>>> adj;
    bool has(const std::string& id) const { return adj.count(id) != 0; }
};

StationGraph build_station_graph(const CircuitSpec& c) {
    StationGraph g;
    for (const auto& ch : c.channels) {
        std::vector<std::pair<double, std::string>> stations;  // (arc pos, id)
        for (const auto& j : c.junctions) {
            const auto pr = project_onto(ch.vertices, j.center);
            if (pr.dist <= kJunctionOnCenterlineTol) stations.emplace_back(pr.s, j.id);
        }
        for (const auto& p : c.ports) {
            const auto pr = project_onto(ch.vertices, p.rect.center());
            if (pr.dist <= kPortAnchorTol) stations.emplace_back(pr.s, p.name);
        }
        std::sort(stations.begin(), stations.end());
        for (size_t k = 0; k < stations.size(); ++k) {
            g.adj.try_emplace(stations[k].second);
            if (k > 0) {
                const double w = stations[k].first - stations[k - 1].first;
                g.adj[stations[k].second].emplace_back(stations[k - 1].second, w);
                g.adj[stations[k - 1].second].emplace_back(stations[k].second, w);
            }
        }
    }
    return g;
}

} // namespace

double path_length(const CircuitSpec& c, const std::string& from, const std::string& to) {
    const StationGraph g = build_station_graph(c);
    if (!g.has(from)) throw NoRoute("'" + from + "' is not a station on any channel");
    if (!g.has(to)) throw NoRoute("'" + to + "' is not a station on any channel");
    if (from == to) return 0.0;

    std::map<std::string, double> dist;
    std::map<std::string, int> nroutes;
    using Item = std::pair<double, std::string>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[from] = 0.0;
    nroutes[from] = 1;
    pq.emplace(0.0, from);
    while (!pq.empty()) {
        auto [d, id] = pq.top();
        pq.pop();
        if (d > dist[id] + kTieEps) continue;
        for (const auto& [nb, w] : g.adj.at(id)) {
            const double nd = d + w;
            auto it = dist.find(nb);
            if (it == dist.end() || nd < it->second - kTieEps) {
                dist[nb] = nd;
                nroutes[nb] = nroutes[id];
                pq.emplace(nd, nb);
            } else if (nd <= it->second + kTieEps) {
                nroutes[nb] += nroutes[id];
            }
        }
    }
    auto it = dist.find(to);
    if (it == dist.end())
        throw NoRoute("no route from '" + from + "' to '" + to + "'");
    if (nroutes[to] > 1)
        throw AmbiguousRoute("route from '" + from + "' to '" + to + "' is not unique");
    return it->second;
}

namespace {

bool rect_inside_channel(const Rect& r, const ChannelSpec& ch) {
    for (int y = r.y; y < r.y + r.h; ++y)
        for (int x = r.x; x < r.x + r.w; ++x)
            if (polyline_distance(ch.vertices, {double(x), double(y)}) > ch.width / 2.0 + 1e-9)
                return false;
    return true;
}

// The rect must block the channel: every footprint cell whose centerline
// projection falls strictly inside the rect's projected span belongs to
// the rect, so no wave can pass the rect's span without touching it.
bool rect_spans_channel(const Rect& r, const ChannelSpec& ch) {
    double s_lo = std::numeric_limits<double>::infinity(), s_hi = -s_lo;
    for (int cy : {r.y, r.y + r.h - 1})
        for (int cx : {r.x, r.x + r.w - 1}) {
            const auto pr = project_onto(ch.vertices, {double(cx), double(cy)});
            s_lo = std::min(s_lo, pr.s);
            s_hi = std::max(s_hi, pr.s);
        }
    s_lo += 0.51;
    s_hi -= 0.51;
    if (s_lo > s_hi) return false;
    const double pad = ch.width;
    const int x0 = r.x - static_cast<int>(pad), x1 = r.x + r.w + static_cast<int>(pad);
    const int y0 = r.y - static_cast<int>(pad), y1 = r.y + r.h + static_cast<int>(pad);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const auto pr = project_onto(ch.vertices, {double(x), double(y)});
            if (pr.dist > ch.width / 2.0 + 1e-9) continue;
            if (pr.s < s_lo || pr.s > s_hi) continue;
            if (!r.contains(x, y)) return false;
        }
    return true;
}

bool rects_overlap(const Rect& a, const Rect& b) {
    return a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h;
}

} // namespace

std::vector<std::string> structural_violations(const CircuitSpec& c) {
    std::vector<std::string> out;
    auto fail = [&](const std::string& m) { out.push_back(m); };

    if (c.width <= 0 || c.height <= 0) fail("bounding box must be positive");
    if (!(c.phi_excitable < kExcitableMax))
        fail("phi_excitable must be < 0.07");
    if (!(c.phi_subexcitable >= kExcitableMax && c.phi_subexcitable <= kSubExcitableMax))
        fail("phi_subexcitable must lie in [0.07, 0.09]");
    if (!(c.phi_background > kSubExcitableMax))
        fail("phi_background must be > 0.09");

    std::set<std::string> channel_names;
    for (const auto& ch : c.channels) {
        if (!channel_names.insert(ch.name).second)
            fail("duplicate channel name '" + ch.name + "'");
        if (ch.vertices.size() < 2)
            fail("channel '" + ch.name + "' needs at least 2 vertices");
        if (ch.width < 3.0)
            fail("channel '" + ch.name + "' is narrower than 3 nodes");
        for (size_t k = 0; k + 1 < ch.vertices.size(); ++k) {
            if (ch.vertices[k].x == ch.vertices[k + 1].x && ch.vertices[k].y == ch.vertices[k + 1].y)
                fail("channel '" + ch.name + "' has a zero-length segment");
        }
        for (const auto& v : ch.vertices)
            if (v.x < 0 || v.x >= c.width || v.y < 0 || v.y >= c.height)
                fail("channel '" + ch.name + "' has a vertex outside the bounding box");
    }
    try {
        rasterize(c);
    } catch (const GeometryError& e) {
        fail(e.what());
    }

    std::set<std::string> junction_ids;
    for (const auto& j : c.junctions) {
        if (!junction_ids.insert(j.id).second)
            fail("duplicate junction id '" + j.id + "'");
        if (!(j.radius > 0.0)) fail("junction '" + j.id + "' needs a positive radius");
        int carriers = 0;
        for (const auto& ch : c.channels)
            if (polyline_distance(ch.vertices, j.center) <= ch.width / 2.0 + 1e-9) ++carriers;
        if (carriers < 2)
            fail("junction '" + j.id + "' does not lie on at least two channel footprints");
    }

    std::set<std::string> in_names, out_names;
    for (const auto& p : c.ports) {
        auto& names = p.kind == PortKind::Input ? in_names : out_names;
        if (!names.insert(p.name).second)
            fail("duplicate port name '" + p.name + "'");
        if (p.rect.w <= 0 || p.rect.h <= 0) {
            fail("port '" + p.name + "' has an empty rect");
            continue;
        }
        const ChannelSpec* home = nullptr;
        for (const auto& ch : c.channels)
            if (rect_inside_channel(p.rect, ch)) {
                home = &ch;
                break;
            }
        if (!home) {
            fail("port '" + p.name + "' rect is not wholly inside one channel footprint");
            continue;
        }
        if (p.kind == PortKind::Input) {
            if (p.rect.area() != 10)
                fail("input port '" + p.name + "' stimulus rect area must be 10");
        } else {
            if (!rect_spans_channel(p.rect, *home))
                fail("output port '" + p.name + "' detector does not span channel '" +
                     home->name + "'");
            for (const auto& j : c.junctions) {
                double dmin = std::numeric_limits<double>::infinity();
                for (int y = p.rect.y; y < p.rect.y + p.rect.h; ++y)
                    for (int x = p.rect.x; x < p.rect.x + p.rect.w; ++x)
                        dmin = std::min(dmin, std::sqrt(sq(x - j.center.x) + sq(y - j.center.y)));
                if (dmin < 30.0)
                    fail("output port '" + p.name + "' detector is closer than 30 nodes to junction '" +
                         j.id + "'");
            }
        }
    }
    for (size_t i = 0; i < c.ports.size(); ++i)
        for (size_t k = i + 1; k < c.ports.size(); ++k)
            if (c.ports[i].kind == PortKind::Output && c.ports[k].kind == PortKind::Output &&
                rects_overlap(c.ports[i].rect, c.ports[k].rect))
                fail("detector rects of '" + c.ports[i].name + "' and '" + c.ports[k].name +
                     "' overlap");

    for (const auto& cons : c.constraints)
        for (const std::string& id : {cons.a.from, cons.a.to, cons.b.from, cons.b.to})
            if (!c.find_junction(id) && !c.find_port(id))
                fail("constraint references unknown station '" + id + "'");
    return out;
}

std::vector<std::string> validate(const CircuitSpec& c) {
    std::vector<std::string> out = structural_violations(c);
    for (const auto& cons : c.constraints) {
        std::ostringstream label;
        label << (cons.kind == ConstraintKind::EqualLength    ? "equal"
                  : cons.kind == ConstraintKind::StrictlyLonger ? "longer"
                                                                : "gap")
              << " " << cons.a.from << ">" << cons.a.to << " " << cons.b.from << ">" << cons.b.to;
        try {
            const double la = path_length(c, cons.a.from, cons.a.to);
            const double lb = path_length(c, cons.b.from, cons.b.to);
            switch (cons.kind) {
            case ConstraintKind::EqualLength:
                if (std::abs(la - lb) > cons.value) {
                    std::ostringstream m;
                    m << "constraint " << label.str() << " violated: |" << la << " - " << lb
                      << "| > " << cons.value;
                    out.push_back(m.str());
                }
                break;
            case ConstraintKind::StrictlyLonger:
                if (la <= lb + cons.value) {
                    std::ostringstream m;
                    m << "constraint " << label.str() << " violated: " << la
                      << " does not exceed " << lb << " by " << cons.value;
                    out.push_back(m.str());
                }
                break;
            case ConstraintKind::MinArrivalGap:
                if (std::abs(la - lb) < cons.value) {
                    std::ostringstream m;
                    m << "constraint " << label.str() << " violated: |" << la << " - " << lb
                      << "| < " << cons.value;
                    out.push_back(m.str());
                }
                break;
            }
        } catch (const std::runtime_error& e) {
            out.push_back("constraint " + label.str() + ": " + e.what());
        }
    }
    return out;
}

} // namespace bzgate
