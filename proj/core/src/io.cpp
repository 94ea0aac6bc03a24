#include "qcplane/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qcplane::io {

using nlohmann::json;

std::string num(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return j;
}

void save_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot write " + path);
    out << content;
}

namespace {

double require_num(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw SchemaError(std::string("missing or non-numeric field: ") + key);
    return j[key].get<double>();
}

const json& require_array(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array())
        throw SchemaError(std::string("missing or non-array field: ") + key);
    return j[key];
}

Vec2 vec_from(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError("expected a two-number array");
    return {j[0].get<double>(), j[1].get<double>()};
}

json vec_to(Vec2 v) { return json::array({v.x, v.y}); }

}  // namespace

json to_json(const GridMap& m) {
    json j;
    j["domain"] = {{"x0", m.domain().x0}, {"y0", m.domain().y0},
                   {"w", m.domain().w}, {"h", m.domain().h}};
    j["spacing"] = m.spacing();
    json vals = json::array();
    for (std::size_t k = 0; k < m.nx() * m.ny(); ++k) {
        std::size_t i = k % m.nx(), jj = k / m.nx();
        if (m.defined(i, jj))
            vals.push_back(vec_to(m.value(i, jj)));
        else
            vals.push_back(nullptr);
    }
    j["values"] = std::move(vals);
    return j;
}

GridMap grid_map_from_json(const json& j) {
    if (!j.is_object() || !j.contains("domain") || !j["domain"].is_object())
        throw SchemaError("GridMap: missing domain object");
    const json& d = j["domain"];
    Rect dom{require_num(d, "x0"), require_num(d, "y0"),
             require_num(d, "w"), require_num(d, "h")};
    double spacing = require_num(j, "spacing");
    if (!(spacing > 0.0)) throw SchemaError("GridMap: spacing must be positive");
    GridMap m(dom, spacing);
    const json& vals = require_array(j, "values");
    if (vals.size() != m.nx() * m.ny())
        throw SchemaError("GridMap: values length " + std::to_string(vals.size()) +
                          " does not match " + std::to_string(m.nx() * m.ny()) +
                          " lattice nodes");
    for (std::size_t k = 0; k < vals.size(); ++k) {
        std::size_t i = k % m.nx(), jj = k / m.nx();
        if (vals[k].is_null())
            m.mark_missing(i, jj);
        else
            m.set(i, jj, vec_from(vals[k]));
    }
    return m;
}

json to_json(const Homeo1D& s) {
    json j;
    j["a"] = s.a();
    j["b"] = s.b();
    j["breakpoints"] = s.breakpoints();
    j["values"] = s.values();
    return j;
}

Homeo1D homeo_from_json(const json& j) {
    double a = require_num(j, "a"), b = require_num(j, "b");
    const json& bp = require_array(j, "breakpoints");
    const json& vv = require_array(j, "values");
    if (bp.size() != vv.size() || bp.size() < 2)
        throw SchemaError("Homeo1D: breakpoints/values must match with length >= 2");
    std::vector<double> ts, ss;
    for (const auto& x : bp) {
        if (!x.is_number()) throw SchemaError("Homeo1D: non-numeric breakpoint");
        ts.push_back(x.get<double>());
    }
    for (const auto& x : vv) {
        if (!x.is_number()) throw SchemaError("Homeo1D: non-numeric value");
        ss.push_back(x.get<double>());
    }
    if (std::abs(ts.back() - a) > 1e-9 * (1.0 + std::abs(a)) ||
        std::abs(ss.back() - b) > 1e-9 * (1.0 + std::abs(b)))
        throw SchemaError("Homeo1D: a/b disagree with the last breakpoint/value");
    return Homeo1D(std::move(ts), std::move(ss));
}

json to_json(const PlanarCurve& c) {
    json j;
    j["closed"] = c.closed;
    json v = json::array();
    for (Vec2 p : c.vertices) v.push_back(vec_to(p));
    j["vertices"] = std::move(v);
    return j;
}

PlanarCurve curve_from_json(const json& j) {
    if (!j.contains("closed") || !j["closed"].is_boolean())
        throw SchemaError("PlanarCurve: missing boolean field closed");
    PlanarCurve c;
    c.closed = j["closed"].get<bool>();
    for (const auto& v : require_array(j, "vertices")) c.vertices.push_back(vec_from(v));
    if (c.vertices.size() < 2) throw SchemaError("PlanarCurve: need at least 2 vertices");
    return c;
}

json to_json(const BoundaryMap& b) {
    json j;
    j["params"] = b.params;
    json p = json::array();
    for (Vec2 v : b.points) p.push_back(vec_to(v));
    j["points"] = std::move(p);
    return j;
}

BoundaryMap boundary_map_from_json(const json& j) {
    BoundaryMap b;
    for (const auto& p : require_array(j, "params")) {
        if (!p.is_number()) throw SchemaError("BoundaryMap: non-numeric parameter");
        b.params.push_back(p.get<double>());
    }
    for (const auto& p : require_array(j, "points")) b.points.push_back(vec_from(p));
    if (b.params.size() != b.points.size() || b.params.size() < 3)
        throw SchemaError("BoundaryMap: params/points must match with length >= 3");
    return b;
}

json to_json(const EmpiricalYoungMeasure& m) {
    json j;
    j["domain"] = {{"x0", m.domain().x0}, {"y0", m.domain().y0},
                   {"w", m.domain().w}, {"h", m.domain().h}};
    j["cell_size"] = m.cell_size();
    j["cells_x"] = m.cells_x();
    j["cells_y"] = m.cells_y();
    json cells = json::array();
    for (std::size_t jj = 0; jj < m.cells_y(); ++jj)
        for (std::size_t i = 0; i < m.cells_x(); ++i) {
            const auto& atoms = m.atoms(i, jj);
            if (atoms.empty()) continue;
            json cell;
            cell["i"] = i;
            cell["j"] = jj;
            json as = json::array();
            for (const Atom& a : atoms)
                as.push_back({{"m", json::array({json::array({a.m.a, a.m.b}),
                                                 json::array({a.m.c, a.m.d})})},
                              {"w", a.w}});
            cell["atoms"] = std::move(as);
            cells.push_back(std::move(cell));
        }
    j["cells"] = std::move(cells);
    return j;
}

EmpiricalYoungMeasure measure_from_json(const json& j) {
    if (!j.contains("domain") || !j["domain"].is_object())
        throw SchemaError("EmpiricalYoungMeasure: missing domain object");
    const json& d = j["domain"];
    Rect dom{require_num(d, "x0"), require_num(d, "y0"),
             require_num(d, "w"), require_num(d, "h")};
    double cs = require_num(j, "cell_size");
    std::size_t cx = std::size_t(require_num(j, "cells_x"));
    std::size_t cy = std::size_t(require_num(j, "cells_y"));
    EmpiricalYoungMeasure m(dom, cs, cx, cy);
    for (const auto& cell : require_array(j, "cells")) {
        std::size_t i = std::size_t(require_num(cell, "i"));
        std::size_t jj = std::size_t(require_num(cell, "j"));
        if (i >= cx || jj >= cy)
            throw SchemaError("EmpiricalYoungMeasure: cell index out of range");
        for (const auto& a : require_array(cell, "atoms")) {
            const json& mm = require_array(a, "m");
            if (mm.size() != 2) throw SchemaError("atom matrix must be 2x2");
            Vec2 r0 = vec_from(mm[0]), r1 = vec_from(mm[1]);
            m.atoms(i, jj).push_back({Mat2{r0.x, r0.y, r1.x, r1.y}, require_num(a, "w")});
        }
    }
    return m;
}

std::string distortion_csv(const DistortionReport& rep) {
    std::string out = "cell_i,cell_j,distortion,det\r\n";
    for (const DistortionCell& c : rep.cells) {
        out += std::to_string(c.i) + "," + std::to_string(c.j) + "," +
               (std::isfinite(c.distortion) ? num(c.distortion) : "inf") + "," +
               num(c.det) + "\r\n";
    }
    return out;
}

std::string qs_report_csv(const QSReport& rep) {
    std::string out = "t,h,ratio\r\n";
    for (const QSWitness& w : rep.witnesses)
        out += num(w.t) + "," + num(w.h) + "," + num(w.ratio) + "\r\n";
    return out;
}

std::string trace_csv(const std::string& column, const std::vector<double>& values) {
    std::string out = "step," + column + "\r\n";
    for (std::size_t i = 0; i < values.size(); ++i)
        out += std::to_string(i) + "," + num(values[i]) + "\r\n";
    return out;
}

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

// Blue -> white -> red ramp on log-distortion; gray for degenerate cells.
std::string ramp_color(double distortion, double sup) {
    if (!std::isfinite(distortion)) return "#606060";
    double hi = std::max(1.0 + 1e-12, sup);
    double t = std::log(std::max(1.0, distortion)) / std::log(hi);
    t = std::clamp(t, 0.0, 1.0);
    int r = int(std::lround(255.0 * t));
    int g = int(std::lround(255.0 * (1.0 - 0.6 * t)));
    int b = int(std::lround(255.0 * (1.0 - t)));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

constexpr double kSvgScale = 512.0;

std::string svg_open(double w, double h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(w) +
           "\" height=\"" + fmt2(h) + "\" viewBox=\"0 0 " + fmt2(w) + " " + fmt2(h) +
           "\">\n";
}

}  // namespace

std::string svg_heatmap(const GridMap& m) {
    GradientField g = gradient_field(m);
    DistortionReport rep = distortion(g);
    double sc = kSvgScale / std::max(m.domain().w, m.domain().h);
    double W = m.domain().w * sc, H = m.domain().h * sc;
    double cell = m.spacing() * sc;
    std::string out = svg_open(W, H);
    for (const DistortionCell& c : rep.cells) {
        double x = double(c.i) * cell;
        double y = H - double(c.j + 1) * cell;  // SVG y grows downward
        out += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(y) + "\" width=\"" +
               fmt2(cell) + "\" height=\"" + fmt2(cell) + "\" style=\"fill:" +
               ramp_color(c.distortion, rep.sup) + "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string svg_cutoff_overlay(const CutoffResult& cut, const GridMap& y) {
    const Partition& part = cut.partition;
    const Rect& dom = y.domain();
    double sc = kSvgScale / std::max(dom.w, dom.h);
    double W = dom.w * sc, H = dom.h * sc;
    double cell = part.eps * sc;

    GradientField g = gradient_field(cut.omega);
    DistortionReport rep = distortion(g);
    double fine = cut.omega.spacing() * sc;

    std::string out = svg_open(W, H);
    for (const DistortionCell& c : rep.cells) {
        double x = double(c.i) * fine;
        double yy = H - double(c.j + 1) * fine;
        out += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(yy) + "\" width=\"" +
               fmt2(fine) + "\" height=\"" + fmt2(fine) + "\" style=\"fill:" +
               ramp_color(c.distortion, rep.sup) + "\"/>\n";
    }
    auto tint = [&](const std::vector<CellIndex>& cells, const char* color) {
        for (const CellIndex& c : cells) {
            double x = double(c.i) * cell;
            double yy = H - double(c.j + 1) * cell;
            out += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(yy) + "\" width=\"" +
                   fmt2(cell) + "\" height=\"" + fmt2(cell) + "\" style=\"fill:" +
                   std::string(color) + ";fill-opacity:0.25\"/>\n";
        }
    };
    tint(part.outer, "#3060ff");
    tint(part.mid, "#ffc000");
    tint(part.inner, "#30c030");

    // Bridge images drawn in image coordinates mapped by the same frame as
    // the domain (the corpus maps are near-identity, so this is legible).
    for (const Bridge& b : cut.bridge_list) {
        std::string pts;
        for (Vec2 p : b.omega.vertices) {
            pts += fmt2((p.x - dom.x0) * sc) + "," + fmt2(H - (p.y - dom.y0) * sc) + " ";
        }
        out += "<polyline points=\"" + pts +
               "\" style=\"fill:none;stroke:#000000;stroke-width:1\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace qcplane::io
