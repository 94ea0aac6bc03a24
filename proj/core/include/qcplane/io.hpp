#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qcplane/cutoff.hpp"
#include "qcplane/extension.hpp"
#include "qcplane/gradient.hpp"
#include "qcplane/grid_map.hpp"
#include "qcplane/homeo1d.hpp"
#include "qcplane/young.hpp"

namespace qcplane::io {

// Malformed or schema-violating input files. The CLI maps this to exit
// status 2, as opposed to mathematical precondition failures (exit 3).
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Shortest round-trip decimal representation; used everywhere a number is
// emitted so that repeated runs are byte-identical.
std::string num(double v);

nlohmann::json load_json(const std::string& path);
void save_text(const std::string& path, const std::string& content);

// GridMap: {domain:{x0,y0,w,h}, spacing, values:[[u,v],...]} row-major,
// missing nodes stored as null.
nlohmann::json to_json(const GridMap& m);
GridMap grid_map_from_json(const nlohmann::json& j);

// Homeo1D: {a, b, breakpoints:[...], values:[...]}.
nlohmann::json to_json(const Homeo1D& s);
Homeo1D homeo_from_json(const nlohmann::json& j);

// PlanarCurve: {closed, vertices:[[x,y],...]}.
nlohmann::json to_json(const PlanarCurve& c);
PlanarCurve curve_from_json(const nlohmann::json& j);

// BoundaryMap: {params:[...], points:[[x,y],...]}.
nlohmann::json to_json(const BoundaryMap& b);
BoundaryMap boundary_map_from_json(const nlohmann::json& j);

// EmpiricalYoungMeasure: {domain, cell_size, cells_x, cells_y,
// cells:[{i,j,atoms:[{m:[[a,b],[c,d]],w},...]},...]} (empty cells omitted).
nlohmann::json to_json(const EmpiricalYoungMeasure& m);
EmpiricalYoungMeasure measure_from_json(const nlohmann::json& j);

// RFC-4180 (CRLF line endings, header row).
std::string distortion_csv(const DistortionReport& rep);
std::string qs_report_csv(const QSReport& rep);
std::string trace_csv(const std::string& column, const std::vector<double>& values);

// Self-contained SVG (inline styles only).
std::string svg_heatmap(const GridMap& m);
std::string svg_cutoff_overlay(const CutoffResult& cut, const GridMap& y);

}  // namespace qcplane::io
