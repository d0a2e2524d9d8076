#pragma once

#include <string>

#include "pipeline.hpp"

namespace metaori::config {

struct Response {
    int status = 200;
    json body;
};

// 1 validation, 2 solver, 3 io.
inline int error_class(ErrorKind k)
{
    switch (k) {
    case ErrorKind::SchemaError:
    case ErrorKind::UnitError:
    case ErrorKind::InvariantError:
    case ErrorKind::InvalidParams:
    case ErrorKind::GeometryConflict:
    case ErrorKind::BadPath:
    case ErrorKind::ParseError:
    case ErrorKind::DegeneratePattern:
    case ErrorKind::OutOfDomain:
    case ErrorKind::FitError:
    case ErrorKind::AlignmentError:
    case ErrorKind::InvalidMesh:
    case ErrorKind::EmptyMesh:
    case ErrorKind::ModelDomain:
        return 1;
    case ErrorKind::IoError:
    case ErrorKind::TruncatedFile:
        return 3;
    default:
        return 2;
    }
}

inline json error_body(const Error& e)
{
    return json{{"error", kind_name(e.kind())}, {"message", e.what()}};
}

namespace detail {

// A body is either a config document or {"config": document, ...}.
inline DesignConfig request_config(const json& body)
{
    if (body.is_object() && body.contains("config")) return from_json(body["config"]);
    return from_json(body);
}

inline json curve_json(const mechanics::FDCurve& c) { return json{{"d_mm", c.d}, {"F_N", c.F}}; }

inline json events_json(const mechanics::EventList& ev)
{
    json arr = json::array();
    for (const auto& e : ev.events)
        arr.push_back({{"type", e.type == mechanics::Event::Maximum ? "max" : "min"},
                       {"branch", e.branch},
                       {"V_mL", e.x},
                       {"P_mbar", e.y}});
    return arr;
}

inline double extension_of(const json& body, const DesignConfig& c)
{
    if (!body.is_object()) return 0.0;
    if (body.contains("extension")) {
        if (!body["extension"].is_number()) fail(ErrorKind::SchemaError, "/extension: expected a number");
        return body["extension"].get<double>();
    }
    if (body.contains("state")) {
        std::string s = body["state"].is_string() ? body["state"].get<std::string>() : "";
        if (s == "closed") return 0.0;
        // open: every row at its second stable state
        if (s == "open") return mechanics::stable_displacement(mechanics::metashell_fd(c.segment_specs().front().shell_row, c.material));
        fail(ErrorKind::SchemaError, "/state: expected \"open\" or \"closed\"");
    }
    return 0.0;
}

} // namespace detail

inline json mesh_response(const json& body)
{
    DesignConfig c = detail::request_config(body);
    double e = detail::extension_of(body, c);
    auto a = build_meta_ori(c, e);
    MeshReport r = validate_mesh(a.mesh);
    json v = json::array(), t = json::array();
    for (const Vec3& p : a.mesh.vertices) v.push_back({p.x(), p.y(), p.z()});
    for (const Tri& f : a.mesh.triangles) t.push_back({f[0], f[1], f[2]});
    return json{{"extension_mm", e},
                {"height_mm", a.shell.height},
                {"vertices", v},
                {"triangles", t},
                {"report",
                 {{"valid", r.valid()},
                  {"closed_manifold", r.closed_manifold()},
                  {"winding_consistent", r.winding_consistent()},
                  {"boundary_edges", r.boundary_edges},
                  {"nonmanifold_edges", r.nonmanifold_edges},
                  {"degenerate_triangles", r.degenerate_triangles},
                  {"self_intersections", r.self_intersections},
                  {"components", r.components},
                  {"euler_characteristic", r.euler_characteristic},
                  {"volume_mm3", r.signed_volume}}}};
}

inline json curves_response(const json& body)
{
    CurveSet s = evaluate_curves(detail::request_config(body));
    return json{{"fd_meta", detail::curve_json(s.meta)},
                {"fd_ori", detail::curve_json(s.ori)},
                {"fd_combined", detail::curve_json(s.combined)},
                {"pv", {{"V_mL", s.pv.V}, {"P_mbar", s.pv.P}, {"d_mm", s.pv.d}}},
                {"events", detail::events_json(s.pv.events)},
                {"bistable", s.bistable},
                {"snap_pressure_mbar", std::isfinite(s.snap_pressure) ? json(s.snap_pressure) : json(nullptr)},
                {"elongation_pct", std::isfinite(s.elongation) ? json(s.elongation) : json(nullptr)}};
}

inline json sequence_response(const json& body)
{
    auto r = sequence_from_config(detail::request_config(body));
    json segs = json::array();
    std::size_t n = r.d.empty() ? 0 : r.d.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        json d = json::array(), H = json::array(), ev = json::array();
        for (std::size_t k = 0; k < r.d.size(); ++k) {
            d.push_back(r.d[k][i]);
            H.push_back(r.H[k][i]);
        }
        for (const auto& e : r.events)
            if (e.segment == static_cast<int>(i))
                ev.push_back({{"branch", e.branch}, {"V_mL", e.V}, {"P_mbar", e.P}, {"step", e.step}, {"jump", e.jump}});
        segs.push_back({{"d_mm", d}, {"H_mm", H}, {"snaps", ev}});
    }
    return json{{"V_mL", r.V}, {"P_mbar", r.P}, {"branch", r.branch}, {"segments", segs}};
}

inline json presets_response()
{
    json out = json::object();
    for (const auto& [name, make] : presets()) out[name] = to_json(make());
    return out;
}

// Stateless dispatch: identical requests give identical responses.
inline Response handle(const std::string& method, const std::string& path, const std::string& body)
{
    try {
        if (method == "GET" && path == "/api/presets") return {200, presets_response()};
        if (method == "GET" && path == "/api/schema") return {200, schema()};
        if (method == "POST" && (path == "/api/mesh" || path == "/api/curves" || path == "/api/sequence")) {
            json doc;
            try {
                doc = json::parse(body);
            } catch (const json::parse_error& e) {
                fail(ErrorKind::SchemaError, std::string("/: not valid JSON (") + e.what() + ")");
            }
            if (path == "/api/mesh") return {200, mesh_response(doc)};
            if (path == "/api/curves") return {200, curves_response(doc)};
            return {200, sequence_response(doc)};
        }
        return {404, json{{"error", "NotFound"}, {"message", method + " " + path}}};
    } catch (const Error& e) {
        return {error_class(e.kind()) == 1 ? 400 : error_class(e.kind()) == 3 ? 500 : 422, error_body(e)};
    }
}

} // namespace metaori::config
