#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "../integrate/assembly.hpp"
#include "../kresling/assembly.hpp"
#include "../mechanics/models.hpp"
#include "../metashell/outline.hpp"

namespace metaori::config {

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

// Kresling pattern with angles kept in degrees, as written in documents.
struct KreslingConfig {
    int n = 6;
    double a = 0, b = 0;
    double theta_deg = 0, alpha_deg = 0;
    double t_face = 0.8;
    int levels = 1;
    kresling::Chirality chirality = kresling::Chirality::Right;

    kresling::KreslingParams params() const
    {
        kresling::KreslingParams p;
        p.n = n;
        p.a = a;
        p.b = b;
        p.theta = units::rad(theta_deg);
        p.alpha = units::rad(alpha_deg);
        p.t_face = t_face;
        p.levels = levels;
        p.chirality = chirality;
        return p;
    }

    static KreslingConfig from(const kresling::KreslingParams& p)
    {
        KreslingConfig k;
        k.n = p.n;
        k.a = p.a;
        k.b = p.b;
        k.theta_deg = units::deg(p.theta);
        k.alpha_deg = units::deg(p.alpha);
        k.t_face = p.t_face;
        k.levels = p.levels;
        k.chirality = p.chirality;
        return k;
    }
};

struct AnalysisOptions {
    int fd_samples = 201;
    int sequence_steps = 400;
    int sequence_samples = 401;
};

struct SegmentConfig {
    double infill = 1.0;
    int levels = 1;  // mirrored pairs of the pattern in this segment
};

struct DesignConfig {
    KreslingConfig kresling;
    metashell::MetashellParams metashell;
    mechanics::MaterialParams material;
    integrate::IntegrateOptions integration;
    AnalysisOptions analysis;
    std::vector<SegmentConfig> segments;

    // Explicit segments, or one per shell row with an even share of the pattern levels.
    std::vector<mechanics::SegmentSpec> segment_specs() const;
};

namespace detail {

inline std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

// Numbers may be given bare or as "<value> <unit>" strings.
inline double quantity(const json& v, const std::string& unit, const std::string& path)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(s, &used);
        } catch (const std::exception&) {
            fail(ErrorKind::SchemaError, path + ": expected a number");
        }
        std::string u = s.substr(used);
        u.erase(0, u.find_first_not_of(' '));
        if (u.empty() || u == unit) return x;
        fail(ErrorKind::UnitError, path + ": unit '" + u + "' given where '" + (unit.empty() ? "none" : unit) + "' is required");
    }
    fail(ErrorKind::SchemaError, path + ": expected a number");
}

class Reader {
public:
    Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object()) fail(ErrorKind::SchemaError, (path_.empty() ? "/" : path_) + ": expected an object");
    }

    void number(const char* key, double& x, const char* unit, double = -INFINITY, double = INFINITY)
    {
        if (const json* v = take(key)) x = quantity(*v, unit, detail::join(path_, key));
    }
    void integer(const char* key, int& x, int = INT32_MIN, int = INT32_MAX)
    {
        if (const json* v = take(key)) {
            if (!v->is_number_integer()) fail(ErrorKind::SchemaError, detail::join(path_, key) + ": expected an integer");
            x = v->get<int>();
        }
    }
    void number_list(const char* key, std::vector<double>& x, const char* unit)
    {
        if (const json* v = take(key)) {
            if (!v->is_array()) fail(ErrorKind::SchemaError, detail::join(path_, key) + ": expected an array");
            x.clear();
            for (std::size_t i = 0; i < v->size(); ++i)
                x.push_back(quantity((*v)[i], unit, detail::join(path_, key) + "/" + std::to_string(i)));
        }
    }
    template <typename E>
    void choice(const char* key, E& x, const std::vector<std::pair<const char*, E>>& options)
    {
        if (const json* v = take(key)) {
            if (v->is_string())
                for (const auto& [name, val] : options)
                    if (v->get<std::string>() == name) {
                        x = val;
                        return;
                    }
            fail(ErrorKind::SchemaError, detail::join(path_, key) + ": not one of the allowed values");
        }
    }
    template <typename F>
    void section(const char* key, F&& f)
    {
        if (const json* v = take(key)) {
            Reader r(*v, detail::join(path_, key));
            f(r);
            r.finish();
        }
    }
    template <typename T, typename F>
    void list(const char* key, std::vector<T>& out, F&& f)
    {
        if (const json* v = take(key)) {
            if (!v->is_array()) fail(ErrorKind::SchemaError, detail::join(path_, key) + ": expected an array");
            out.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                T item{};
                Reader r((*v)[i], detail::join(path_, key) + "/" + std::to_string(i));
                f(r, item);
                r.finish();
                out.push_back(item);
            }
        }
    }
    void skip(const char* key) { seen_.insert(key); }

    void finish() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key())) fail(ErrorKind::SchemaError, detail::join(path_, it.key()) + ": unknown key");
    }

private:
    const json* take(const char* key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

class Writer {
public:
    json out = json::object();

    void number(const char* key, double& x, const char*, double = 0, double = 0) { out[key] = x; }
    void integer(const char* key, int& x, int = 0, int = 0) { out[key] = x; }
    void number_list(const char* key, std::vector<double>& x, const char*) { out[key] = x; }
    template <typename E>
    void choice(const char* key, E& x, const std::vector<std::pair<const char*, E>>& options)
    {
        for (const auto& [name, val] : options)
            if (val == x) out[key] = name;
    }
    template <typename F>
    void section(const char* key, F&& f)
    {
        Writer w;
        f(w);
        out[key] = w.out;
    }
    template <typename T, typename F>
    void list(const char* key, std::vector<T>& items, F&& f)
    {
        json arr = json::array();
        for (T& item : items) {
            Writer w;
            f(w, item);
            arr.push_back(w.out);
        }
        if (!items.empty()) out[key] = arr;
    }
    void skip(const char*) {}
};

class SchemaWriter {
public:
    json out = json{{"type", "object"}, {"additionalProperties", false}, {"properties", json::object()}};

    void number(const char* key, double& x, const char* unit, double lo = -INFINITY, double hi = INFINITY)
    {
        json s{{"type", "number"}, {"default", x}};
        if (*unit) s["x-unit"] = unit;
        if (std::isfinite(lo)) s["minimum"] = lo;
        if (std::isfinite(hi)) s["maximum"] = hi;
        out["properties"][key] = s;
    }
    void integer(const char* key, int& x, int lo = INT32_MIN, int hi = INT32_MAX)
    {
        json s{{"type", "integer"}, {"default", x}};
        if (lo != INT32_MIN) s["minimum"] = lo;
        if (hi != INT32_MAX) s["maximum"] = hi;
        out["properties"][key] = s;
    }
    void number_list(const char* key, std::vector<double>& x, const char* unit)
    {
        json s{{"type", "array"}, {"items", {{"type", "number"}}}, {"default", x}};
        if (*unit) s["x-unit"] = unit;
        out["properties"][key] = s;
    }
    template <typename E>
    void choice(const char* key, E& x, const std::vector<std::pair<const char*, E>>& options)
    {
        json e = json::array();
        std::string def;
        for (const auto& [name, val] : options) {
            e.push_back(name);
            if (val == x) def = name;
        }
        out["properties"][key] = json{{"type", "string"}, {"enum", e}, {"default", def}};
    }
    template <typename F>
    void section(const char* key, F&& f)
    {
        SchemaWriter w;
        f(w);
        out["properties"][key] = w.out;
    }
    template <typename T, typename F>
    void list(const char* key, std::vector<T>&, F&& f)
    {
        SchemaWriter w;
        T item{};
        f(w, item);
        out["properties"][key] = json{{"type", "array"}, {"items", w.out}};
    }
    void skip(const char*) {}
};

template <typename V>
void visit(V& v, KreslingConfig& k)
{
    v.integer("n", k.n, 3, 64);
    v.number("a", k.a, "mm", 0);
    v.number("b", k.b, "mm", 0);
    v.number("theta_deg", k.theta_deg, "deg", 0, 180);
    v.number("alpha_deg", k.alpha_deg, "deg", 0, 180);
    v.number("t_face", k.t_face, "mm", 0);
    v.integer("levels", k.levels, 1);
    v.choice("chirality", k.chirality,
             std::vector<std::pair<const char*, kresling::Chirality>>{{"right", kresling::Chirality::Right},
                                                                      {"left", kresling::Chirality::Left}});
}

template <typename V>
void visit(V& v, metashell::MetashellParams& p)
{
    v.number("c", p.c, "mm", 0);
    v.number("l", p.l, "mm", 0);
    v.number("t", p.t, "mm", 0);
    v.number("h", p.h, "mm", 0);
    v.number("r", p.r, "mm", 0);
    v.number("delta", p.delta, "mm", 0);
    v.number("wall_height", p.wall_height, "mm", 0);
    v.integer("rows", p.rows, 1);
    v.integer("cols", p.cols, 2);
    v.number("depth", p.depth, "mm", 0);
    v.number_list("infill_per_row", p.infill_per_row, "");
    v.number("beam_gap", p.beam_gap, "mm", 0);
    v.number("shuttle_width", p.shuttle_width, "mm", 0);
    v.number("ring_thickness", p.ring_thickness, "mm", 0);
    v.number("apex_clearance", p.apex_clearance, "mm", 0);
    v.number("pitch_compression", p.pitch_compression, "", 0);
    v.number("sample_spacing", p.sample_spacing, "mm", 0);
    v.choice("fillet", p.fillet,
             std::vector<std::pair<const char*, metashell::FilletProfile>>{
                 {"circular", metashell::FilletProfile::Circular}, {"linear", metashell::FilletProfile::Linear}});
}

template <typename V>
void visit(V& v, mechanics::MaterialParams& m)
{
    v.number("E", m.E, "MPa", 0);
    v.number("s_min", m.s_min, "", 0, 1);
    v.choice("bar_area_model", m.bar_area_model,
             std::vector<std::pair<const char*, mechanics::BarAreaModel>>{
                 {"membrane", mechanics::BarAreaModel::Membrane}, {"bending", mechanics::BarAreaModel::Bending}});
    v.number("bar_area", m.bar_area, "mm^2", 0);
    v.number("bar_stiffness_factor", m.bar_stiffness_factor, "", 0);
    v.number("hinge_stiffness", m.hinge_stiffness, "N", 0);
}

template <typename V>
void visit(V& v, integrate::IntegrateOptions& o)
{
    v.number("lid_thickness", o.lid_thickness, "mm", 0);
    v.number("port_diameter", o.port_diameter, "mm", 0);
    v.number("clearance", o.clearance, "mm", 0);
    v.integer("port_segments", o.port_segments, 8);
}

template <typename V>
void visit(V& v, AnalysisOptions& a)
{
    v.integer("fd_samples", a.fd_samples, 3);
    v.integer("sequence_steps", a.sequence_steps, 2);
    v.integer("sequence_samples", a.sequence_samples, 3);
}

template <typename V>
void visit(V& v, DesignConfig& c)
{
    v.skip("schema");
    v.skip("preset");
    v.section("kresling", [&](auto& s) { visit(s, c.kresling); });
    v.section("metashell", [&](auto& s) { visit(s, c.metashell); });
    v.section("material", [&](auto& s) { visit(s, c.material); });
    v.section("integration", [&](auto& s) { visit(s, c.integration); });
    v.section("analysis", [&](auto& s) { visit(s, c.analysis); });
    v.list("segments", c.segments, [](auto& s, SegmentConfig& g) {
        s.number("infill", g.infill, "", 0, 1);
        s.integer("levels", g.levels, 1);
    });
}

} // namespace detail

// Published dimensions; the pattern closes into four 9.625 mm layers twisted 20 degrees.
inline DesignConfig paper_preset()
{
    DesignConfig c;
    c.metashell.pitch_compression = units::pi * 41.25 / 140.0;
    c.kresling = KreslingConfig::from(kresling::design_for_state(6, 16.0, 38.5 / 4.0, units::rad(20.0), 0.8, 2));
    c.material.bar_area_model = mechanics::BarAreaModel::Bending;
    return c;
}

// Two rows, bottom 99% and top 60% infill, eight 7 mm layers.
inline DesignConfig paper_bisegment_preset()
{
    DesignConfig c = paper_preset();
    c.metashell.rows = 2;
    c.metashell.infill_per_row = {0.99, 0.60};
    c.kresling = KreslingConfig::from(kresling::design_for_state(6, 16.0, 7.0, units::rad(20.0), 0.8, 4));
    return c;
}

inline const std::map<std::string, DesignConfig (*)()>& presets()
{
    static const std::map<std::string, DesignConfig (*)()> p{{"paper", &paper_preset},
                                                             {"paper-bisegment", &paper_bisegment_preset}};
    return p;
}

inline DesignConfig preset(const std::string& name)
{
    auto it = presets().find(name);
    if (it == presets().end()) fail(ErrorKind::InvariantError, "unknown preset '" + name + "'");
    return it->second();
}

inline std::vector<mechanics::SegmentSpec> DesignConfig::segment_specs() const
{
    std::vector<SegmentConfig> segs = segments;
    if (segs.empty()) {
        const int rows = metashell.rows;
        if (kresling.levels % rows != 0)
            fail(ErrorKind::InvariantError, "pattern levels must divide evenly over the shell rows");
        for (int i = 0; i < rows; ++i) {
            double infill = static_cast<std::size_t>(i) < metashell.infill_per_row.size() ? metashell.infill_per_row[i] : 1.0;
            segs.push_back({infill, kresling.levels / rows});
        }
    }
    std::vector<mechanics::SegmentSpec> out;
    for (const SegmentConfig& g : segs) {
        mechanics::SegmentSpec s;
        s.shell_row = metashell;
        s.shell_row.rows = 1;
        s.shell_row.infill_per_row = {g.infill};
        s.origami_level = kresling.params();
        s.origami_level.levels = g.levels;
        s.infill = g.infill;
        out.push_back(s);
    }
    return out;
}

inline void validate(const DesignConfig& c, bool geometry = true)
{
    try {
        kresling::validate(c.kresling.params());
        metashell::validate(c.metashell);
        if (geometry) metashell::build_unit_cell_outline(c.metashell);
        mechanics::validate(c.material);
        require(c.integration.lid_thickness > 0, ErrorKind::InvalidParams, "integration.lid_thickness must be > 0");
        require(c.integration.clearance >= 0, ErrorKind::InvalidParams, "integration.clearance must be >= 0");
        require(c.analysis.fd_samples >= 3 && c.analysis.sequence_samples >= 3 && c.analysis.sequence_steps >= 2,
                ErrorKind::InvalidParams, "analysis sample counts too small");
        if (!c.segments.empty()) {
            int levels = 0;
            for (const auto& g : c.segments) {
                require(g.infill > 0 && g.infill <= 1, ErrorKind::InvalidParams, "segment infill must lie in (0, 1]");
                require(g.levels >= 1, ErrorKind::InvalidParams, "segment levels must be >= 1");
                levels += g.levels;
            }
            require(levels == c.kresling.levels, ErrorKind::InvalidParams,
                    "segment levels must add up to kresling.levels");
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InvalidParams) fail(ErrorKind::InvariantError, e.what());
        throw;
    }
}

inline DesignConfig from_json(const json& doc, bool geometry = true)
{
    if (!doc.is_object()) fail(ErrorKind::SchemaError, "/: expected an object");
    if (doc.contains("schema")) {
        const json& s = doc["schema"];
        if (!s.is_number_integer()) fail(ErrorKind::SchemaError, "/schema: expected an integer");
        if (s.get<int>() != schema_version)
            fail(ErrorKind::SchemaError, "/schema: unsupported version " + std::to_string(s.get<int>()));
    }
    DesignConfig c;
    if (doc.contains("preset")) {
        if (!doc["preset"].is_string()) fail(ErrorKind::SchemaError, "/preset: expected a string");
        c = preset(doc["preset"].get<std::string>());
    } else {
        c.kresling = paper_preset().kresling;
    }
    detail::Reader r(doc, "");
    detail::visit(r, c);
    r.finish();
    // the infill list follows the row count unless it was given
    bool infill_given = doc.contains("metashell") && doc["metashell"].is_object() && doc["metashell"].contains("infill_per_row");
    if (!infill_given && static_cast<int>(c.metashell.infill_per_row.size()) != c.metashell.rows && c.metashell.rows >= 1)
        c.metashell.infill_per_row.resize(c.metashell.rows, c.metashell.infill_per_row.empty() ? 1.0 : c.metashell.infill_per_row.back());
    validate(c, geometry);
    return c;
}

inline DesignConfig parse_config(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::SchemaError, std::string("/: not valid JSON (") + e.what() + ")");
    }
    return from_json(doc);
}

inline json to_json(const DesignConfig& cfg)
{
    DesignConfig c = cfg;
    detail::Writer w;
    w.out["schema"] = schema_version;
    detail::visit(w, c);
    return w.out;
}

inline std::string serialize(const DesignConfig& c) { return to_json(c).dump(2) + "\n"; }

inline json schema()
{
    DesignConfig c = paper_preset();
    detail::SchemaWriter w;
    detail::visit(w, c);
    w.out["$schema"] = "https://json-schema.org/draft/2020-12/schema";
    w.out["title"] = "Meta-Ori design configuration";
    w.out["properties"]["schema"] = json{{"type", "integer"}, {"const", schema_version}};
    json names = json::array();
    for (const auto& [name, _] : presets()) names.push_back(name);
    w.out["properties"]["preset"] = json{{"type", "string"}, {"enum", names}};
    return w.out;
}

} // namespace metaori::config
